#pragma once

#include <algorithm>
#include <vector>

#include "qmpl/eval.hpp"
#include "qmpl/qcalc.hpp"
#include "qmpl/report.hpp"

namespace qmpl {

namespace detail {

inline json scalar_vec_json(const std::vector<Scalar>& z) {
    json arr = json::array();
    for (const auto& s : z) arr.push_back(s.to_string());
    return arr;
}

} // namespace detail

// Index-lowering identity for the q-derivative in one argument slot:
// applying D_q in slot j lowers n_j by one and divides by (1 - q) z_j.
// Both sides are evaluated at the same truncation, where the identity
// holds term by term, so exact mode must produce an exact zero.
inline VerificationReport check_derivative_relation(const Composition& n, int slot,
                                                    const std::vector<Scalar>& z,
                                                    const QParam& q,
                                                    const TruncationSpec& trunc) {
    int m = n.depth();
    require(slot >= 1 && slot <= m, errc::invalid_parameter, "slot out of range");
    require(static_cast<int>(z.size()) == m, errc::invalid_parameter,
            "argument count does not match composition depth");
    size_t j = static_cast<size_t>(slot - 1);
    require(!z[j].is_zero(), errc::singular_point,
            "q-derivative slot argument must be nonzero");

    TruncationSpec inner{trunc.K, TailMethod::none};
    double majorant = 0.0;

    auto f = [&](const Scalar& zj) -> Scalar {
        std::vector<Scalar> zz = z;
        zz[j] = zj;
        EvalResult r = detail::eval_qmpl_raw(n.indices(), zz, q, inner);
        majorant += r.abs_majorant;
        return r.value;
    };
    Scalar lhs = q_derivative(f, z[j], q);

    std::vector<int> lowered = n.indices();
    lowered[j] -= 1;
    EvalResult low = detail::eval_qmpl_raw(lowered, z, q, inner);

    long prec = detail::working_precision(z, q.q());
    Scalar one = Scalar::exact_long(1).to_mode(q.mode(), prec);
    Scalar denom = (one - q.q()) * z[j];
    Scalar rhs = low.value / denom;

    VerificationReport rep;
    rep.relation_id = "derivative";
    rep.parameters["comp"] = n.to_string();
    rep.parameters["slot"] = slot;
    rep.parameters["z"] = detail::scalar_vec_json(z);
    rep.parameters["q"] = q.q().to_string();
    rep.parameters["K"] = trunc.K;
    rep.lhs = lhs.to_string();
    rep.rhs = rhs.to_string();
    rep.deviation = deviation_between(lhs, rhs);

    if (q.mode() == ScalarMode::floating) {
        double qd_scale = 1.0 / std::max(abs_approx(denom), 1e-300);
        double total_majorant = (majorant + low.abs_majorant) * qd_scale;
        rep.tail_budget = detail::rounding_budget(q.q().precision_bits(), total_majorant,
                                                  m, trunc.K);
    }
    rep.verdict = decide_verdict(rep.deviation, rep.tail_budget);
    return rep;
}

struct LimitOptions {
    double ratio_lo = 0.4;
    double ratio_hi = 0.6;
    int settle = 0; // ratios before this index are ignored
};

// Classical-limit probe: the weight-scaled q-deformed value should
// approach the classical value as q runs toward 1, and for the dyadic
// sequence q = 1 - 2^-j the gap should roughly halve per step. The
// verdict is about the trend of the deviations, not a single tolerance.
inline VerificationReport classical_limit_check(const Composition& n,
                                                const std::vector<Scalar>& z,
                                                const std::vector<QParam>& qs,
                                                const TruncationSpec& trunc,
                                                const LimitOptions& opt = {}) {
    require(!qs.empty(), errc::invalid_parameter, "empty q sequence");
    require(opt.ratio_lo > 0.0 && opt.ratio_lo < opt.ratio_hi && opt.ratio_hi < 1.0,
            errc::invalid_parameter, "ratio window must satisfy 0 < lo < hi < 1");
    for (const auto& q : qs)
        require(q.regime() == Regime::inside, errc::invalid_parameter,
                "classical limit needs |q| < 1");
    require(detail::qmpl_domain_ok(z, Regime::inside), errc::domain_violation,
            "classical limit needs interior arguments");

    int w = n.weight();
    EvalResult cls = eval_classical_mpl(n, z, trunc);

    std::vector<double> devs;
    devs.reserve(qs.size());
    Scalar last_lhs, last_rhs = cls.value;
    for (const auto& q : qs) {
        long prec = detail::working_precision(z, q.q());
        Scalar one = Scalar::exact_long(1).to_mode(q.mode(), prec);
        Scalar scale = pow_int(one - q.q(), w);
        EvalResult qv = eval_qmpl(n, z, q, trunc);
        last_lhs = scale * qv.value;
        devs.push_back(abs_approx(last_lhs - cls.value));
    }

    std::vector<double> ratios;
    for (size_t i = 0; i + 1 < devs.size(); ++i)
        ratios.push_back(devs[i] == 0.0 ? 0.0 : devs[i + 1] / devs[i]);

    VerificationReport rep;
    rep.relation_id = "classical_limit";
    rep.parameters["comp"] = n.to_string();
    rep.parameters["z"] = detail::scalar_vec_json(z);
    json qs_json = json::array();
    for (const auto& q : qs) qs_json.push_back(q.q().to_string());
    rep.parameters["q_sequence"] = qs_json;
    rep.parameters["K"] = trunc.K;
    rep.lhs = last_lhs.to_string();
    rep.rhs = last_rhs.to_string();
    rep.deviation.value = devs.back();
    rep.tail_budget = devs.front();

    json jdev = json::array(), jratio = json::array();
    for (double d : devs) jdev.push_back(format_double(d));
    for (double r : ratios) jratio.push_back(format_double(r));
    rep.details["deviations"] = jdev;
    rep.details["ratios"] = jratio;
    rep.details["window"] = {opt.ratio_lo, opt.ratio_hi};
    rep.details["settle"] = opt.settle;

    bool all_zero = std::all_of(devs.begin(), devs.end(),
                                [](double d) { return d == 0.0; });
    if (all_zero) {
        rep.deviation.exact_zero = (qs.front().mode() == ScalarMode::exact);
        rep.verdict = rep.deviation.exact_zero ? Verdict::exact_pass
                                               : Verdict::tolerance_pass;
        rep.details["note"] = "all deviations vanished";
        return rep;
    }

    size_t usable_from = static_cast<size_t>(std::max(opt.settle, 0));
    if (ratios.size() <= usable_from) {
        rep.verdict = Verdict::unsupported;
        rep.details["note"] = "trend assessment needs more points in the q sequence";
        return rep;
    }

    bool ok = true;
    for (size_t i = usable_from; i < ratios.size(); ++i)
        ok = ok && ratios[i] >= opt.ratio_lo && ratios[i] <= opt.ratio_hi;
    rep.verdict = ok ? Verdict::tolerance_pass : Verdict::fail;
    return rep;
}

// Truncated fundamental theorem of the q-calculus. With F the Jackson
// integral of f cut off after N lattice points, the q-derivative of F
// returns the integrand up to the boundary term of the cut:
//   D_q F(a) = f(a) - q^N f(a q^N).
// This holds term by term at matching N, so exact mode must give an
// exact zero. Monomial integrands c t^m keep every step closed in both
// scalar modes.
inline VerificationReport check_jackson_fundamental(const Rational& c, int m,
                                                    const Scalar& a, const QParam& q,
                                                    long cap) {
    require(m >= 0, errc::invalid_parameter, "monomial degree must be >= 0");
    bool q_positive = q.q().is_real() &&
                      (q.mode() == ScalarMode::exact
                           ? q.q().as_exact().re > 0
                           : q.q().as_float().re > BigFloat::from_long(0, q.q().precision_bits()));
    require(q_positive, errc::invalid_parameter,
            "the truncated fundamental theorem check needs q real in (0, 1)");
    long prec = q.q().precision_bits() > 0
                    ? detail::working_precision({a}, q.q())
                    : 0;
    Scalar coeff = Scalar::exact(c).to_mode(q.mode(), std::max<long>(prec, 53));
    auto f = [&](const Scalar& t) { return coeff * pow_int(t, m); };
    auto F = [&](const Scalar& x) { return jackson_integral(f, x, q, cap).value; };

    Scalar lhs = q_derivative(F, a, q);
    Scalar qN = pow_int(q.q(), cap);
    Scalar rhs = f(a) - qN * f(a * qN);

    VerificationReport rep;
    rep.relation_id = "integral";
    rep.parameters["c"] = to_string(c);
    rep.parameters["m"] = m;
    rep.parameters["a"] = a.to_string();
    rep.parameters["q"] = q.q().to_string();
    rep.parameters["lattice_cap"] = cap;
    rep.lhs = lhs.to_string();
    rep.rhs = rhs.to_string();
    rep.deviation = deviation_between(lhs, rhs);
    if (q.mode() == ScalarMode::floating) {
        double maj = 64.0 * (std::abs(to_double(c)) + 1.0);
        rep.tail_budget = detail::rounding_budget(prec, maj, 1, cap);
    }
    rep.verdict = decide_verdict(rep.deviation, rep.tail_budget);
    return rep;
}

} // namespace qmpl
