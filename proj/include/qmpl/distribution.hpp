#pragma once

#include <string>
#include <vector>

#include "qmpl/eval.hpp"
#include "qmpl/report.hpp"

namespace qmpl {

namespace detail {

// All n-th roots of x, staying exact when possible. Exact mode covers
// n = 1, and n = 2 over Q(i) (square rational magnitudes); everything
// else needs float mode, where roots come from the polar form.
inline std::vector<Scalar> nth_roots(const Scalar& x, int n) {
    require(n >= 1, errc::invalid_parameter, "root order must be >= 1");
    if (n == 1) return {x};
    if (x.is_zero()) return std::vector<Scalar>(static_cast<size_t>(n), x);

    if (x.mode() == ScalarMode::exact) {
        require(n == 2, errc::root_not_representable,
                "exact roots of order > 2 are not rational; use float mode");
        const ExactComplex& e = x.as_exact();
        if (e.is_real()) {
            if (e.re > 0) {
                auto r = exact_sqrt(e.re);
                require(r.has_value(), errc::root_not_representable,
                        "argument has no rational square root");
                Scalar y = Scalar::exact(*r);
                return {y, -y};
            }
            auto r = exact_sqrt(-e.re);
            require(r.has_value(), errc::root_not_representable,
                    "argument has no rational square root");
            Scalar y = Scalar::exact(Rational(0), *r);
            return {y, -y};
        }
        // complex: y = c + d i with c = sqrt((a+|x|)/2), d = b/(2c)
        auto mag = exact_sqrt(norm_sq(e));
        require(mag.has_value(), errc::root_not_representable,
                "argument magnitude is not rational");
        auto c = exact_sqrt((e.re + *mag) / 2);
        require(c.has_value() && *c != 0, errc::root_not_representable,
                "argument has no square root over the rationals with i");
        Rational d = e.im / (2 * *c);
        Scalar y = Scalar::exact(*c, d);
        require((y * y) == x, errc::internal, "square-root reconstruction failed");
        return {y, -y};
    }

    const FloatComplex& f = x.as_float();
    long prec = x.precision_bits();
    BigFloat mag = sqrt(norm_sq(f));
    BigFloat theta = atan2(f.im, f.re);
    BigFloat r = rootn(mag, static_cast<unsigned long>(n));
    BigFloat two_pi = BigFloat::pi(prec) + BigFloat::pi(prec);
    BigFloat nn = BigFloat::from_long(n, prec);
    std::vector<Scalar> roots;
    roots.reserve(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) {
        BigFloat ang = (theta + BigFloat::from_long(t, prec) * two_pi) / nn;
        roots.push_back(Scalar::floating(r * cos(ang), r * sin(ang)));
    }
    return roots;
}

} // namespace detail

// The expanded form of one distribution identity: the series at (x, q^n)
// against the average of the series at all n-th root tuples (y, q), with
// overall coefficient 1/n^depth.
//
// Note the per-depth-slot factor: every slot contributes one averaging
// 1/n, so depth m needs 1/n^m for the root sums to collapse correctly.
struct DistributionRelation {
    Composition comp;
    std::vector<Scalar> x;
    int n = 1;
    Rational coefficient;
    std::vector<std::vector<Scalar>> tuples; // n^depth argument tuples

    json to_json() const {
        json j;
        j["comp"] = comp.indices();
        json xs = json::array();
        for (const auto& s : x) xs.push_back(s.to_string());
        j["x"] = xs;
        j["n"] = n;
        j["coefficient"] = to_string(coefficient);
        json ts = json::array();
        for (const auto& tup : tuples) {
            json row = json::array();
            for (const auto& s : tup) row.push_back(s.to_string());
            ts.push_back(row);
        }
        j["tuples"] = ts;
        return j;
    }
};

// Builds the distribution relation for the supported compositions. The
// general-composition form follows the same root-averaging shape but is
// only exercised experimentally; callers must opt in, and its output is
// meant for numeric checking, not exact assertions.
inline DistributionRelation distribution_expand(const Composition& comp,
                                                const std::vector<Scalar>& x, int n,
                                                bool allow_general = false) {
    require(n >= 1, errc::invalid_parameter, "root order must be >= 1");
    require(comp.depth() == static_cast<int>(x.size()), errc::invalid_parameter,
            "argument count does not match composition depth");
    if (!allow_general) {
        bool supported = comp.indices() == std::vector<int>{2} ||
                         comp.indices() == std::vector<int>{1, 1};
        require(supported, errc::unsupported,
                "composition must be (2) or (1,1); pass allow_general to experiment");
    }

    DistributionRelation rel;
    rel.comp = comp;
    rel.x = x;
    rel.n = n;
    rel.coefficient = pow_int(make_rational(1, n), comp.depth());

    std::vector<std::vector<Scalar>> roots;
    roots.reserve(x.size());
    for (const auto& xi : x) roots.push_back(detail::nth_roots(xi, n));

    std::vector<size_t> pick(x.size(), 0);
    for (;;) {
        std::vector<Scalar> tup;
        tup.reserve(x.size());
        for (size_t i = 0; i < x.size(); ++i) tup.push_back(roots[i][pick[i]]);
        rel.tuples.push_back(std::move(tup));
        size_t i = 0;
        while (i < pick.size() && ++pick[i] == static_cast<size_t>(n)) {
            pick[i] = 0;
            ++i;
        }
        if (i == pick.size()) break;
    }
    return rel;
}

// Verifies the relation at cutoffs M = floor(K/n) for the left side and
// K for the right side. With that matching the surviving terms reindex
// one-to-one (k = n*m) and non-multiples of n cancel inside the root
// sums, so the two truncated values agree identically: exact mode must
// give deviation 0 and the float budget is a pure rounding envelope, no
// series tails enter. Out-of-domain points still satisfy the truncated
// identity but say nothing about the full series, so a tolerance pass
// there is demoted to unsupported.
inline VerificationReport verify_distribution(const DistributionRelation& rel,
                                              const QParam& q, long K) {
    require(K >= 0, errc::invalid_parameter, "negative truncation bound");
    QParam qn = QParam::make(pow_int(q.q(), rel.n));
    TruncationSpec lhs_trunc{K / rel.n, TailMethod::geometric};
    TruncationSpec rhs_trunc{K, TailMethod::geometric};

    EvalResult lhs = eval_qmpl(rel.comp, rel.x, qn, lhs_trunc);

    long prec = q.q().precision_bits() > 0 ? detail::working_precision(rel.x, q.q()) : 0;
    Scalar sum = Scalar::exact_long(0).to_mode(q.mode(), std::max<long>(prec, 53));
    double rhs_majorant = 0.0;
    bool domain_ok = lhs.tail.is_finite();
    for (const auto& tup : rel.tuples) {
        EvalResult rt = eval_qmpl(rel.comp, tup, q, rhs_trunc);
        sum += rt.value;
        rhs_majorant += rt.abs_majorant;
        if (!rt.tail.is_finite()) domain_ok = false;
    }
    Scalar coeff = Scalar::exact(rel.coefficient).to_mode(q.mode(), std::max<long>(prec, 53));
    Scalar rhs = coeff * sum;
    double cd = std::abs(to_double(rel.coefficient));

    VerificationReport rep;
    rep.relation_id = "distribution";
    rep.parameters["relation"] = rel.to_json();
    rep.parameters["q"] = q.q().to_string();
    rep.parameters["K"] = K;
    rep.parameters["M"] = K / rel.n;
    rep.lhs = lhs.value.to_string();
    rep.rhs = rhs.to_string();
    rep.deviation = deviation_between(lhs.value, rhs);
    if (q.mode() == ScalarMode::floating) {
        rep.tail_budget = detail::rounding_budget(
            prec, lhs.abs_majorant + cd * rhs_majorant, rel.comp.depth(), K);
    }
    rep.verdict = decide_verdict(rep.deviation, rep.tail_budget);
    if (!domain_ok && rep.verdict == Verdict::tolerance_pass)
        rep.verdict = Verdict::unsupported;
    return rep;
}

} // namespace qmpl
