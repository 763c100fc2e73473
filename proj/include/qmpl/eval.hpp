#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "qmpl/composition.hpp"
#include "qmpl/qparam.hpp"
#include "qmpl/scalar.hpp"

namespace qmpl {

enum class TailMethod { geometric, none };

struct TruncationSpec {
    long K = 40;
    TailMethod tail_method = TailMethod::geometric;
};

// Tri-state tail estimate. "finite" carries a rigorous upper bound on the
// dropped remainder, "unbounded" marks an evaluation outside the argument
// domain we can certify, "none" means the caller asked for no bound.
struct TailBound {
    enum class Kind { finite, unbounded, none };
    Kind kind = Kind::none;
    double value = 0.0;

    static TailBound finite(double v) { return {Kind::finite, v}; }
    static TailBound unbounded() { return {Kind::unbounded, 0.0}; }
    static TailBound none() { return {Kind::none, 0.0}; }

    bool is_finite() const { return kind == Kind::finite; }
};

struct EvalResult {
    Scalar value;
    TailBound tail;
    std::uint64_t terms_summed = 0;
    // Sum of absolute values of all summed terms (double approximation);
    // the natural scale for forward rounding-error budgets in float mode.
    double abs_majorant = 0.0;
};

namespace detail {

inline std::uint64_t chain_count(long K, int m) {
    if (K < m) return 0;
    // C(K, m), saturating at uint64 max.
    constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t r = 1;
    for (int i = 1; i <= m; ++i) {
        std::uint64_t num = static_cast<std::uint64_t>(K - m + i);
        if (r > cap / num) return cap;
        r = r * num / static_cast<std::uint64_t>(i);
    }
    return r;
}

// Truncated nested sum over chains 0 < k_1 < ... < k_m <= K with
// per-slot weights w_j(k) supplied by a callback. Runs the same
// recurrence over doubles of |w_j(k)| to report the term-magnitude sum.
//
// The recurrence is P_j(t) = P_j(t-1) + w_j(t) * P_{j-1}(t-1); updating
// j in descending order keeps everything in one array.
template <class C, class WeightFn>
C chain_sum(int m, long K, long prec, WeightFn&& weight, double* abs_majorant) {
    std::vector<C> P;
    P.reserve(static_cast<size_t>(m) + 1);
    P.push_back(cx_traits<C>::one(prec));
    for (int j = 0; j < m; ++j) P.push_back(cx_traits<C>::zero(prec));

    std::vector<double> Pd(static_cast<size_t>(m) + 1, 0.0);
    Pd[0] = 1.0;

    for (long t = 1; t <= K; ++t) {
        for (int j = m; j >= 1; --j) {
            C w = weight(j - 1, t);
            double wd = abs_approx(w);
            P[static_cast<size_t>(j)] += w * P[static_cast<size_t>(j) - 1];
            Pd[static_cast<size_t>(j)] += wd * Pd[static_cast<size_t>(j) - 1];
        }
    }
    if (abs_majorant) *abs_majorant = Pd[static_cast<size_t>(m)];
    return P[static_cast<size_t>(m)];
}

// One nested-sum evaluation of the q-deformed series with exponents n
// (entries >= 0 here; the public wrapper insists on >= 1).
template <class C>
C qmpl_kernel(const std::vector<int>& n, const std::vector<C>& z, const C& q,
              long K, long prec, double* abs_majorant) {
    int m = static_cast<int>(n.size());
    C one = cx_traits<C>::one(prec);

    std::vector<C> zpow(z.size(), one);
    C qpow = one;
    long cur_t = 0;

    auto weight = [&](int j, long t) -> C {
        if (t != cur_t) {
            // New lattice index: advance all running powers once.
            qpow *= q;
            for (size_t i = 0; i < z.size(); ++i) zpow[i] *= z[i];
            cur_t = t;
        }
        C denom = one - qpow;
        require(!denom.is_zero(), errc::invalid_parameter,
                "1 - q^k vanished at k = " + std::to_string(t) +
                    " (root of unity, or precision too low)");
        return zpow[static_cast<size_t>(j)] / cx_pow_int(denom, n[static_cast<size_t>(j)]);
    };
    // Weights are requested for j = m-1 first at each t, so the power
    // update above runs exactly once per lattice index.
    return chain_sum<C>(m, K, prec, weight, abs_majorant);
}

template <class C>
C classical_kernel(const std::vector<int>& n, const std::vector<C>& z, long K,
                   long prec, double* abs_majorant) {
    int m = static_cast<int>(n.size());
    C one = cx_traits<C>::one(prec);

    std::vector<C> zpow(z.size(), one);
    long cur_t = 0;

    auto weight = [&](int j, long t) -> C {
        if (t != cur_t) {
            for (size_t i = 0; i < z.size(); ++i) zpow[i] *= z[i];
            cur_t = t;
        }
        C kpow = cx_pow_int(cx_traits<C>::from_long(t, prec), n[static_cast<size_t>(j)]);
        return zpow[static_cast<size_t>(j)] / kpow;
    };
    return chain_sum<C>(m, K, prec, weight, abs_majorant);
}

// Suffix products |z_j ... z_m|^2 as exact-compare-friendly scalars.
inline std::vector<Scalar> suffix_norm_sq(const std::vector<Scalar>& z) {
    std::vector<Scalar> out(z.size());
    Scalar acc;
    for (size_t i = z.size(); i-- > 0;) {
        acc = (i + 1 == z.size()) ? z[i] : acc * z[i];
        out[i] = norm_sq(acc);
    }
    return out;
}

inline bool scalar_le_one(const Scalar& s, bool strict) {
    if (s.mode() == ScalarMode::exact) {
        const Rational& v = s.as_exact().re;
        return strict ? v < 1 : v <= 1;
    }
    BigFloat one = BigFloat::from_long(1, BigFloat::min_precision);
    const BigFloat& v = s.as_float().re;
    return strict ? v < one : v <= one;
}

// Argument domain for the q-deformed series: every suffix product of the
// arguments must sit inside the closed (outside regime) or open (inside
// regime) unit polydisc.
inline bool qmpl_domain_ok(const std::vector<Scalar>& z, Regime regime) {
    for (const Scalar& s : suffix_norm_sq(z))
        if (!scalar_le_one(s, regime == Regime::inside)) return false;
    return true;
}

// Classical series: suffix products strictly inside, or on the boundary
// when the outermost exponent is at least 2.
inline bool classical_domain_ok(const std::vector<int>& n, const std::vector<Scalar>& z) {
    bool all_strict = true, all_weak = true;
    for (const Scalar& s : suffix_norm_sq(z)) {
        if (!scalar_le_one(s, true)) all_strict = false;
        if (!scalar_le_one(s, false)) all_weak = false;
    }
    if (all_strict) return true;
    return all_weak && n.back() >= 2;
}

// Geometric tail of the chain sum via a dominating product: with suffix
// radii u_i < 1 and any theta in (max u, 1),
//   sum over chains with k_m > K of prod u_i^{d_i}
//     <= theta^(K+1) * prod_i u_i / (theta - u_i).
inline double theta_tail(const std::vector<double>& u, long K) {
    double umax = 0.0;
    for (double v : u) umax = std::max(umax, v);
    double theta = (1.0 + umax) / 2.0;
    double prod = 1.0;
    for (double v : u) prod *= v / (theta - v);
    return std::pow(theta, static_cast<double>(K + 1)) * prod;
}

inline std::vector<double> suffix_products(const std::vector<double>& r) {
    std::vector<double> u(r.size());
    double acc = 1.0;
    for (size_t i = r.size(); i-- > 0;) {
        acc *= r[i];
        u[i] = acc;
    }
    return u;
}

inline TailBound qmpl_tail(const std::vector<int>& n, const std::vector<double>& radii,
                           double abs_q, Regime regime, long K) {
    for (double r : radii)
        if (r == 0.0) return TailBound::finite(0.0);

    // Denominator floor: |1 - q^k| >= c inside, >= |q|^k * c outside.
    // Outside, the |q|^(k n_j) growth is folded into effective radii.
    double c;
    std::vector<double> eff = radii;
    if (regime == Regime::inside) {
        c = 1.0 - abs_q;
    } else {
        c = 1.0 - 1.0 / abs_q;
        for (size_t j = 0; j < eff.size(); ++j)
            eff[j] *= std::pow(abs_q, -static_cast<double>(n[j]));
    }
    if (c <= 0.0) return TailBound::unbounded();

    std::vector<double> u = suffix_products(eff);
    for (double v : u)
        if (v >= 1.0) return TailBound::unbounded();

    int w = 0;
    for (int k : n) w += k;
    return TailBound::finite(theta_tail(u, K) / std::pow(c, w));
}

// Integral comparison for sum_{k > K} (1 + ln k)^p / k^s, s >= 2:
// explicit terms until the summand is decreasing at k0, then
//   f(k0) + int_{k0}^inf (1+ln t)^p t^-s dt,
//   int = k0^(1-s) * sum_i C(p,i) (1+ln k0)^(p-i) i! / (s-1)^(i+1).
// The f(k0) term keeps this a genuine upper bound: the integral alone
// undercuts the sum it is compared against.
inline double log_power_tail(int p, int s, long K) {
    auto f = [&](double t) { return std::pow(1.0 + std::log(t), p) / std::pow(t, s); };
    long k0 = K + 1;
    long decreasing_from =
        static_cast<long>(std::ceil(std::exp(std::max(0.0, double(p) / s - 1.0)))) + 1;
    double head = 0.0;
    while (k0 < decreasing_from) {
        head += f(static_cast<double>(k0));
        ++k0;
    }
    double L = 1.0 + std::log(static_cast<double>(k0));
    double binom = 1.0, factorial = 1.0, integral = 0.0;
    for (int i = 0; i <= p; ++i) {
        integral += binom * std::pow(L, p - i) * factorial / std::pow(s - 1.0, i + 1);
        binom = binom * (p - i) / (i + 1.0);
        factorial *= (i + 1.0);
    }
    integral *= std::pow(static_cast<double>(k0), 1.0 - s);
    return head + f(static_cast<double>(k0)) + integral;
}

inline TailBound classical_tail(const std::vector<int>& n, const std::vector<double>& radii,
                                long K) {
    for (double r : radii)
        if (r == 0.0) return TailBound::finite(0.0);

    std::vector<double> u = suffix_products(radii);
    double umax = 0.0;
    for (double v : u) umax = std::max(umax, v);

    if (umax < 1.0) return TailBound::finite(theta_tail(u, K));
    if (umax > 1.0 || n.back() < 2) return TailBound::unbounded();

    // Boundary case: bound each inner sum by a harmonic or zeta factor,
    // leaving a single outer sum with logarithmic corrections.
    int m = static_cast<int>(n.size());
    int p = 0;
    double zeta_prod = 1.0;
    for (int j = 0; j + 1 < m; ++j) {
        if (n[static_cast<size_t>(j)] == 1)
            ++p;
        else
            zeta_prod *= 1.0 + 1.0 / (n[static_cast<size_t>(j)] - 1.0);
    }
    return TailBound::finite(zeta_prod * log_power_tail(p, n.back(), K));
}

inline long working_precision(const std::vector<Scalar>& z, const Scalar& q) {
    long prec = std::max(q.precision_bits(), BigFloat::min_precision);
    for (const Scalar& s : z) prec = std::max(prec, s.precision_bits());
    return prec;
}

inline void check_same_mode(const std::vector<Scalar>& z, const Scalar& q) {
    for (const Scalar& s : z)
        require(s.mode() == q.mode(), errc::mode_mismatch,
                "arguments and q must share one mode");
}

inline std::vector<ExactComplex> unpack_exact(const std::vector<Scalar>& z) {
    std::vector<ExactComplex> out;
    out.reserve(z.size());
    for (const Scalar& s : z) out.push_back(s.as_exact());
    return out;
}

inline std::vector<FloatComplex> unpack_float(const std::vector<Scalar>& z) {
    std::vector<FloatComplex> out;
    out.reserve(z.size());
    for (const Scalar& s : z) out.push_back(s.as_float());
    return out;
}

inline std::vector<double> radii_of(const std::vector<Scalar>& z) {
    std::vector<double> r;
    r.reserve(z.size());
    for (const Scalar& s : z) r.push_back(abs_approx(s));
    return r;
}

// Shared driver for the q-deformed series; exponents may include zeros
// here (needed by the index-lowering identities).
inline EvalResult eval_qmpl_raw(const std::vector<int>& n, const std::vector<Scalar>& z,
                                const QParam& q, const TruncationSpec& trunc) {
    require(n.size() == z.size(), errc::invalid_parameter,
            "argument count does not match composition depth");
    require(trunc.K >= 0, errc::invalid_parameter, "negative truncation bound");
    for (int k : n) require(k >= 0, errc::invalid_parameter, "negative exponent");
    detail::check_same_mode(z, q.q());

    EvalResult res;
    res.terms_summed = chain_count(trunc.K, static_cast<int>(n.size()));
    if (q.mode() == ScalarMode::exact) {
        res.value = Scalar(qmpl_kernel<ExactComplex>(n, unpack_exact(z), q.q().as_exact(),
                                                     trunc.K, 0, &res.abs_majorant));
    } else {
        long prec = working_precision(z, q.q());
        res.value = Scalar(qmpl_kernel<FloatComplex>(n, unpack_float(z), q.q().as_float(),
                                                     trunc.K, prec, &res.abs_majorant));
    }

    if (!qmpl_domain_ok(z, q.regime()))
        res.tail = TailBound::unbounded();
    else if (trunc.tail_method == TailMethod::none)
        res.tail = TailBound::none();
    else
        res.tail = qmpl_tail(n, radii_of(z), q.abs_q(), q.regime(), trunc.K);
    return res;
}

} // namespace detail

// Truncated q-deformed multiple polylogarithm: the nested series over
// chains 0 < k_1 < ... < k_m <= K with terms
//   prod_j z_j^{k_j} / (1 - q^{k_j})^{n_j}.
inline EvalResult eval_qmpl(const Composition& n, const std::vector<Scalar>& z,
                            const QParam& q, const TruncationSpec& trunc) {
    return detail::eval_qmpl_raw(n.indices(), z, q, trunc);
}

// Truncated classical multiple polylogarithm (terms z_j^{k_j} / k_j^{n_j}).
inline EvalResult eval_classical_mpl(const Composition& n, const std::vector<Scalar>& z,
                                     const TruncationSpec& trunc) {
    require(n.depth() == static_cast<int>(z.size()), errc::invalid_parameter,
            "argument count does not match composition depth");
    require(trunc.K >= 0, errc::invalid_parameter, "negative truncation bound");
    ScalarMode mode = z.empty() ? ScalarMode::exact : z.front().mode();
    for (const Scalar& s : z)
        require(s.mode() == mode, errc::mode_mismatch, "arguments must share one mode");

    EvalResult res;
    res.terms_summed = detail::chain_count(trunc.K, n.depth());
    if (mode == ScalarMode::exact) {
        res.value = Scalar(detail::classical_kernel<ExactComplex>(
            n.indices(), detail::unpack_exact(z), trunc.K, 0, &res.abs_majorant));
    } else {
        long prec = BigFloat::min_precision;
        for (const Scalar& s : z) prec = std::max(prec, s.precision_bits());
        res.value = Scalar(detail::classical_kernel<FloatComplex>(
            n.indices(), detail::unpack_float(z), trunc.K, prec, &res.abs_majorant));
    }

    if (!detail::classical_domain_ok(n.indices(), z))
        res.tail = TailBound::unbounded();
    else if (trunc.tail_method == TailMethod::none)
        res.tail = TailBound::none();
    else
        res.tail = detail::classical_tail(n.indices(), detail::radii_of(z), trunc.K);
    return res;
}

// Truncated q-zeta value: all arguments set to 1. Only the outside regime
// gives a convergent series, so the inside regime is rejected rather than
// silently summed.
inline EvalResult eval_qmzv(const Composition& n, const QParam& q,
                            const TruncationSpec& trunc) {
    require(q.regime() == Regime::outside, errc::divergent_series,
            "q-zeta series diverges for |q| < 1");
    long prec = std::max(q.q().precision_bits(), BigFloat::min_precision);
    std::vector<Scalar> ones(static_cast<size_t>(n.depth()),
                             Scalar::exact_long(1).to_mode(q.mode(), prec));
    return eval_qmpl(n, ones, q, trunc);
}

} // namespace qmpl
