#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qmpl/eval.hpp"
#include "qmpl/qparam.hpp"
#include "qmpl/scalar.hpp"

namespace qmpl {

// [k]_q = (1 - q^k) / (1 - q). QParam already rules out q = 1.
inline Scalar q_bracket(long k, const QParam& q) {
    require(k >= 1, errc::invalid_parameter, "bracket index must be >= 1");
    long prec = std::max(q.q().precision_bits(), BigFloat::min_precision);
    Scalar one = Scalar::exact_long(1).to_mode(q.mode(), prec);
    return (one - pow_int(q.q(), k)) / (one - q.q());
}

// D_q f at z0: (f(q z0) - f(z0)) / ((q - 1) z0).
inline Scalar q_derivative(const std::function<Scalar(const Scalar&)>& f,
                           const Scalar& z0, const QParam& q) {
    require(!z0.is_zero(), errc::singular_point,
            "q-derivative is singular at z = 0");
    require(z0.mode() == q.mode(), errc::mode_mismatch,
            "z and q must share one mode");
    long prec = std::max({z0.precision_bits(), q.q().precision_bits(),
                          BigFloat::min_precision});
    Scalar one = Scalar::exact_long(1).to_mode(q.mode(), prec);
    return (f(q.q() * z0) - f(z0)) / ((q.q() - one) * z0);
}

// The two letters of the iterated-integral alphabet: dt/t and dt/(1-t).
enum class Letter { omega0, omega1 };

// Letters are listed innermost integration first: letters[0] is applied
// deepest, letters.back() is the outermost integral over [0, 1].
struct IntegrationWord {
    std::vector<Letter> letters;

    int length() const { return static_cast<int>(letters.size()); }

    std::string to_string() const {
        std::string s;
        for (Letter l : letters) s += (l == Letter::omega0 ? '0' : '1');
        return s;
    }
};

enum class SingularPolicy { error, drop };

struct QuadratureResult {
    Scalar value;
    TailBound tail;
    std::uint64_t points_evaluated = 0;
    std::uint64_t points_dropped = 0;
    // False when the outer lattice terms show no geometric decay within
    // the cap, i.e. the Jackson sum has not settled.
    bool converged = true;
};

namespace detail {

// Blockwise decay monitor for a truncated lattice sum: compares the
// term-magnitude mass of the last quarter of indices against the
// previous quarter and extrapolates geometrically (in blocks).
inline void monitor_lattice_tail(const std::vector<double>& term_abs,
                                 QuadratureResult& out) {
    size_t n = term_abs.size();
    if (n < 8) {
        out.tail = TailBound::none();
        return;
    }
    double t1 = 0.0, t2 = 0.0;
    for (size_t i = n / 2; i < n - n / 4; ++i) t1 += term_abs[i];
    for (size_t i = n - n / 4; i < n; ++i) t2 += term_abs[i];
    if (t2 == 0.0) {
        out.tail = TailBound::finite(0.0);
        return;
    }
    if (t2 >= t1) {
        out.tail = TailBound::unbounded();
        out.converged = false;
        return;
    }
    double rho = t2 / t1;
    out.tail = TailBound::finite(t2 * rho / (1.0 - rho));
}

inline Scalar letter_integrand(Letter l, const Scalar& t, const Scalar& one) {
    if (l == Letter::omega0) {
        require(!t.is_zero(), errc::singular_point, "dt/t at t = 0");
        return one / t;
    }
    Scalar d = one - t;
    require(!d.is_zero(), errc::singular_point, "dt/(1-t) at t = 1");
    return one / d;
}

inline bool is_singular_error(const error& e) {
    return e.code() == errc::singular_point || e.code() == errc::division_by_zero;
}

} // namespace detail

// Jackson integral of f over [0, a]:
//   (1 - q) a * sum_{i >= 0} q^i f(a q^i),
// truncated at lattice_cap points. Inside regime only; a must be real
// with 0 < a <= 1.
inline QuadratureResult jackson_integral(const std::function<Scalar(const Scalar&)>& f,
                                         const Scalar& a, const QParam& q,
                                         long lattice_cap,
                                         SingularPolicy policy = SingularPolicy::error) {
    require(q.regime() == Regime::inside, errc::unsupported,
            "Jackson integral needs |q| < 1");
    require(a.mode() == q.mode(), errc::mode_mismatch, "a and q must share one mode");
    require(a.is_real(), errc::invalid_parameter, "upper limit must be real");
    require(lattice_cap >= 1, errc::invalid_parameter, "lattice cap must be >= 1");

    long prec = std::max({a.precision_bits(), q.q().precision_bits(),
                          BigFloat::min_precision});
    Scalar one = Scalar::exact_long(1).to_mode(q.mode(), prec);
    bool positive = a.mode() == ScalarMode::exact
                        ? a.as_exact().re > 0
                        : a.as_float().re > BigFloat::from_long(0, a.precision_bits());
    require(positive && detail::scalar_le_one(norm_sq(a), false),
            errc::invalid_parameter, "upper limit must lie in (0, 1]");

    QuadratureResult out;
    Scalar sum = Scalar::exact_long(0).to_mode(q.mode(), prec);
    Scalar qpow = one;
    std::vector<double> term_abs;
    term_abs.reserve(static_cast<size_t>(lattice_cap));

    for (long i = 0; i < lattice_cap; ++i) {
        Scalar t = a * qpow;
        try {
            Scalar term = qpow * f(t);
            sum += term;
            term_abs.push_back(abs_approx(term));
        } catch (const error& e) {
            if (policy == SingularPolicy::drop && detail::is_singular_error(e)) {
                ++out.points_dropped;
                term_abs.push_back(0.0);
            } else {
                throw;
            }
        }
        ++out.points_evaluated;
        qpow *= q.q();
    }

    Scalar scale = (one - q.q()) * a;
    out.value = scale * sum;
    detail::monitor_lattice_tail(term_abs, out);
    if (out.tail.is_finite())
        out.tail = TailBound::finite(out.tail.value * abs_approx(scale));
    return out;
}

// Iterated Jackson integral of a letter word over [0, 1], innermost
// letter last:
//   I_0 = 1;  I_l(x) = integral_0^x g_l(t) I_{l-1}(t) d_q t,
// reported at x = 1 and scaled by nothing further (each level carries
// its own (1 - q) factor). All levels share one lattice q^s, s < cap,
// evaluated by suffix accumulation from the deepest letter outward.
inline QuadratureResult jackson_iterated(const IntegrationWord& word, const QParam& q,
                                         long lattice_cap,
                                         SingularPolicy policy = SingularPolicy::error) {
    require(word.length() >= 1, errc::invalid_parameter, "empty integration word");
    require(q.regime() == Regime::inside, errc::unsupported,
            "Jackson integral needs |q| < 1");
    require(lattice_cap >= 1, errc::invalid_parameter, "lattice cap must be >= 1");

    long prec = std::max(q.q().precision_bits(), BigFloat::min_precision);
    Scalar one = Scalar::exact_long(1).to_mode(q.mode(), prec);
    Scalar zero = Scalar::exact_long(0).to_mode(q.mode(), prec);
    Scalar scale = one - q.q();

    size_t cap = static_cast<size_t>(lattice_cap);
    std::vector<Scalar> tpow(cap);
    Scalar qpow = one;
    for (size_t s = 0; s < cap; ++s) {
        tpow[s] = qpow;
        qpow *= q.q();
    }

    QuadratureResult out;
    // inner[s] = I_{l-1}(q^s); outer letters integrate against it.
    std::vector<Scalar> inner(cap, one);
    std::vector<double> term_abs(cap, 0.0);
    int w = word.length();

    for (int l = 1; l <= w; ++l) {
        Letter letter = word.letters[static_cast<size_t>(l - 1)];
        std::vector<Scalar> next(cap, zero);
        Scalar acc = zero;
        for (size_t s = cap; s-- > 0;) {
            Scalar term = zero;
            try {
                term = tpow[s] * detail::letter_integrand(letter, tpow[s], one) * inner[s];
            } catch (const error& e) {
                if (policy == SingularPolicy::drop && detail::is_singular_error(e)) {
                    ++out.points_dropped;
                } else {
                    throw;
                }
            }
            acc += term;
            next[s] = scale * acc;
            if (l == w) term_abs[s] = abs_approx(scale * term);
        }
        out.points_evaluated += cap;
        inner = std::move(next);
    }

    out.value = inner[0];
    detail::monitor_lattice_tail(term_abs, out);
    return out;
}

} // namespace qmpl
