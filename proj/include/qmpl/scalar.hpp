#pragma once

#include <string>
#include <variant>

#include "qmpl/complex.hpp"
#include "qmpl/errors.hpp"

namespace qmpl {

enum class ScalarMode { exact, floating };

inline const char* mode_name(ScalarMode m) {
    return m == ScalarMode::exact ? "exact" : "float";
}

// A runtime-tagged number: exact rational-complex, or big-float complex.
// Arithmetic never mixes modes; a mismatch is a caller error and throws,
// so a pipeline stays exact end to end unless it opts into floats.
class Scalar {
  public:
    Scalar() : v_(ExactComplex{Rational(0), Rational(0)}) {}
    explicit Scalar(ExactComplex v) : v_(std::move(v)) {}
    explicit Scalar(FloatComplex v) : v_(std::move(v)) {}

    static Scalar exact(Rational re, Rational im = Rational(0)) {
        return Scalar(ExactComplex{std::move(re), std::move(im)});
    }

    static Scalar exact_long(long n) { return exact(Rational(n)); }

    static Scalar floating(BigFloat re, BigFloat im) {
        return Scalar(FloatComplex{std::move(re), std::move(im)});
    }

    static Scalar floating_real(BigFloat re) {
        long prec = re.precision();
        return Scalar(FloatComplex{std::move(re), BigFloat(prec)});
    }

    ScalarMode mode() const {
        return std::holds_alternative<ExactComplex>(v_) ? ScalarMode::exact
                                                        : ScalarMode::floating;
    }

    long precision_bits() const {
        if (mode() == ScalarMode::exact) return 0;
        return cx_traits<FloatComplex>::precision(std::get<FloatComplex>(v_));
    }

    const ExactComplex& as_exact() const {
        require(mode() == ScalarMode::exact, errc::mode_mismatch,
                "expected an exact scalar");
        return std::get<ExactComplex>(v_);
    }

    const FloatComplex& as_float() const {
        require(mode() == ScalarMode::floating, errc::mode_mismatch,
                "expected a big-float scalar");
        return std::get<FloatComplex>(v_);
    }

    bool is_zero() const {
        return mode() == ScalarMode::exact ? std::get<ExactComplex>(v_).is_zero()
                                           : std::get<FloatComplex>(v_).is_zero();
    }

    bool is_real() const {
        return mode() == ScalarMode::exact ? std::get<ExactComplex>(v_).is_real()
                                           : std::get<FloatComplex>(v_).is_real();
    }

    // Exact scalars widen to floats; the reverse direction is refused.
    Scalar to_mode(ScalarMode m, long prec) const {
        if (m == mode()) return *this;
        require(m == ScalarMode::floating, errc::mode_mismatch,
                "cannot convert a big-float scalar back to exact");
        const auto& e = std::get<ExactComplex>(v_);
        return floating(BigFloat::from_rational(e.re, prec),
                        BigFloat::from_rational(e.im, prec));
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        return apply(a, b, [](const auto& x, const auto& y) { return x + y; });
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        return apply(a, b, [](const auto& x, const auto& y) { return x - y; });
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        return apply(a, b, [](const auto& x, const auto& y) { return x * y; });
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        return apply(a, b, [](const auto& x, const auto& y) { return x / y; });
    }

    Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
    Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
    Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
    Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

    Scalar operator-() const {
        if (mode() == ScalarMode::exact) return Scalar(-std::get<ExactComplex>(v_));
        return Scalar(-std::get<FloatComplex>(v_));
    }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.mode() != b.mode()) return false;
        if (a.mode() == ScalarMode::exact)
            return std::get<ExactComplex>(a.v_) == std::get<ExactComplex>(b.v_);
        return std::get<FloatComplex>(a.v_) == std::get<FloatComplex>(b.v_);
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    std::string to_string() const;

  private:
    template <class F>
    static Scalar apply(const Scalar& a, const Scalar& b, F op) {
        require(a.mode() == b.mode(), errc::mode_mismatch,
                "mixed exact/float arithmetic");
        if (a.mode() == ScalarMode::exact)
            return Scalar(op(std::get<ExactComplex>(a.v_), std::get<ExactComplex>(b.v_)));
        return Scalar(op(std::get<FloatComplex>(a.v_), std::get<FloatComplex>(b.v_)));
    }

    std::variant<ExactComplex, FloatComplex> v_;
};

inline Scalar norm_sq(const Scalar& z) {
    if (z.mode() == ScalarMode::exact) {
        return Scalar::exact(norm_sq(z.as_exact()));
    }
    long prec = z.precision_bits();
    return Scalar::floating(norm_sq(z.as_float()), BigFloat(prec));
}

inline double abs_approx(const Scalar& z) {
    return z.mode() == ScalarMode::exact ? abs_approx(z.as_exact())
                                         : abs_approx(z.as_float());
}

inline Scalar pow_int(const Scalar& base, long e) {
    if (base.mode() == ScalarMode::exact) return Scalar(cx_pow_int(base.as_exact(), e));
    return Scalar(cx_pow_int(base.as_float(), e));
}

// Strict weak order used for canonical container keys: mode first, then
// real part, then imaginary part. Value-equal floats of different
// precision compare equal on purpose.
inline bool scalar_less(const Scalar& a, const Scalar& b) {
    if (a.mode() != b.mode()) return a.mode() == ScalarMode::exact;
    if (a.mode() == ScalarMode::exact) {
        const auto& x = a.as_exact();
        const auto& y = b.as_exact();
        if (x.re != y.re) return x.re < y.re;
        return x.im < y.im;
    }
    const auto& x = a.as_float();
    const auto& y = b.as_float();
    if (x.re != y.re) return x.re < y.re;
    return x.im < y.im;
}

struct ScalarLess {
    bool operator()(const Scalar& a, const Scalar& b) const { return scalar_less(a, b); }
};

inline std::string Scalar::to_string() const {
    if (mode() == ScalarMode::exact) {
        const auto& e = std::get<ExactComplex>(v_);
        if (e.is_real()) return qmpl::to_string(e.re);
        return "(" + qmpl::to_string(e.re) + ", " + qmpl::to_string(e.im) + ")";
    }
    const auto& f = std::get<FloatComplex>(v_);
    if (f.is_real()) return f.re.to_decimal();
    return "(" + f.re.to_decimal() + ", " + f.im.to_decimal() + ")";
}

} // namespace qmpl
