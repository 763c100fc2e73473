#pragma once

#include <cmath>

#include "qmpl/bigfloat.hpp"
#include "qmpl/errors.hpp"
#include "qmpl/rational.hpp"

namespace qmpl {

inline bool nt_is_zero(const Rational& x) { return x == 0; }
inline bool nt_is_zero(const BigFloat& x) { return x.is_zero(); }

// Complex numbers over an exact or big-float real type. std::complex is
// specified only for built-in floating types, so we keep our own pair.
template <class R>
struct Cx {
    R re{};
    R im{};

    bool is_zero() const { return nt_is_zero(re) && nt_is_zero(im); }
    bool is_real() const { return nt_is_zero(im); }

    friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator-(const Cx& a) { return {-a.re, -a.im}; }

    friend Cx operator*(const Cx& a, const Cx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }

    friend Cx operator/(const Cx& a, const Cx& b) {
        R n = b.re * b.re + b.im * b.im;
        require(!nt_is_zero(n), errc::division_by_zero, "complex division by zero");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }

    Cx& operator+=(const Cx& b) { return *this = *this + b; }
    Cx& operator-=(const Cx& b) { return *this = *this - b; }
    Cx& operator*=(const Cx& b) { return *this = *this * b; }
    Cx& operator/=(const Cx& b) { return *this = *this / b; }

    friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Cx& a, const Cx& b) { return !(a == b); }
};

using ExactComplex = Cx<Rational>;
using FloatComplex = Cx<BigFloat>;

// |z|^2, exact in both modes.
template <class R>
R norm_sq(const Cx<R>& z) {
    return z.re * z.re + z.im * z.im;
}

inline double abs_approx(const ExactComplex& z) {
    return std::sqrt(to_double(norm_sq(z)));
}

inline double abs_approx(const FloatComplex& z) {
    return std::sqrt(norm_sq(z).to_double());
}

// The evaluation kernels are written against this small trait set so the
// same code runs over exact rationals and big floats.
template <class C>
struct cx_traits;

template <>
struct cx_traits<ExactComplex> {
    static constexpr bool exact = true;
    static ExactComplex zero(long) { return {Rational(0), Rational(0)}; }
    static ExactComplex one(long) { return {Rational(1), Rational(0)}; }
    static ExactComplex from_long(long x, long) { return {Rational(x), Rational(0)}; }
    static long precision(const ExactComplex&) { return 0; }
};

template <>
struct cx_traits<FloatComplex> {
    static constexpr bool exact = false;
    static FloatComplex zero(long prec) { return {BigFloat(prec), BigFloat(prec)}; }
    static FloatComplex one(long prec) {
        return {BigFloat::from_long(1, prec), BigFloat(prec)};
    }
    static FloatComplex from_long(long x, long prec) {
        return {BigFloat::from_long(x, prec), BigFloat(prec)};
    }
    static long precision(const FloatComplex& z) {
        return std::max(z.re.precision(), z.im.precision());
    }
};

template <class C>
C cx_pow_int(const C& base, long e) {
    long prec = cx_traits<C>::precision(base);
    if (e == 0) return cx_traits<C>::one(std::max(prec, BigFloat::min_precision));
    if (e < 0) {
        require(!base.is_zero(), errc::division_by_zero, "0 raised to a negative power");
        return cx_traits<C>::one(std::max(prec, BigFloat::min_precision)) / cx_pow_int(base, -e);
    }
    C acc = cx_traits<C>::one(std::max(prec, BigFloat::min_precision));
    C b = base;
    unsigned long n = static_cast<unsigned long>(e);
    while (n) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

} // namespace qmpl
