#pragma once

#include <optional>
#include <string>

#include <boost/multiprecision/gmp.hpp>

#include "qmpl/errors.hpp"

namespace qmpl {

// Exact arithmetic lives on GMP. Expression templates are switched off so
// Rational behaves like a plain value type in generic code.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

inline Rational make_rational(const Integer& num, const Integer& den) {
    require(den != 0, errc::division_by_zero, "rational with zero denominator");
    return Rational(num) / Rational(den);
}

inline Rational make_rational(long num, long den = 1) {
    return make_rational(Integer(num), Integer(den));
}

// Accepts "p" or "p/q" with optional sign on either part.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) fail(errc::parse_error, "empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Integer(s));
        Integer num(s.substr(0, slash));
        Integer den(s.substr(slash + 1));
        return make_rational(num, den);
    } catch (const std::runtime_error& e) {
        fail(errc::parse_error, "bad rational literal '" + s + "'");
    }
}

inline std::string to_string(const Rational& r) {
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline Rational pow_int(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (e < 0) {
        require(base != 0, errc::division_by_zero, "0 raised to a negative power");
        return Rational(1) / pow_int(base, -e);
    }
    Rational acc(1);
    Rational b = base;
    unsigned long n = static_cast<unsigned long>(e);
    while (n) {
        if (n & 1) acc *= b;
        b *= b;
        n >>= 1;
    }
    return acc;
}

inline std::optional<Integer> exact_isqrt(const Integer& n) {
    if (n < 0) return std::nullopt;
    Integer r = boost::multiprecision::sqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

// Square root of a nonnegative rational, when it is again rational.
inline std::optional<Rational> exact_sqrt(const Rational& x) {
    if (x < 0) return std::nullopt;
    auto rn = exact_isqrt(boost::multiprecision::numerator(x));
    if (!rn) return std::nullopt;
    auto rd = exact_isqrt(boost::multiprecision::denominator(x));
    if (!rd) return std::nullopt;
    return make_rational(*rn, *rd);
}

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

} // namespace qmpl
