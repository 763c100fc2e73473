#pragma once

#include <cctype>
#include <string>

#include "qmpl/scalar.hpp"

namespace qmpl {

// "1.25e-3" and friends, converted without rounding. Plain "p/q" passes
// through parse_rational.
inline Rational parse_decimal_rational(const std::string& s) {
    if (s.find('/') != std::string::npos) return parse_rational(s);
    if (s.empty()) fail(errc::parse_error, "empty numeric literal");

    size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
        neg = (s[i] == '-');
        ++i;
    }
    Integer mantissa(0);
    long frac_digits = 0;
    bool any = false, in_frac = false;
    for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
        if (s[i] == '.') {
            if (in_frac) fail(errc::parse_error, "bad numeric literal '" + s + "'");
            in_frac = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            fail(errc::parse_error, "bad numeric literal '" + s + "'");
        mantissa = mantissa * 10 + (s[i] - '0');
        if (in_frac) ++frac_digits;
        any = true;
    }
    if (!any) fail(errc::parse_error, "bad numeric literal '" + s + "'");
    long exp10 = -frac_digits;
    if (i < s.size()) {
        try {
            exp10 += std::stol(s.substr(i + 1));
        } catch (const std::exception&) {
            fail(errc::parse_error, "bad exponent in '" + s + "'");
        }
    }
    Rational r(mantissa);
    if (neg) r = -r;
    return r * pow_int(Rational(10), exp10);
}

// One real component, honoring the requested mode. Exact mode converts
// decimal literals exactly; float mode parses at the configured precision.
inline Scalar parse_real_scalar(const std::string& tok, ScalarMode mode, long prec) {
    if (mode == ScalarMode::exact) return Scalar::exact(parse_decimal_rational(tok));
    if (tok.find('/') != std::string::npos)
        return Scalar::floating_real(BigFloat::from_rational(parse_rational(tok), prec));
    return Scalar::floating_real(BigFloat::from_string(tok, prec));
}

// "re" or "re,im", parens optional: "(1/3,-1/5)".
inline Scalar parse_scalar(std::string tok, ScalarMode mode, long prec) {
    auto strip = [](std::string& t) {
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
        while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    };
    strip(tok);
    if (!tok.empty() && tok.front() == '(' && tok.back() == ')')
        tok = tok.substr(1, tok.size() - 2);
    auto comma = tok.find(',');
    if (comma == std::string::npos) return parse_real_scalar(tok, mode, prec);
    std::string re = tok.substr(0, comma);
    std::string im = tok.substr(comma + 1);
    strip(re);
    strip(im);
    Scalar sre = parse_real_scalar(re, mode, prec);
    Scalar sim = parse_real_scalar(im, mode, prec);
    if (mode == ScalarMode::exact)
        return Scalar::exact(sre.as_exact().re, sim.as_exact().re);
    return Scalar::floating(sre.as_float().re, sim.as_float().re);
}

} // namespace qmpl
