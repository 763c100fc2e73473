#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <mpfr.h>

#include "qmpl/errors.hpp"
#include "qmpl/rational.hpp"

namespace qmpl {

// Arbitrary-precision binary float, a thin RAII layer over mpfr_t.
//
// Every value carries its own precision. Binary operations round to the
// larger of the two operand precisions (MPFR_RNDN throughout), so mixing
// precisions never silently narrows a result.
class BigFloat {
  public:
    static constexpr long min_precision = 53;

    BigFloat() { mpfr_init2(v_, min_precision); mpfr_set_zero(v_, 1); }

    explicit BigFloat(long prec) {
        check_precision(prec);
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }

    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, min_precision);
        mpfr_swap(v_, o.v_);
    }

    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }

    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat from_long(long x, long prec) {
        BigFloat r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }

    static BigFloat from_double(double x, long prec) {
        BigFloat r(prec);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }

    static BigFloat from_rational(const Rational& x, long prec) {
        BigFloat r(prec);
        mpfr_set_q(r.v_, x.backend().data(), MPFR_RNDN);
        return r;
    }

    static BigFloat from_string(const std::string& s, long prec) {
        BigFloat r(prec);
        if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
            fail(errc::parse_error, "bad float literal '" + s + "'");
        return r;
    }

    long precision() const { return mpfr_get_prec(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // Enough decimal digits that parsing the string back at the same
    // precision recovers the value exactly.
    std::string to_decimal() const {
        long digits = static_cast<long>(std::ceil(precision() * 0.30103)) + 2;
        int need = mpfr_snprintf(nullptr, 0, "%.*RNe", static_cast<int>(digits), v_);
        std::vector<char> buf(static_cast<size_t>(need) + 1);
        mpfr_snprintf(buf.data(), buf.size(), "%.*RNe", static_cast<int>(digits), v_);
        return std::string(buf.data());
    }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        return binop(a, b, mpfr_add);
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        return binop(a, b, mpfr_sub);
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        return binop(a, b, mpfr_mul);
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        require(!b.is_zero(), errc::division_by_zero, "big-float division by zero");
        return binop(a, b, mpfr_div);
    }

    BigFloat& operator+=(const BigFloat& b) { return *this = *this + b; }
    BigFloat& operator-=(const BigFloat& b) { return *this = *this - b; }
    BigFloat& operator*=(const BigFloat& b) { return *this = *this * b; }
    BigFloat& operator/=(const BigFloat& b) { return *this = *this / b; }

    BigFloat operator-() const {
        BigFloat r(precision());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    friend bool operator==(const BigFloat& a, const BigFloat& b) {
        return mpfr_cmp(a.v_, b.v_) == 0;
    }
    friend bool operator!=(const BigFloat& a, const BigFloat& b) { return !(a == b); }
    friend bool operator<(const BigFloat& a, const BigFloat& b) {
        return mpfr_cmp(a.v_, b.v_) < 0;
    }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return !(b < a); }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return !(a < b); }

    friend BigFloat abs(const BigFloat& a) {
        BigFloat r(a.precision());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend BigFloat sqrt(const BigFloat& a) {
        require(a.sign() >= 0, errc::invalid_parameter, "sqrt of a negative value");
        BigFloat r(a.precision());
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend BigFloat pow_int(const BigFloat& a, long e) {
        if (e < 0)
            require(!a.is_zero(), errc::division_by_zero, "0 raised to a negative power");
        BigFloat r(a.precision());
        mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
        return r;
    }

    // Positive real n-th root.
    friend BigFloat rootn(const BigFloat& a, unsigned long n) {
        require(n > 0, errc::invalid_parameter, "0th root");
        require(a.sign() >= 0, errc::invalid_parameter, "rootn of a negative value");
        BigFloat r(a.precision());
        mpfr_rootn_ui(r.v_, a.v_, n, MPFR_RNDN);
        return r;
    }

    friend BigFloat log(const BigFloat& a) {
        require(a.sign() > 0, errc::invalid_parameter, "log of a non-positive value");
        BigFloat r(a.precision());
        mpfr_log(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend BigFloat exp(const BigFloat& a) {
        BigFloat r(a.precision());
        mpfr_exp(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend BigFloat sin(const BigFloat& a) {
        BigFloat r(a.precision());
        mpfr_sin(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend BigFloat cos(const BigFloat& a) {
        BigFloat r(a.precision());
        mpfr_cos(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend BigFloat atan2(const BigFloat& y, const BigFloat& x) {
        BigFloat r(std::max(y.precision(), x.precision()));
        mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
        return r;
    }

    static BigFloat pi(long prec) {
        BigFloat r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

  private:
    static void check_precision(long prec) {
        require(prec >= min_precision, errc::invalid_parameter,
                "precision below " + std::to_string(min_precision) + " bits");
    }

    using mpfr_binop = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

    static BigFloat binop(const BigFloat& a, const BigFloat& b, mpfr_binop op) {
        BigFloat r(std::max(a.precision(), b.precision()));
        op(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    mpfr_t v_;
};

} // namespace qmpl
