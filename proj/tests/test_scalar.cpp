#include <catch_amalgamated.hpp>

#include "qmpl/parse.hpp"
#include "qmpl/scalar.hpp"

using namespace qmpl;

TEST_CASE("rational parsing and printing round-trips") {
    CHECK(to_string(parse_rational("3/4")) == "3/4");
    CHECK(to_string(parse_rational("-6/8")) == "-3/4");
    CHECK(to_string(parse_rational("42")) == "42");
    CHECK(parse_rational("0/5") == Rational(0));
    CHECK_THROWS_AS(parse_rational("1/0"), error);
    CHECK_THROWS_AS(parse_rational("abc"), error);
    CHECK_THROWS_AS(parse_rational(""), error);
}

TEST_CASE("decimal literals convert to rationals exactly") {
    CHECK(parse_decimal_rational("0.25") == make_rational(1, 4));
    CHECK(parse_decimal_rational("-1.5e-2") == make_rational(-3, 200));
    CHECK(parse_decimal_rational("12e3") == Rational(12000));
    CHECK(parse_decimal_rational("7/8") == make_rational(7, 8));
    CHECK_THROWS_AS(parse_decimal_rational("1.2.3"), error);
}

TEST_CASE("rational powers and exact square roots") {
    CHECK(pow_int(make_rational(2, 3), 3) == make_rational(8, 27));
    CHECK(pow_int(make_rational(2, 3), -2) == make_rational(9, 4));
    CHECK(pow_int(Rational(5), 0) == Rational(1));
    CHECK_THROWS_AS(pow_int(Rational(0), -1), error);

    CHECK(exact_sqrt(make_rational(9, 16)) == make_rational(3, 4));
    CHECK(exact_sqrt(Rational(0)) == Rational(0));
    CHECK_FALSE(exact_sqrt(Rational(2)).has_value());
    CHECK_FALSE(exact_sqrt(Rational(-4)).has_value());
}

TEST_CASE("big floats carry precision through arithmetic") {
    BigFloat a = BigFloat::from_long(1, 64);
    BigFloat b = BigFloat::from_long(3, 192);
    BigFloat c = a / b;
    CHECK(c.precision() == 192);
    CHECK(abs(c * b - a).to_double() < 1e-50);

    CHECK_THROWS_AS(BigFloat(10), error); // below the precision floor
    CHECK_THROWS_AS(a / BigFloat::from_long(0, 64), error);
    CHECK_THROWS_AS(sqrt(BigFloat::from_long(-1, 64)), error);
}

TEST_CASE("big float decimal strings round-trip at full precision") {
    BigFloat x = BigFloat::from_rational(make_rational(1, 7), 256);
    BigFloat y = BigFloat::from_string(x.to_decimal(), 256);
    CHECK(x == y);
}

TEST_CASE("complex arithmetic over rationals") {
    ExactComplex i{Rational(0), Rational(1)};
    ExactComplex one{Rational(1), Rational(0)};
    CHECK(i * i == -one);
    CHECK((one + i) / (one + i) == one);
    CHECK(norm_sq(ExactComplex{make_rational(3, 5), make_rational(4, 5)}) == Rational(1));
    CHECK_THROWS_AS(one / ExactComplex{}, error);
}

TEST_CASE("scalars refuse mixed-mode arithmetic") {
    Scalar e = Scalar::exact(make_rational(1, 2));
    Scalar f = Scalar::floating_real(BigFloat::from_long(2, 128));
    CHECK_THROWS_AS(e + f, error);
    CHECK_THROWS_AS(e * f, error);
    CHECK(e.precision_bits() == 0);
    CHECK(f.precision_bits() == 128);

    Scalar widened = e.to_mode(ScalarMode::floating, 128);
    CHECK(widened.mode() == ScalarMode::floating);
    CHECK((widened + f).precision_bits() == 128);
    CHECK_THROWS_AS(f.to_mode(ScalarMode::exact, 0), error);
}

TEST_CASE("scalar ordering is a strict weak order on values") {
    Scalar a = Scalar::exact(make_rational(-1, 2));
    Scalar b = Scalar::exact(make_rational(1, 3));
    Scalar c = Scalar::exact(make_rational(1, 3), Rational(1));
    CHECK(scalar_less(a, b));
    CHECK(scalar_less(b, c));
    CHECK_FALSE(scalar_less(b, b));
    // exact sorts before float by convention
    Scalar f = Scalar::floating_real(BigFloat::from_long(-100, 64));
    CHECK(scalar_less(a, f));
}

TEST_CASE("scalar parsing honors the requested mode") {
    Scalar e = parse_scalar("1/3", ScalarMode::exact, 0);
    CHECK(e.mode() == ScalarMode::exact);
    CHECK(e.as_exact().re == make_rational(1, 3));

    Scalar z = parse_scalar("(1/3, -1/5)", ScalarMode::exact, 0);
    CHECK(z.as_exact().im == make_rational(-1, 5));

    Scalar f = parse_scalar("0.125", ScalarMode::floating, 128);
    CHECK(f.mode() == ScalarMode::floating);
    CHECK(f.as_float().re.to_double() == 0.125);

    Scalar d = parse_scalar("0.1", ScalarMode::exact, 0);
    CHECK(d.as_exact().re == make_rational(1, 10));
}
