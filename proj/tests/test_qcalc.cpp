#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qmpl/qcalc.hpp"

using namespace qmpl;

namespace {

QParam qp(long num, long den) {
    return QParam::make(Scalar::exact(make_rational(num, den)));
}

} // namespace

TEST_CASE("q parameters are validated up front") {
    CHECK_THROWS_AS(QParam::make(Scalar::exact_long(1)), error);
    CHECK_THROWS_AS(QParam::make(Scalar::exact_long(0)), error);
    CHECK_THROWS_AS(QParam::make(Scalar::exact(Rational(0), Rational(1))), error);
    CHECK(qp(1, 2).regime() == Regime::inside);
    CHECK(qp(3, 1).regime() == Regime::outside);
    // |3/5 + 4/5 i| = 1 exactly
    CHECK_THROWS_AS(
        QParam::make(Scalar::exact(make_rational(3, 5), make_rational(4, 5))), error);
}

TEST_CASE("q-brackets match their defining ratio") {
    QParam q = qp(2, 1);
    CHECK(q_bracket(1, q) == Scalar::exact_long(1));
    CHECK(q_bracket(3, q) == Scalar::exact_long(7)); // 1 + 2 + 4
    CHECK(q_bracket(2, qp(1, 2)) == Scalar::exact(make_rational(3, 2)));
    CHECK_THROWS_AS(q_bracket(0, q), error);
}

TEST_CASE("q-derivative of a monomial gives a bracket times the lowered power") {
    QParam q = qp(1, 3);
    Scalar z0 = Scalar::exact(make_rational(2, 7));
    auto cube = [](const Scalar& z) { return z * z * z; };
    Scalar want = q_bracket(3, q) * z0 * z0;
    CHECK(q_derivative(cube, z0, q) == want);
    CHECK_THROWS_AS(q_derivative(cube, Scalar::exact_long(0), q), error);
}

TEST_CASE("single Jackson integral of t^1 matches its closed form") {
    QParam q = qp(1, 2);
    long cap = 20;
    auto ident = [](const Scalar& t) { return t; };
    QuadratureResult r =
        jackson_integral(ident, Scalar::exact_long(1), q, cap);
    // (1-q) * sum_{i<cap} q^{2i} = (1-q)(1-q^{2 cap})/(1-q^2)
    Scalar one = Scalar::exact_long(1);
    Scalar qq = q.q();
    Scalar want = (one - qq) * (one - pow_int(qq, 2 * cap)) / (one - qq * qq);
    CHECK(r.value == want);
    CHECK(r.converged);
    CHECK(r.points_evaluated == static_cast<std::uint64_t>(cap));
    CHECK(r.points_dropped == 0);

    // and the infinite sum tends to 1/[2]_q
    Scalar limit = one / q_bracket(2, q);
    CHECK(abs_approx(r.value - limit) < 1e-5);
}

TEST_CASE("Jackson integration rejects bad setups") {
    auto ident = [](const Scalar& t) { return t; };
    CHECK_THROWS_AS(jackson_integral(ident, Scalar::exact_long(1), qp(3, 1), 10), error);
    CHECK_THROWS_AS(jackson_integral(ident, Scalar::exact_long(0), qp(1, 2), 10), error);
    CHECK_THROWS_AS(jackson_integral(ident, Scalar::exact_long(2), qp(1, 2), 10), error);
    CHECK_THROWS_AS(jackson_integral(ident, Scalar::exact_long(1), qp(1, 2), 0), error);
}

TEST_CASE("singular lattice points follow the chosen policy") {
    QParam q = qp(1, 2);
    IntegrationWord w{{Letter::omega1}};
    CHECK_THROWS_AS(jackson_iterated(w, q, 16, SingularPolicy::error), error);

    QuadratureResult r = jackson_iterated(w, q, 16, SingularPolicy::drop);
    CHECK(r.points_dropped == 1);
    // (1-q) sum_{s>=1} q^s/(1-q^s), truncated at the cap
    Scalar one = Scalar::exact_long(1);
    Scalar sum = Scalar::exact_long(0);
    for (long s = 1; s < 16; ++s) {
        Scalar qs = pow_int(q.q(), s);
        sum += qs / (one - qs);
    }
    CHECK(r.value == (one - q.q()) * sum);
}

TEST_CASE("the dt/t word alone does not settle and is flagged") {
    QuadratureResult r = jackson_iterated({{Letter::omega0}}, qp(1, 2), 64,
                                          SingularPolicy::drop);
    CHECK_FALSE(r.converged);
    CHECK(r.tail.kind == TailBound::Kind::unbounded);
}

TEST_CASE("two-letter Jackson word matches the collapsed closed form") {
    // exact mode: the lattice driver and the closed form must agree term
    // for term, so this is an equality check, not a tolerance check.
    // dt/(1-t) sits innermost, dt/t outermost.
    QParam q = qp(2, 3);
    long cap = 40;
    IntegrationWord w{{Letter::omega1, Letter::omega0}};
    QuadratureResult r = jackson_iterated(w, q, cap, SingularPolicy::drop);
    CHECK(r.points_dropped == 1);
    CHECK(r.value == oracles::jackson_zeta2_closed_form(q.q(), cap));
    CHECK(r.converged);

    // float mode agrees with the same closed form to rounding error
    QParam qf = QParam::make(Scalar::floating_real(
        BigFloat::from_rational(make_rational(2, 3), 128)));
    QuadratureResult rf = jackson_iterated(w, qf, cap, SingularPolicy::drop);
    Scalar want = oracles::jackson_zeta2_closed_form(qf.q(), cap);
    CHECK(abs_approx(rf.value - want) < 1e-30);
}
