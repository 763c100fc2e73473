#pragma once

#include <string>

#include "qmpl/scalar.hpp"

namespace qmpl {

// Which side of the unit circle the deformation parameter sits on. The
// two regimes need different convergence arguments, so the distinction
// is part of the type rather than something evaluators re-derive.
enum class Regime { inside, outside };

inline const char* regime_name(Regime r) {
    return r == Regime::inside ? "inside" : "outside";
}

// A validated deformation parameter: nonzero and off the unit circle.
// |q| = 1 is rejected outright (it would put 1 - q^k arbitrarily close
// to zero, or exactly on it at roots of unity), which also excludes the
// degenerate q = 1.
class QParam {
  public:
    static QParam make(Scalar q) {
        require(!q.is_zero(), errc::invalid_parameter, "q must be nonzero");
        Scalar n = norm_sq(q);
        Scalar one = Scalar::exact_long(1).to_mode(q.mode(), std::max<long>(q.precision_bits(), BigFloat::min_precision));
        require(n != one, errc::invalid_parameter, "|q| = 1 is not allowed");
        bool inside;
        if (q.mode() == ScalarMode::exact)
            inside = n.as_exact().re < Rational(1);
        else
            inside = n.as_float().re < BigFloat::from_long(1, BigFloat::min_precision);
        return QParam(std::move(q), inside ? Regime::inside : Regime::outside);
    }

    const Scalar& q() const { return q_; }
    Regime regime() const { return regime_; }
    ScalarMode mode() const { return q_.mode(); }

    // |q| as a double, for tail-bound bookkeeping.
    double abs_q() const { return abs_approx(q_); }

  private:
    QParam(Scalar q, Regime r) : q_(std::move(q)), regime_(r) {}

    Scalar q_;
    Regime regime_;
};

} // namespace qmpl
