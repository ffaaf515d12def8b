#include "hplab/semiclassical.hpp"

namespace hplab {

double consistency_tolerance() {
  // Products of expansions lose a few digits to cancellation; keep 80%.
  return std::pow(10.0, -0.8 * precision_digits10());
}

QFn two_point_function(const Rational& alpha) {
  return QFn({Rational(1), Rational(-1)}, {alpha, Rational(-alpha)});
}

}  // namespace hplab
