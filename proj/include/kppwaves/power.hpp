#pragma once

#include <cmath>
#include <limits>

namespace kppwaves {

/// x^e for x >= 0 and real e, with the x = 0 limit made explicit
/// (0 for e > 0, 1 for e = 0, +inf for e < 0). Negative x gives NaN.
inline double real_pow(double x, double e) {
  if (x > 0.0) return std::exp(e * std::log(x));
  if (x == 0.0) {
    if (e > 0.0) return 0.0;
    if (e == 0.0) return 1.0;
    return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Fixed real exponent with fast paths for the small integer and half-integer
/// exponents that dominate the test models. Agrees with real_pow to rounding.
class Power {
 public:
  Power() = default;
  explicit Power(double exponent) : e_(exponent) {
    if (exponent == 0.0) kind_ = Kind::Zero;
    else if (exponent == 1.0) kind_ = Kind::One;
    else if (exponent == 2.0) kind_ = Kind::Two;
    else if (exponent == 3.0) kind_ = Kind::Three;
    else if (exponent == 0.5) kind_ = Kind::Half;
    else kind_ = Kind::General;
  }

  double exponent() const { return e_; }

  double operator()(double x) const {
    if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
    switch (kind_) {
      case Kind::Zero: return 1.0;
      case Kind::One: return x;
      case Kind::Two: return x * x;
      case Kind::Three: return x * x * x;
      case Kind::Half: return std::sqrt(x);
      case Kind::General: break;
    }
    return real_pow(x, e_);
  }

 private:
  enum class Kind { Zero, One, Two, Three, Half, General };
  double e_ = 1.0;
  Kind kind_ = Kind::One;
};

}  // namespace kppwaves
