#ifndef COVLAP_WEIGHTS_HPP
#define COVLAP_WEIGHTS_HPP

#include <array>
#include <cmath>

#include "covlap/errors.hpp"

namespace covlap {

/// w(x) = (1 + |x|^2)^{1/2}; weight_at returns w(x)^exponent.
inline double weight_at(const std::array<double, 3>& x, double exponent) {
  const double w2 = 1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  if (exponent == 0.0) return 1.0;
  return std::pow(w2, 0.5 * exponent);
}

/// sigma must lie in (0, 1].
inline double validate_sigma(double sigma) {
  if (!(sigma > 0.0) || !(sigma <= 1.0))
    throw SigmaOutOfRange("sigma must lie in (0, 1], got " +
                          std::to_string(sigma));
  return sigma;
}

/// Decay parameter and a weight exponent; evaluates w(x)^exponent.
struct WeightSpec {
  double sigma;
  double exponent;

  WeightSpec(double sigma_, double exponent_)
      : sigma(validate_sigma(sigma_)), exponent(exponent_) {}

  double operator()(const std::array<double, 3>& x) const {
    return weight_at(x, exponent);
  }
};

}  // namespace covlap

#endif  // COVLAP_WEIGHTS_HPP
