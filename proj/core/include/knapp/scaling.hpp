#pragma once

#include <utility>
#include <vector>

namespace knapp {

struct CriticalExponents {
  double q_c = 0.0;
  double mu = 0.0;
};

// q_c = 2(n+1)/(n-1); mu(q) = n(1/2 - 1/q) - 1/2 above q_c and
// (n-1)/2 (1/2 - 1/q) on (2, q_c]. Throws QOutOfRange for q <= 2.
CriticalExponents critical_exponents(int n, double q);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
  std::size_t count = 0;

  bool reportable() const { return count >= 5 && max_residual < 0.2; }
};

// Least-squares slope of log(value) against log(abscissa).
ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& pairs);

}  // namespace knapp
