#include "knapp/scaling.hpp"

#include <cmath>

#include "knapp/error.hpp"

namespace knapp {

CriticalExponents critical_exponents(int n, double q) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "n >= 2 required");
  if (!(q > 2.0)) fail(ErrorCode::QOutOfRange, "q must exceed 2");
  CriticalExponents ce;
  ce.q_c = 2.0 * (n + 1) / (n - 1.0);
  if (q > ce.q_c)
    ce.mu = n * (0.5 - 1.0 / q) - 0.5;
  else
    ce.mu = 0.5 * (n - 1) * (0.5 - 1.0 / q);
  return ce;
}

ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 5) fail(ErrorCode::TooFewPoints, "need at least 5 samples");
  for (const auto& [x, y] : pairs)
    if (!(x > 0.0) || !(y > 0.0))
      fail(ErrorCode::NonPositiveValue, "log-log fit needs positive samples");

  const auto m = static_cast<double>(pairs.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pairs) {
    sx += std::log(x);
    sy += std::log(y);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pairs) {
    double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx <= 0.0) fail(ErrorCode::InvalidArgument, "degenerate abscissae");

  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.count = pairs.size();
  for (const auto& [x, y] : pairs) {
    double r = std::log(y) - (fit.slope * std::log(x) + fit.intercept);
    fit.max_residual = std::max(fit.max_residual, std::abs(r));
  }
  return fit;
}

}  // namespace knapp
