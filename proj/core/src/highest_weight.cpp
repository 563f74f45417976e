#include "knapp/highest_weight.hpp"

#include <cmath>

#include "knapp/error.hpp"

namespace knapp {

double sphere_eigenvalue(int n, int k) {
  if (n < 2 || k < 0) fail(ErrorCode::InvalidArgument, "need n >= 2, k >= 0");
  return std::sqrt(static_cast<double>(k) * (k + n - 1.0));
}

Complex evaluate_highest_weight(int n, int k, const VecN& x) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k >= 1 required");
  if (std::abs(x.norm() - 1.0) > 1e-12) fail(ErrorCode::NotOnSphere, "|x| != 1");

  const double r2 = x[0] * x[0] + x[1] * x[1];
  if (r2 == 0.0) return {0.0, 0.0};

  // k^{(n-1)/4} (sqrt(1-|x'|^2))^k in log space; phase via unit-complex powering
  double log_mag = 0.25 * (n - 1) * std::log(static_cast<double>(k)) + 0.5 * k * std::log(r2);
  double mag = std::exp(log_mag);
  double r = std::sqrt(r2);
  Complex w(x[0] / r, x[1] / r);
  return mag * unit_pow(w, static_cast<unsigned long>(k));
}

SphereMode deck_sum_mode_k(const SphereQuotient& S, const EquatorStabilizer& E, int k) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k >= 1 required");
  if (E.m > 0 && k % E.m != 0)
    fail(ErrorCode::KNotMultipleOfM,
         "degree " + std::to_string(k) + " is not a multiple of the stabilizer order " +
             std::to_string(E.m));
  SphereMode mode;
  mode.n = S.n;
  mode.k = k;
  mode.lambda = sphere_eigenvalue(S.n, k);
  mode.stabilizer_order = E.m;
  mode.deck_multiplicity = static_cast<double>(E.m);
  mode.deck = S.deck;
  return mode;
}

SphereMode deck_sum_mode(const SphereQuotient& S, const EquatorStabilizer& E, int ell) {
  if (ell < 1) fail(ErrorCode::InvalidArgument, "ell >= 1 required");
  return deck_sum_mode_k(S, E, ell * std::max(1, E.m));
}

SphereMode plain_sphere_mode(int n, int k) {
  SphereMode mode;
  mode.n = n;
  mode.k = k;
  mode.lambda = sphere_eigenvalue(n, k);
  mode.stabilizer_order = 1;
  mode.deck_multiplicity = 1.0;
  mode.deck.push_back(MatN::Identity(n + 1, n + 1));
  return mode;
}

}  // namespace knapp
