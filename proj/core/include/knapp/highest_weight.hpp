#pragma once

#include <vector>

#include "knapp/linalg.hpp"
#include "knapp/sphere_quotient.hpp"

namespace knapp {

// Eigenvalue of sqrt(-Laplacian) on degree-k spherical harmonics: sqrt(k(k+n-1)).
double sphere_eigenvalue(int n, int k);

// Highest-weight harmonic Q_k(x) = k^{(n-1)/4} (x_1 + i x_2)^k at |x| = 1,
// evaluated in polar form (log-space magnitude, binary-powered phase).
Complex evaluate_highest_weight(int n, int k, const VecN& x);

// Deck-group average e(x) = sum_{alpha in Gamma} Q_k(alpha x), a Gamma-invariant
// eigenfunction of the quotient with eigenvalue lambda_k.
struct SphereMode {
  int n = 2;
  int k = 1;
  double lambda = 0.0;
  int stabilizer_order = 1;     // m
  double deck_multiplicity = 1; // value of e near the base point is ~ m Q_k
  std::vector<MatN> deck;

  Complex operator()(const VecN& x) const {
    Complex sum(0.0, 0.0);
    for (const MatN& g : deck) sum += evaluate_highest_weight(n, k, VecN(g * x));
    return sum;
  }
};

// k = ell * m where m is the stabilizer order (the non-cancelling subsequence).
SphereMode deck_sum_mode(const SphereQuotient& S, const EquatorStabilizer& E, int ell);

// Low-level entry taking a raw degree; throws KNotMultipleOfM when k % m != 0.
SphereMode deck_sum_mode_k(const SphereQuotient& S, const EquatorStabilizer& E, int k);

// Q_k on the plain sphere (trivial deck group).
SphereMode plain_sphere_mode(int n, int k);

}  // namespace knapp
