#pragma once

#include <vector>

#include "knapp/error.hpp"
#include "knapp/linalg.hpp"

namespace knapp {

// Compact spherical space form S^n / Gamma given by its finite deck group of
// orthogonal (n+1)x(n+1) matrices. deck[0] is the identity.
struct SphereQuotient {
  int n = 2;
  std::vector<MatN> deck;
  double tol = 1e-10;

  std::size_t order() const { return deck.size(); }
};

// Generates the full group from `generators` by closure (dedup distance
// 10*tol, cap 10^4 elements) and verifies orthogonality and freeness.
SphereQuotient make_sphere_quotient(int n, const std::vector<MatN>& generators,
                                    double tol = 1e-10);

// Stabilizer of the reference great circle
//   gamma0 = {(cos t, sin t, 0, ..., 0)}
// inside the deck group. Acting on gamma0 it is cyclic of order m; each
// element splits as blockdiag(R_{2 pi j / m}, m_j) with m_j in O(n-1).
struct EquatorStabilizer {
  int m = 1;
  std::vector<int> stabilizer;     // indices into deck, identity first
  std::vector<double> angles;      // rotation angle of each stabilizer element
  std::vector<MatN> blocks;        // the (n-1)x(n-1) factors m_j
  std::vector<int> non_stabilizer; // indices of the remaining elements
};

EquatorStabilizer equator_stabilizer(const SphereQuotient& S);

// Base point on gamma0 staying clear of every non-stabilizer image circle
// gamma_j = alpha_j^{-1}(gamma0). `clearance` is half the attained minimum
// distance, capped at pi/4.
struct SphereBasePoint {
  VecN point;        // in R^{n+1}
  double theta = 0;  // angle along gamma0
  double clearance = 0;
};

SphereBasePoint choose_base_point_sphere(const SphereQuotient& S, const EquatorStabilizer& E);

// Minimum distance between gamma0 and any non-stabilizer image circle
// (sampled bound; +inf when every deck element stabilizes gamma0). Tubes about
// the projected geodesic embed below half this value.
double equator_separation(const SphereQuotient& S, const EquatorStabilizer& E);

// Geodesic distance from x in S^n to the reference circle gamma0.
double distance_to_equator(const VecN& x);

}  // namespace knapp
