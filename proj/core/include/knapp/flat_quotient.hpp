#pragma once

#include <vector>

#include "knapp/error.hpp"
#include "knapp/linalg.hpp"

namespace knapp {

// A rigid motion x -> m x + j with m orthogonal.
struct RigidMotion {
  MatN linear;
  VecN shift;

  VecN apply(const VecN& x) const { return linear * x + shift; }
  RigidMotion inverse() const { return {MatN(linear.transpose()), VecN(-(linear.transpose() * shift))}; }
  RigidMotion after(const RigidMotion& other) const {  // this ∘ other
    return {MatN(linear * other.linear), VecN(linear * other.shift + shift)};
  }
};

// Compact flat space form R^n / Gamma. The translation lattice is
// Lambda = B Z^n; coset_reps holds one representative per point-group element
// (identity first, shifts normalized so B^{-1} j lies in [0,1)^n).
struct FlatQuotient {
  int n = 2;
  MatN basis;      // B, columns generate Lambda
  MatN basis_inv;  // B^{-1}
  double cond = 1.0;
  std::vector<RigidMotion> coset_reps;
  std::vector<IMatN> point_group_int;  // U_i = B^{-1} m_i B, integer unimodular
  double tol = 1e-10;

  int index() const { return static_cast<int>(coset_reps.size()); }  // N
  double det() const { return std::abs(basis.determinant()); }
  bool aligned() const;  // last basis column parallel to +e_n
};

FlatQuotient make_flat_quotient(const MatN& B, const std::vector<RigidMotion>& affine_gens,
                                double tol = 1e-10);

// Rotates coordinates so the last basis column becomes (0,...,0,s), s > 0.
// Returns the rotation Q (identity if already aligned) and the conjugated
// quotient with basis Q B and generators Q alpha Q^T.
struct Alignment {
  MatN rotation;
  FlatQuotient quotient;
};

Alignment align_lattice(const FlatQuotient& F);

// Axis line l0 = {(x0', t)} for the Knapp construction on an aligned quotient,
// with clearance delta1 = min_i dist(x0, l_{alpha_i}) (+inf when N = 1).
struct AxisChoice {
  VecN x0_prime;        // in R^{n-1}
  double x0_n = 0.0;    // base-point height (x0)_n
  double clearance = 0; // delta1
  double c0 = 0.05;
  double c1 = 0.05;
  double c2 = 0.05;
};

AxisChoice choose_axis_line(const FlatQuotient& F);

// Minimal t > 0 such that some deck element maps (x0', 0) to (x0', t)
// preserving the +e_n direction.
double geodesic_period(const FlatQuotient& F, const AxisChoice& A);

// Line through p with unit direction d.
struct Line {
  VecN point;
  VecN dir;
};

// Preimage alpha^{-1}(l0) of the axis line under a rigid motion.
Line coset_line(const RigidMotion& alpha, const VecN& x0_prime);
double distance_point_line(const VecN& x, const Line& line);

}  // namespace knapp
