#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "knapp/flat_mode.hpp"
#include "knapp/flat_quotient.hpp"
#include "knapp/linalg.hpp"
#include "knapp/sphere_quotient.hpp"

namespace knapp {

enum class DomainKind { sphere, flat_cell, sphere_tube, flat_tube };

// Quadrature domain description. Midpoint tensor grids in chart coordinates:
//   sphere      S^n as (theta, w) in [0,2pi) x B^{n-1}, measure dtheta dw
//   flat_cell   lattice cell B [0,1)^n, Jacobian |det B|, scaled by 1/N
//   sphere_tube (theta, |w| <= sin r), divided by the stabilizer order
//   flat_tube   one geodesic period x normal ball around the axis line
struct IntegrationDomain {
  DomainKind kind = DomainKind::flat_cell;
  int n = 2;  // manifold dimension
  double lambda_hint = 0.0;
  std::vector<int> base_res;

  // sphere / sphere_tube
  std::size_t divisor = 1;
  double tube_radius = 0.0;

  // flat
  MatN basis;
  int quotient_index = 1;
  MatN to_original;  // aligned -> original coordinates (tube charts)
  VecN axis_prime;
  double axis_start = 0.0;
  double axis_length = 0.0;

  IntegrationDomain with_resolution(std::vector<int> res) const {
    IntegrationDomain d = *this;
    d.base_res = std::move(res);
    return d;
  }
};

IntegrationDomain sphere_domain(int n, std::size_t group_order, double lambda_hint);
IntegrationDomain flat_cell_domain(const FlatQuotient& F, double lambda_hint);

// Tube about the projected reference circle; throws TubeNotEmbedded when the
// radius reaches the certified separation (half the minimum distance to a
// non-stabilizer image circle) or the pi/4 cap.
IntegrationDomain sphere_tube_domain(int n, std::size_t stabilizer_order, double radius,
                                     double separation, double lambda_hint);

// Tube of one period about the axis line of an aligned quotient (to_original
// maps aligned coordinates back to the evaluator's frame). Throws
// TubeNotEmbedded when the radius reaches half the axis clearance, half the
// lattice offset, or when some coset line is skew to the axis.
IntegrationDomain flat_tube_domain(const FlatQuotient& F_aligned, const MatN& to_original,
                                   const AxisChoice& axis, double period, double radius,
                                   double lambda_hint);

struct NormReport {
  double p = 2.0;
  double value = 0.0;
  double error_estimate = 0.0;
  std::uint64_t nodes = 0;
  double wall_ms = 0.0;
  bool converged = false;
};

using AbsEvaluator = std::function<double(const VecN&)>;

// Midpoint quadrature of |f|^p with a two-grid error estimate; refines once
// (h -> h/2) when the estimate misses the relative tolerance, then throws
// NotConverged. Throws ResolutionTooCoarse below 10 nodes per wavelength.
NormReport lp_norm(const AbsEvaluator& abs_eval, const IntegrationDomain& domain, double p,
                   double tol);

struct MultiNorms {
  NormReport p1, p2, p4;
};

// One-pass variant computing the L^1, L^2 and L^4 norms on a shared grid
// (identical traversal order, identical values to per-norm runs).
MultiNorms lp_norms_124(const AbsEvaluator& abs_eval, const IntegrationDomain& domain, double tol);

// lp_norm restricted to tube domains.
NormReport tube_lp_norm(const AbsEvaluator& abs_eval, const IntegrationDomain& tube_domain,
                        double p, double tol);

// Minimum of |f| over the base grid of a tube domain (sampled bound).
double sampled_min_abs(const AbsEvaluator& abs_eval, const IntegrationDomain& tube_domain);

// Exact squared L^2 norm of a flat mode over the fundamental domain,
// (1/N) |det B| sum |combined coefficient|^2.
double l2_exact_parseval(const FlatMode& mode);

}  // namespace knapp
