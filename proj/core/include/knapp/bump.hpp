#pragma once

#include <memory>
#include <vector>

#include "knapp/linalg.hpp"

namespace knapp {

// Compactly supported even cutoff phi(xi) = A chi(xi / rho) on R^{n-1}, with
// chi(u) = exp(-1/(1-|u|^2)) on |u| < 1. The amplitude A is scaled so the
// Fourier transform satisfies phihat >= lower_bound >= 1 on the unit ball
// (the transform is real, even and radial). Transform values are tabulated
// once at construction for fast radial interpolation.
struct BumpProfile {
  int dim = 1;               // n-1
  double support = 0.6;      // rho
  double amplitude = 1.0;    // A
  double lower_bound = 0.0;  // certified min of phihat over |x| <= 1
  double cert_error = 0.0;   // quadrature error bound backing the certificate
  double envelope_m8 = 0.0;  // max |phihat(r)| (1+r)^8 over the table
  double table_step = 0.0;
  double table_max = 0.0;
  std::vector<double> table;

  // phi(xi); zero outside |xi| <= rho
  double operator()(const VecN& xi) const { return radial(xi.norm()); }
  double radial(double r) const;

  // phihat(x) for |x| = r (cubic interpolation in the table; 0 beyond table_max)
  double transform(double r) const;

  // Schwartz-style tail bound |phihat(r)| <= envelope_m8 / (1+r)^8
  double envelope(double r) const;

  // Smallest radius H with envelope(H) * safety <= budget.
  double truncation_radius(double budget, double safety = 100.0) const;
};

double bump_chi(double u);

// Builds and certifies the profile. Throws CertificationFailed when the
// transform cannot be bounded below by 1 on the unit ball (e.g. rho so large
// that the transform changes sign inside it).
std::shared_ptr<const BumpProfile> make_bump(int n_minus_1, double support_rho);

}  // namespace knapp
