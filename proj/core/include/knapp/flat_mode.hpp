#pragma once

#include <memory>
#include <vector>

#include "knapp/bump.hpp"
#include "knapp/flat_quotient.hpp"
#include "knapp/linalg.hpp"

namespace knapp {

// Frequency selection on the dual ellipse {Q = 1}, Q(xi) = |B^{-T} xi|^2:
// xi0 is the point whose outward normal is +e_n, and lambda_k = k / (xi0)_n
// makes the last frequency component the integer k.
struct FrequencySelection {
  double lambda = 0.0;
  VecN xi0;
  double xi0_n = 0.0;
};

FrequencySelection select_frequency(const FlatQuotient& F, int k);

enum class EvalMethod { frequency, poisson };

struct ModeOptions {
  bool weakened_floor = false;  // accept delta >= lambda^{-1+eps} instead of 1/log(lambda)
  double eps = 0.1;
  EvalMethod method = EvalMethod::poisson;
};

struct ActiveFrequency {
  IVecN freq;     // full n-dim integer frequency on the Lambda-dual lattice
  Complex coeff;  // combined coefficient (normalization and deck phases included)
};

// Knapp tube of the flat construction: |x' - x0'| <= c1 (lambda delta)^{-1/2},
// |x_n - (x0)_n| <= c2, in aligned coordinates.
struct KnappTube {
  VecN center_prime;
  double center_n = 0.0;
  double radius = 0.0;
  double half_length = 0.0;
  double separation_margin = 0.0;  // lambda*delta - (4/delta1)^2
  double offdiag_bound = 0.0;      // certified bound on the i >= 2 contributions

  bool contains(const VecN& x) const;
  double volume() const;
  bool offdiag_ok() const { return offdiag_bound < 1e-6; }
};

// Spectrally localized Knapp quasimode on a flat quotient: the deck average
// psi(x) = sum_i phi_lambda(B^{-1} alpha_i(x)) of a windowed torus mode with
// normalization (lambda delta)^{-(n-1)/4}. Immutable after construction.
struct FlatMode {
  FlatQuotient quotient;  // aligned copy
  MatN rotation;          // original -> aligned coordinates
  bool rotated = false;
  std::shared_ptr<const BumpProfile> bump;

  int k = 0;
  double lambda = 0.0;
  double delta = 0.0;
  VecN xi0;
  double xi0_n = 0.0;
  VecN y0_prime;
  double normalization = 1.0;  // (lambda delta)^{-(n-1)/4}

  std::vector<IVecN> base_freqs;    // active xi' (dimension n-1)
  std::vector<double> base_coeffs;  // phi((xi' - lambda xi0') / sqrt(lambda delta))
  std::vector<ActiveFrequency> combined;  // full deck-sum frequency content

  std::vector<MatN> deck_lin;    // B^{-1} m_i
  std::vector<VecN> deck_shift;  // B^{-1} j_i
  double trunc_radius = 0.0;     // Poisson truncation H
  EvalMethod method = EvalMethod::poisson;
  bool certified = false;
  double window_margin = 0.0;

  Complex operator()(const VecN& x_original) const { return eval(x_original, method); }
  Complex eval(const VecN& x_original, EvalMethod how) const;

  // the underlying torus mode phi_lambda in unit-torus coordinates y = B^{-1} x
  Complex eval_torus(const VecN& y, EvalMethod how) const;

  double q_form(const VecN& xi) const;  // |B^{-T} xi|^2
};

// Builds and certifies the deck-averaged mode; accepts unaligned quotients by
// conjugating internally. Throws DeltaOutOfRange or WindowViolated.
FlatMode spaceform_mode(const FlatQuotient& F, std::shared_ptr<const BumpProfile> bump, int k,
                        double delta, const AxisChoice& axis, const ModeOptions& opts = {});

// Assembles an uncertified mode from explicit frequency content (test and
// certification tooling; evaluation is frequency-side only).
FlatMode make_raw_mode(const FlatQuotient& F_aligned, double lambda, double delta,
                       std::vector<ActiveFrequency> combined);

struct WindowCertificate {
  bool pass = false;
  double margin = 0.0;  // min over active xi of the distance to the window edges
  std::vector<IVecN> violations;
};

WindowCertificate spectral_window_check(const FlatMode& mode);

// phi_lambda evaluated through the certified mode; NotCertified otherwise.
Complex evaluate_torus_mode(const FlatMode& mode, const VecN& y, EvalMethod how);

// Tube factory with the separation precondition lambda*delta >= (4/delta1)^2
// and the sampled off-diagonal tail certificate.
KnappTube knapp_tube(const FlatQuotient& F, const AxisChoice& axis, const FlatMode& mode);

struct DefectReport {
  double defect_spectral = 0.0;     // ||(P^2 - lambda^2) psi|| / ||psi||, P-eigenvalue sqrt(Q)
  double threshold_spectral = 0.0;  // lambda * delta * (1 + delta / (2 lambda))
  double defect_physical = 0.0;     // 4 pi^2 times spectral (true Laplacian units)
  double threshold_physical = 0.0;
  bool pass = false;
};

DefectReport quasimode_defect(const FlatMode& mode, double lambda);

}  // namespace knapp
