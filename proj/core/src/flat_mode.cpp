#include "knapp/flat_mode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "knapp/summation.hpp"

namespace knapp {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

Complex unit_phase(double turns) {  // e^{2 pi i turns}
  double t = kTwoPi * std::remainder(turns, 1.0);
  return {std::cos(t), std::sin(t)};
}

std::vector<int> freq_key(const IVecN& f) {
  std::vector<int> key(f.size());
  for (int i = 0; i < f.size(); ++i) key[i] = f[i];
  return key;
}

}  // namespace

FrequencySelection select_frequency(const FlatQuotient& F, int k) {
  if (!F.aligned()) fail(ErrorCode::InvalidArgument, "select_frequency requires an aligned quotient");
  if (k < 1) fail(ErrorCode::InvalidArgument, "k >= 1 required");
  const int n = F.n;
  VecN bn = F.basis.col(n - 1);
  double s = bn.norm();
  if (s <= F.tol) fail(ErrorCode::DegenerateLattice, "degenerate last basis vector");
  FrequencySelection sel;
  sel.xi0 = F.basis.transpose() * bn / s;  // normal at xi0 parallel to e_n, Q(xi0) = 1
  sel.xi0_n = s;
  sel.lambda = static_cast<double>(k) / s;
  return sel;
}

double FlatMode::q_form(const VecN& xi) const {
  return (quotient.basis_inv.transpose() * xi).squaredNorm();
}

bool KnappTube::contains(const VecN& x) const {
  const int n = static_cast<int>(center_prime.size()) + 1;
  double r2 = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    double d = x[i] - center_prime[i];
    r2 += d * d;
  }
  return r2 <= radius * radius && std::abs(x[n - 1] - center_n) <= half_length;
}

double KnappTube::volume() const {
  const int d = static_cast<int>(center_prime.size());
  double ball = std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
  return 2 * half_length * ball * std::pow(radius, d);
}

FlatMode spaceform_mode(const FlatQuotient& F, std::shared_ptr<const BumpProfile> bump, int k,
                        double delta, const AxisChoice& axis, const ModeOptions& opts) {
  FlatMode mode;
  if (F.aligned()) {
    mode.quotient = F;
    mode.rotation = MatN::Identity(F.n, F.n);
    mode.rotated = false;
  } else {
    Alignment al = align_lattice(F);
    mode.quotient = std::move(al.quotient);
    mode.rotation = al.rotation;
    mode.rotated = true;
  }
  const FlatQuotient& Q = mode.quotient;
  const int n = Q.n;
  const int d = n - 1;
  if (bump->dim != d) fail(ErrorCode::InvalidArgument, "bump dimension does not match quotient");

  FrequencySelection sel = select_frequency(Q, k);
  mode.k = k;
  mode.lambda = sel.lambda;
  mode.xi0 = sel.xi0;
  mode.xi0_n = sel.xi0_n;
  mode.bump = std::move(bump);

  if (mode.lambda <= 2.0) fail(ErrorCode::InvalidArgument, "lambda too small");
  double floor = opts.weakened_floor ? std::pow(mode.lambda, -1.0 + opts.eps)
                                     : 1.0 / std::log(mode.lambda);
  if (delta < floor - 1e-12 || delta > 1.0 + 1e-12)
    fail(ErrorCode::DeltaOutOfRange,
         "delta = " + std::to_string(delta) + " outside [" + std::to_string(floor) + ", 1]");
  mode.delta = delta;

  const double ld = mode.lambda * delta;
  const double sqrt_ld = std::sqrt(ld);
  mode.normalization = std::pow(ld, -0.25 * d);

  // y0' = A x0' with A the leading (n-1) block of B^{-1}
  mode.y0_prime = VecN::Zero(d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) mode.y0_prime[r] += Q.basis_inv(r, c) * axis.x0_prime[c];

  // active frequencies: xi' in Z^{n-1} with phi((xi' - lambda xi0')/sqrt(ld)) != 0
  const double rho = mode.bump->support;
  VecN center(d);
  for (int i = 0; i < d; ++i) center[i] = mode.lambda * mode.xi0[i];
  IVecN lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = static_cast<int>(std::ceil(center[i] - rho * sqrt_ld));
    hi[i] = static_cast<int>(std::floor(center[i] + rho * sqrt_ld));
  }
  IVecN xi = lo;
  for (;;) {
    VecN u(d);
    for (int i = 0; i < d; ++i) u[i] = (static_cast<double>(xi[i]) - center[i]) / sqrt_ld;
    double phi_val = (*mode.bump)(u);
    if (phi_val != 0.0) {
      mode.base_freqs.push_back(xi);
      mode.base_coeffs.push_back(phi_val);
    }
    int i = 0;
    for (; i < d; ++i) {
      if (xi[i] < hi[i]) { ++xi[i]; break; }
      xi[i] = lo[i];
    }
    if (i == d) break;
  }
  if (mode.base_freqs.empty())
    fail(ErrorCode::InvalidArgument, "no active frequencies; k too small for this window");

  // combine the deck images on the Lambda-dual lattice
  std::map<std::vector<int>, Complex> buckets;
  for (int rep = 0; rep < Q.index(); ++rep) {
    const IMatN& U = Q.point_group_int[rep];
    VecN t = Q.basis_inv * Q.coset_reps[rep].shift;
    for (std::size_t a = 0; a < mode.base_freqs.size(); ++a) {
      IVecN full(n);
      for (int i = 0; i < d; ++i) full[i] = mode.base_freqs[a][i];
      full[n - 1] = k;
      IVecN mapped = U.transpose() * full;
      double turns = 0.0;
      for (int i = 0; i < n; ++i) turns += static_cast<double>(full[i]) * t[i];
      for (int i = 0; i < d; ++i) turns -= static_cast<double>(full[i]) * mode.y0_prime[i];
      Complex c = mode.normalization * mode.base_coeffs[a] * unit_phase(turns);
      buckets[freq_key(mapped)] += c;
    }
  }
  mode.combined.reserve(buckets.size());
  for (const auto& [key, coeff] : buckets) {
    ActiveFrequency af;
    af.freq = IVecN(n);
    for (int i = 0; i < n; ++i) af.freq[i] = key[i];
    af.coeff = coeff;
    mode.combined.push_back(af);
  }

  for (int rep = 0; rep < Q.index(); ++rep) {
    mode.deck_lin.push_back(MatN(Q.basis_inv * Q.coset_reps[rep].linear));
    mode.deck_shift.push_back(VecN(Q.basis_inv * Q.coset_reps[rep].shift));
  }
  mode.trunc_radius = mode.bump->truncation_radius(1e-10);
  mode.method = opts.method;

  WindowCertificate cert = spectral_window_check(mode);
  if (!cert.pass) {
    std::string offenders;
    for (const IVecN& v : cert.violations) {
      offenders += " (";
      for (int i = 0; i < v.size(); ++i) offenders += (i ? "," : "") + std::to_string(v[i]);
      offenders += ")";
    }
    fail(ErrorCode::WindowViolated, "active frequencies outside the window:" + offenders);
  }
  mode.window_margin = cert.margin;
  mode.certified = true;
  return mode;
}

FlatMode make_raw_mode(const FlatQuotient& F_aligned, double lambda, double delta,
                       std::vector<ActiveFrequency> combined) {
  FlatMode mode;
  mode.quotient = F_aligned;
  mode.rotation = MatN::Identity(F_aligned.n, F_aligned.n);
  mode.lambda = lambda;
  mode.delta = delta;
  mode.normalization = 1.0;
  mode.y0_prime = VecN::Zero(F_aligned.n - 1);
  mode.combined = std::move(combined);
  mode.certified = false;
  return mode;
}

WindowCertificate spectral_window_check(const FlatMode& mode) {
  WindowCertificate cert;
  cert.margin = std::numeric_limits<double>::infinity();
  const double lo = mode.lambda - mode.delta / 2;
  const double hi = mode.lambda + mode.delta / 2;
  for (const ActiveFrequency& af : mode.combined) {
    VecN xi(af.freq.size());
    for (int i = 0; i < af.freq.size(); ++i) xi[i] = static_cast<double>(af.freq[i]);
    double s = std::sqrt(mode.q_form(xi));
    double margin = std::min(s - lo, hi - s);
    cert.margin = std::min(cert.margin, margin);
    if (margin < 0) cert.violations.push_back(af.freq);
  }
  cert.pass = cert.violations.empty();
  return cert;
}

namespace {

// Poisson-side evaluation of phi_lambda at unit-torus coordinates y.
Complex poisson_term(const FlatMode& m, const VecN& y) {
  const int n = m.quotient.n;
  const int d = n - 1;
  const double ld = m.lambda * m.delta;
  const double sqrt_ld = std::sqrt(ld);
  const double W = m.trunc_radius / sqrt_ld;

  VecN base(d);
  for (int i = 0; i < d; ++i) base[i] = y[i] - m.y0_prime[i];

  KahanSum re, im;
  if (d == 1) {
    int lo = static_cast<int>(std::ceil(base[0] - W));
    int hi = static_cast<int>(std::floor(base[0] + W));
    for (int eta = lo; eta <= hi; ++eta) {
      double w = base[0] - eta;
      double val = m.bump->transform(sqrt_ld * std::abs(w));
      if (val == 0.0) continue;
      Complex ph = unit_phase(m.lambda * m.xi0[0] * w);
      re.add(val * ph.real());
      im.add(val * ph.imag());
    }
  } else {
    IVecN lo(d), hi(d), eta(d);
    for (int i = 0; i < d; ++i) {
      lo[i] = static_cast<int>(std::ceil(base[i] - W));
      hi[i] = static_cast<int>(std::floor(base[i] + W));
    }
    eta = lo;
    for (;;) {
      VecN w(d);
      for (int i = 0; i < d; ++i) w[i] = base[i] - static_cast<double>(eta[i]);
      double r = w.norm();
      if (r <= W) {
        double val = m.bump->transform(sqrt_ld * r);
        if (val != 0.0) {
          double turns = 0.0;
          for (int i = 0; i < d; ++i) turns += m.lambda * m.xi0[i] * w[i];
          Complex ph = unit_phase(turns);
          re.add(val * ph.real());
          im.add(val * ph.imag());
        }
      }
      int i = 0;
      for (; i < d; ++i) {
        if (eta[i] < hi[i]) { ++eta[i]; break; }
        eta[i] = lo[i];
      }
      if (i == d) break;
    }
  }
  double amp = std::pow(ld, 0.25 * d);  // (ld)^{-(n-1)/4} * (ld)^{(n-1)/2}
  Complex phase_n = unit_phase(static_cast<double>(m.k) * y[n - 1]);
  return amp * Complex(re.value(), im.value()) * phase_n;
}

Complex frequency_term(const FlatMode& m, const VecN& y) {
  const int n = m.quotient.n;
  const int d = n - 1;
  KahanSum re, im;
  for (std::size_t a = 0; a < m.base_freqs.size(); ++a) {
    double turns = static_cast<double>(m.k) * y[n - 1];
    for (int i = 0; i < d; ++i)
      turns += static_cast<double>(m.base_freqs[a][i]) * (y[i] - m.y0_prime[i]);
    Complex ph = unit_phase(turns);
    double c = m.normalization * m.base_coeffs[a];
    re.add(c * ph.real());
    im.add(c * ph.imag());
  }
  return {re.value(), im.value()};
}

}  // namespace

Complex FlatMode::eval_torus(const VecN& y, EvalMethod how) const {
  if (how == EvalMethod::poisson) {
    if (!bump) fail(ErrorCode::NotCertified, "raw mode has no profile for Poisson evaluation");
    return poisson_term(*this, y);
  }
  return frequency_term(*this, y);
}

Complex FlatMode::eval(const VecN& x_original, EvalMethod how) const {
  VecN x = rotated ? VecN(rotation * x_original) : x_original;
  if (how == EvalMethod::frequency) {
    VecN z = quotient.basis_inv * x;
    KahanSum re, im;
    for (const ActiveFrequency& af : combined) {
      double turns = 0.0;
      for (int i = 0; i < af.freq.size(); ++i) turns += static_cast<double>(af.freq[i]) * z[i];
      Complex ph = unit_phase(turns);
      re.add(af.coeff.real() * ph.real() - af.coeff.imag() * ph.imag());
      im.add(af.coeff.real() * ph.imag() + af.coeff.imag() * ph.real());
    }
    return {re.value(), im.value()};
  }
  if (!bump) fail(ErrorCode::NotCertified, "raw mode has no profile for Poisson evaluation");
  Complex sum(0.0, 0.0);
  for (std::size_t i = 0; i < deck_lin.size(); ++i)
    sum += poisson_term(*this, VecN(deck_lin[i] * x + deck_shift[i]));
  return sum;
}

Complex evaluate_torus_mode(const FlatMode& mode, const VecN& y, EvalMethod how) {
  if (!mode.certified) fail(ErrorCode::NotCertified, "mode failed or skipped certification");
  return mode.eval_torus(y, how);
}

KnappTube knapp_tube(const FlatQuotient& F, const AxisChoice& axis, const FlatMode& mode) {
  const double ld = mode.lambda * mode.delta;
  const double delta1 = axis.clearance;
  double threshold = std::isinf(delta1) ? 0.0 : (4.0 / delta1) * (4.0 / delta1);
  if (ld < threshold)
    fail(ErrorCode::SeparationNotReached,
         "lambda*delta = " + std::to_string(ld) + " below (4/delta1)^2 = " +
             std::to_string(threshold));

  KnappTube tube;
  tube.center_prime = axis.x0_prime;
  tube.center_n = axis.x0_n;
  tube.radius = axis.c1 / std::sqrt(ld);
  tube.half_length = axis.c2;
  tube.separation_margin = std::isinf(delta1) ? std::numeric_limits<double>::infinity()
                                              : ld - threshold;

  // off-diagonal tail certificate over a tube sample grid
  const int n = mode.quotient.n;
  const int d = n - 1;
  const double sqrt_ld = std::sqrt(ld);
  double worst = 0.0;
  const int radial = 5, axial = 17;
  IVecN idx = IVecN::Zero(d);
  for (;;) {
    VecN offset(d);
    for (int i = 0; i < d; ++i)
      offset[i] = tube.radius * (static_cast<double>(idx[i]) - (radial - 1) / 2.0) /
                  ((radial - 1) / 2.0);
    if (offset.norm() <= tube.radius + 1e-15) {
      for (int a = 0; a < axial; ++a) {
        VecN x(n);
        for (int i = 0; i < d; ++i) x[i] = axis.x0_prime[i] + offset[i];
        x[n - 1] = axis.x0_n + tube.half_length * (2.0 * a / (axial - 1) - 1.0);
        double sum = 0.0;
        for (std::size_t rep = 1; rep < mode.deck_lin.size(); ++rep) {
          VecN y = mode.deck_lin[rep] * x + mode.deck_shift[rep];
          IVecN eta(d);
          for (int i = 0; i < d; ++i) eta[i] = static_cast<int>(std::lround(y[i] - mode.y0_prime[i]));
          // nearest translate and its neighbours
          IVecN off = IVecN::Constant(d, -1);
          for (;;) {
            double r2 = 0.0;
            for (int i = 0; i < d; ++i) {
              double w = y[i] - mode.y0_prime[i] - static_cast<double>(eta[i] + off[i]);
              r2 += w * w;
            }
            if (mode.bump) sum += mode.bump->envelope(sqrt_ld * std::sqrt(r2));
            int i = 0;
            for (; i < d; ++i) {
              if (off[i] < 1) { ++off[i]; break; }
              off[i] = -1;
            }
            if (i == d) break;
          }
        }
        worst = std::max(worst, sum);
      }
    }
    int i = 0;
    for (; i < d; ++i) {
      if (idx[i] < radial - 1) { ++idx[i]; break; }
      idx[i] = 0;
    }
    if (i == d) break;
  }
  tube.offdiag_bound = worst;
  (void)F;
  return tube;
}

DefectReport quasimode_defect(const FlatMode& mode, double lambda) {
  DefectReport rep;
  KahanSum num, den;
  for (const ActiveFrequency& af : mode.combined) {
    VecN xi(af.freq.size());
    for (int i = 0; i < af.freq.size(); ++i) xi[i] = static_cast<double>(af.freq[i]);
    double q = mode.q_form(xi);
    double w = std::norm(af.coeff);
    double dev = q - lambda * lambda;
    num.add(w * dev * dev);
    den.add(w);
  }
  if (den.value() <= 0.0) fail(ErrorCode::InvalidArgument, "mode has no frequency content");
  const double four_pi2 = 4 * std::numbers::pi * std::numbers::pi;
  rep.defect_spectral = std::sqrt(num.value() / den.value());
  rep.threshold_spectral = lambda * mode.delta * (1.0 + mode.delta / (2 * lambda));
  rep.defect_physical = four_pi2 * rep.defect_spectral;
  rep.threshold_physical = four_pi2 * rep.threshold_spectral;
  rep.pass = rep.defect_spectral <= rep.threshold_spectral;
  return rep;
}

}  // namespace knapp
