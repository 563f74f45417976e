#include "knapp/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "knapp/flat_mode.hpp"
#include "knapp/highest_weight.hpp"
#include "knapp/quadrature.hpp"

namespace knapp {

const char* kCsvHeader =
    "manifold,n,k,lambda,delta,norm_p1,norm_p2,norm_p4,tube_R,tube_l2,tube_min_abs,defect,"
    "window_margin,separation_margin,err_estimate,wall_ms";

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string row_cache_key(const ExperimentConfig& cfg, int k, double R) {
  std::string s = cfg.manifold.canonical();
  s += "|k=" + std::to_string(k) + "|ell=" + std::to_string(cfg.k_is_ell ? 1 : 0);
  s += "|R=" + fmt(R);
  s += "|rule=" + std::to_string(static_cast<int>(cfg.delta_rule)) + ":" + fmt(cfg.delta_param);
  s += "|weak=" + std::to_string(cfg.weakened_floor ? 1 : 0);
  s += "|rho=" + fmt(cfg.rho) + "|tol=" + fmt(cfg.quad_tol);
  return s;
}

class RowCache {
 public:
  explicit RowCache(const std::string& dir) : dir_(dir) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }

  bool lookup(const std::string& key, std::string& line) const {
    if (dir_.empty()) return false;
    std::ifstream in(path_for(key));
    if (!in) return false;
    return static_cast<bool>(std::getline(in, line));
  }

  void store(const std::string& key, const std::string& line) const {
    if (dir_.empty()) return;
    std::ofstream out(path_for(key));
    out << line << "\n";
  }

 private:
  std::string path_for(const std::string& key) const {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(key)));
    return dir_ + "/" + buf + ".row";
  }
  std::string dir_;
};

struct FlatContext {
  FlatQuotient original;
  Alignment alignment;
  AxisChoice axis;
  double period = 1.0;
  std::shared_ptr<const BumpProfile> bump;
  double rho_used = 0.0;
};

// samples |psi| over the Knapp box (aligned coordinates)
double knapp_box_min(const FlatMode& mode, const KnappTube& tube) {
  const int n = mode.quotient.n;
  const int d = n - 1;
  MatN back = mode.rotation.transpose();
  double best = std::numeric_limits<double>::infinity();
  const int radial = 9, axial = 33;
  IVecN idx = IVecN::Zero(d);
  for (;;) {
    VecN off(d);
    for (int i = 0; i < d; ++i)
      off[i] = tube.radius * (static_cast<double>(idx[i]) - (radial - 1) / 2.0) /
               ((radial - 1) / 2.0);
    if (off.norm() <= tube.radius + 1e-15) {
      for (int a = 0; a < axial; ++a) {
        VecN x(n);
        for (int i = 0; i < d; ++i) x[i] = tube.center_prime[i] + off[i];
        x[n - 1] = tube.center_n + tube.half_length * (2.0 * a / (axial - 1) - 1.0);
        best = std::min(best, std::abs(mode.eval(VecN(back * x), mode.method)));
      }
    }
    int i = 0;
    for (; i < d; ++i) {
      if (idx[i] < radial - 1) { ++idx[i]; break; }
      idx[i] = 0;
    }
    if (i == d) break;
  }
  return best;
}

SweepRow compute_sphere_row(const ExperimentConfig& cfg, const SphereQuotient& S,
                            const EquatorStabilizer& E, double separation, int k, double R) {
  auto t0 = std::chrono::steady_clock::now();
  SweepRow row;
  row.manifold = cfg.manifold.name();
  row.n = S.n;
  row.k = k;

  SphereMode mode = deck_sum_mode_k(S, E, k);
  row.lambda = mode.lambda;
  row.delta = 0.0;  // exact eigenfunction
  row.defect = 0.0;
  row.window_margin = 0.0;

  AbsEvaluator f = [&](const VecN& x) { return std::abs(mode(x)); };
  IntegrationDomain cell = sphere_domain(S.n, S.order(), mode.lambda);
  MultiNorms norms = lp_norms_124(f, cell, cfg.quad_tol);
  row.norm_p1 = norms.p1.value;
  row.norm_p2 = norms.p2.value;
  row.norm_p4 = norms.p4.value;
  row.err_estimate =
      std::max({norms.p1.error_estimate, norms.p2.error_estimate, norms.p4.error_estimate});

  row.tube_R = R;
  if (std::isfinite(R) && R > 0) {
    double radius = R / std::sqrt(mode.lambda);
    IntegrationDomain tube =
        sphere_tube_domain(S.n, static_cast<std::size_t>(E.m), radius, separation, mode.lambda);
    NormReport t = tube_lp_norm(f, tube, 2.0, cfg.quad_tol);
    row.tube_l2 = t.value;
    row.tube_min_abs = sampled_min_abs(f, tube);
    row.err_estimate = std::max(row.err_estimate, t.error_estimate);
    row.separation_margin = separation / 2 - radius;
  } else {
    row.tube_l2 = row.tube_min_abs = std::numeric_limits<double>::quiet_NaN();
    row.separation_margin = separation / 2;
  }

  row.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

SweepRow compute_flat_row(const ExperimentConfig& cfg, FlatContext& ctx, int k, double R) {
  auto t0 = std::chrono::steady_clock::now();
  SweepRow row;
  row.manifold = cfg.manifold.name();
  row.n = ctx.original.n;
  row.k = k;

  FrequencySelection sel = select_frequency(ctx.alignment.quotient, k);
  double delta = cfg.delta_for(sel.lambda);

  ModeOptions opts;
  opts.weakened_floor = cfg.weakened_floor;

  // build the mode, halving rho (at most 5 times) when the window fails
  FlatMode mode;
  double rho = cfg.rho;
  for (int attempt = 0;; ++attempt) {
    if (!ctx.bump || ctx.rho_used != rho) {
      ctx.bump = make_bump(ctx.original.n - 1, rho);
      ctx.rho_used = rho;
    }
    try {
      mode = spaceform_mode(ctx.original, ctx.bump, k, delta, ctx.axis, opts);
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::WindowViolated || attempt >= 5) throw;
      rho /= 2;
    }
  }

  row.lambda = mode.lambda;
  row.delta = mode.delta;
  row.window_margin = mode.window_margin;
  row.defect = quasimode_defect(mode, mode.lambda).defect_spectral;

  const double ld = mode.lambda * mode.delta;
  KnappTube tube;
  try {
    tube = knapp_tube(ctx.alignment.quotient, ctx.axis, mode);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SeparationNotReached) throw;
    tube.center_prime = ctx.axis.x0_prime;
    tube.center_n = ctx.axis.x0_n;
    tube.radius = ctx.axis.c1 / std::sqrt(ld);
    tube.half_length = ctx.axis.c2;
    tube.separation_margin =
        ld - (4.0 / ctx.axis.clearance) * (4.0 / ctx.axis.clearance);
    tube.offdiag_bound = std::numeric_limits<double>::quiet_NaN();
  }
  row.separation_margin = tube.separation_margin;
  row.offdiag_bound = tube.offdiag_bound;
  row.tube_min_abs = knapp_box_min(mode, tube);

  AbsEvaluator f = [&](const VecN& x) { return std::abs(mode(x)); };
  IntegrationDomain cell = flat_cell_domain(ctx.original, mode.lambda);
  MultiNorms norms = lp_norms_124(f, cell, cfg.quad_tol);
  row.norm_p1 = norms.p1.value;
  row.norm_p2 = norms.p2.value;
  row.norm_p4 = norms.p4.value;
  row.err_estimate =
      std::max({norms.p1.error_estimate, norms.p2.error_estimate, norms.p4.error_estimate});

  row.tube_R = R;
  if (std::isfinite(R) && R > 0) {
    double radius = R / std::sqrt(ld);
    IntegrationDomain tdom =
        flat_tube_domain(ctx.alignment.quotient, MatN(ctx.alignment.rotation.transpose()),
                         ctx.axis, ctx.period, radius, mode.lambda);
    NormReport t = tube_lp_norm(f, tdom, 2.0, cfg.quad_tol);
    row.tube_l2 = t.value;
    row.err_estimate = std::max(row.err_estimate, t.error_estimate);
  } else {
    row.tube_l2 = std::numeric_limits<double>::quiet_NaN();
  }

  row.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

std::string SweepRow::csv_line() const {
  std::string s = manifold;
  s += "," + std::to_string(n) + "," + std::to_string(k);
  for (double v : {lambda, delta, norm_p1, norm_p2, norm_p4, tube_R, tube_l2, tube_min_abs,
                   defect, window_margin, separation_margin, err_estimate, wall_ms})
    s += "," + fmt(v);
  return s;
}

SweepRow SweepRow::from_csv_line(const std::string& line) {
  SweepRow row;
  std::istringstream in(line);
  std::string tok;
  auto next = [&]() {
    if (!std::getline(in, tok, ',')) fail(ErrorCode::IoFailure, "short CSV row");
    return tok;
  };
  row.manifold = next();
  row.n = std::stoi(next());
  row.k = std::stoi(next());
  double* slots[] = {&row.lambda, &row.delta, &row.norm_p1, &row.norm_p2, &row.norm_p4,
                     &row.tube_R, &row.tube_l2, &row.tube_min_abs, &row.defect,
                     &row.window_margin, &row.separation_margin, &row.err_estimate, &row.wall_ms};
  for (double* slot : slots) *slot = std::strtod(next().c_str(), nullptr);
  return row;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  SweepResult result;
  RowCache cache(cfg.cache_dir);

  std::filesystem::path csv(cfg.csv_path);
  if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
  std::ofstream out(cfg.csv_path);
  if (!out) fail(ErrorCode::IoFailure, "cannot write " + cfg.csv_path);
  out << kCsvHeader << "\n";

  auto manifold = resolve_manifold(cfg.manifold);

  // shared per-config state
  const SphereQuotient* S = std::get_if<SphereQuotient>(&manifold);
  EquatorStabilizer E;
  double separation = std::numeric_limits<double>::infinity();
  FlatContext ctx;
  if (S) {
    E = equator_stabilizer(*S);
    separation = equator_separation(*S, E);
  } else {
    ctx.original = std::get<FlatQuotient>(manifold);
    ctx.alignment = align_lattice(ctx.original);
    ctx.axis = choose_axis_line(ctx.alignment.quotient);
    ctx.period = geodesic_period(ctx.alignment.quotient, ctx.axis);
  }

  std::vector<double> radii = cfg.tube_R;
  if (radii.empty()) radii.push_back(std::numeric_limits<double>::quiet_NaN());

  for (int kv : cfg.k_values) {
    int k = kv;
    if (S && cfg.k_is_ell) k = kv * std::max(1, E.m);
    for (double R : radii) {
      std::string key = row_cache_key(cfg, k, R);
      std::string cached_line;
      if (cache.lookup(key, cached_line)) {
        SweepRow row = SweepRow::from_csv_line(cached_line);
        row.cache_hit = true;
        out << cached_line << "\n";
        result.rows.push_back(row);
        ++result.cached;
        continue;
      }
      try {
        SweepRow row = S ? compute_sphere_row(cfg, *S, E, separation, k, R)
                         : compute_flat_row(cfg, ctx, k, R);
        std::string line = row.csv_line();
        cache.store(key, line);
        out << line << "\n";
        result.rows.push_back(row);
        ++result.computed;
      } catch (const Error& e) {
        result.failures.push_back({k, R, error_code_name(e.code())});
        out << "# error k=" << k << " R=" << fmt(R) << " tag=" << error_code_name(e.code())
            << "\n";
      }
    }
  }

  // certificate gate
  for (const SweepRow& row : result.rows) {
    for (const std::string& cert : cfg.required_certs) {
      bool ok = true;
      if (cert == "window") ok = row.window_margin >= 0;
      else if (cert == "defect") {
        double threshold = row.delta > 0
                               ? row.lambda * row.delta * (1 + row.delta / (2 * row.lambda))
                               : 1e-9;
        ok = row.defect <= threshold;
      } else if (cert == "separation") ok = row.separation_margin >= 0;
      else if (cert == "offdiag")
        ok = !std::isfinite(row.offdiag_bound) || row.offdiag_bound < 1e-6;
      if (!ok) {
        result.certificates_ok = false;
        result.certificate_breaches.push_back("k=" + std::to_string(row.k) + " " + cert);
      }
    }
  }
  if (!result.failures.empty()) result.certificates_ok = false;
  return result;
}

}  // namespace knapp
