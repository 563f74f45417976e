#include "knapp/bump.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "knapp/error.hpp"

namespace knapp {

double bump_chi(double u) {
  double u2 = u * u;
  if (u2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u2));
}

namespace {

// Gauss-Legendre nodes/weights on [0,1] by Newton iteration on P_n.
void gauss_legendre_01(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(m);
  weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = m * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= m; ++j) {
      double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double dp = m * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = 0.5 * (x + 1.0);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // includes the [0,1] scaling
  }
}

struct GlRules {
  // tiers sized for the oscillation count of cos(2 pi u t) on [0,1]
  std::vector<std::vector<double>> nodes, weights;
  std::vector<double> limits;  // max t per tier

  GlRules() {
    for (int m : {256, 512, 1024, 2048, 4096}) {
      nodes.emplace_back();
      weights.emplace_back();
      gauss_legendre_01(m, nodes.back(), weights.back());
      limits.push_back(m / 20.0);  // >= 20 nodes per period
    }
  }

  std::size_t tier(double t) const {
    for (std::size_t i = 0; i + 1 < limits.size(); ++i)
      if (t <= limits[i]) return i;
    return limits.size() - 1;
  }
};

const GlRules& gl_rules() {
  static GlRules rules;
  return rules;
}

// One-dimensional projection of the radial profile chi on R^d
// (projection-slice: the d-dim radial transform is the cosine transform of
// this even function):
//   d = 1 : chi(u)
//   d >= 2: surface(S^{d-2}) int_0^{sqrt(1-u^2)} chi(sqrt(u^2 + p^2)) p^{d-2} dp
double chi_projection(int d, double u, const std::vector<double>& inner_nodes,
                      const std::vector<double>& inner_weights) {
  if (d == 1) return bump_chi(u);
  double top = std::sqrt(std::max(0.0, 1.0 - u * u));
  if (top == 0.0) return 0.0;
  double surface =
      d == 2 ? 2.0
             : 2.0 * std::pow(std::numbers::pi, 0.5 * (d - 1)) / std::tgamma(0.5 * (d - 1));
  double sum = 0.0;
  for (std::size_t i = 0; i < inner_nodes.size(); ++i) {
    double p = top * inner_nodes[i];
    sum += inner_weights[i] * bump_chi(std::hypot(u, p)) * std::pow(p, d - 2);
  }
  return surface * top * sum;
}

// Per-tier samples of the projected profile at the outer GL nodes.
struct ProjectedProfile {
  std::vector<std::vector<double>> values;  // one vector per tier

  explicit ProjectedProfile(int d) {
    const GlRules& gl = gl_rules();
    std::vector<double> inner_nodes, inner_weights;
    gauss_legendre_01(256, inner_nodes, inner_weights);
    values.resize(gl.nodes.size());
    for (std::size_t tier = 0; tier < gl.nodes.size(); ++tier) {
      values[tier].resize(gl.nodes[tier].size());
      for (std::size_t i = 0; i < gl.nodes[tier].size(); ++i)
        values[tier][i] = chi_projection(d, gl.nodes[tier][i], inner_nodes, inner_weights);
    }
  }

  // chihat_d(t) = 2 int_0^1 proj(u) cos(2 pi u t) du
  double transform(double t, std::size_t tier) const {
    const GlRules& gl = gl_rules();
    const auto& nodes = gl.nodes[tier];
    const auto& weights = gl.weights[tier];
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      sum += weights[i] * values[tier][i] * std::cos(2 * std::numbers::pi * nodes[i] * t);
    return 2.0 * sum;
  }

  double transform(double t) const { return transform(t, gl_rules().tier(t)); }
};

}  // namespace

double BumpProfile::radial(double r) const {
  return amplitude * bump_chi(r / support);
}

double BumpProfile::transform(double r) const {
  r = std::abs(r);
  if (r >= table_max) return 0.0;
  double u = r / table_step;
  auto idx = static_cast<std::ptrdiff_t>(u);
  const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(table.size()) - 1;
  // 4-point Lagrange stencil centered at the containing cell
  std::ptrdiff_t i0 = std::clamp<std::ptrdiff_t>(idx - 1, 0, last - 3);
  double s = u - static_cast<double>(i0);
  double c0 = -(s - 1) * (s - 2) * (s - 3) / 6.0;
  double c1 = s * (s - 2) * (s - 3) / 2.0;
  double c2 = -s * (s - 1) * (s - 3) / 2.0;
  double c3 = s * (s - 1) * (s - 2) / 6.0;
  return c0 * table[i0] + c1 * table[i0 + 1] + c2 * table[i0 + 2] + c3 * table[i0 + 3];
}

double BumpProfile::envelope(double r) const {
  double b = 1.0 + std::abs(r);
  double b2 = b * b;
  double b4 = b2 * b2;
  return envelope_m8 / (b4 * b4);
}

double BumpProfile::truncation_radius(double budget, double safety) const {
  double h = std::pow(envelope_m8 * safety / budget, 0.125) - 1.0;
  return std::clamp(h, 1.0, table_max);
}

namespace {

std::shared_ptr<const BumpProfile> build_bump(int n_minus_1, double support_rho) {
  auto bump = std::make_shared<BumpProfile>();
  BumpProfile& B = *bump;
  B.dim = n_minus_1;
  B.support = support_rho;
  B.table_step = 1.0 / 512.0;
  B.table_max = 288.0;  // must cover the certified truncation radius

  ProjectedProfile proj(B.dim);

  // certify over the unit ball before paying for the tail table
  const auto unit_entries = static_cast<std::size_t>(1.0 / B.table_step) + 1;
  std::vector<double> unit(unit_entries);
  for (std::size_t i = 0; i < unit_entries; ++i)
    unit[i] = proj.transform(support_rho * (static_cast<double>(i) * B.table_step));
  double raw_min = unit[0];
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < unit_entries; ++i)
    if (unit[i] < raw_min) { raw_min = unit[i]; argmin = i; }
  if (raw_min <= 0.0)
    fail(ErrorCode::CertificationFailed,
         "transform changes sign inside the unit ball at rho = " + std::to_string(support_rho));

  // quadrature error bound: tier-0 against the next tier, plus grid curvature
  double quad_err = 0.0;
  for (std::size_t i = 0; i < unit_entries; i += 64) {
    double t = support_rho * (static_cast<double>(i) * B.table_step);
    quad_err = std::max(quad_err, std::abs(proj.transform(t, 0) - proj.transform(t, 1)));
  }
  double second_diff = 0.0;
  for (std::size_t i = 1; i + 1 < unit_entries; ++i)
    second_diff = std::max(second_diff, std::abs(unit[i + 1] - 2 * unit[i] + unit[i - 1]));
  quad_err += second_diff / 8.0;

  const double scale_d = std::pow(support_rho, B.dim);
  B.amplitude = 1.01 / (scale_d * raw_min);
  B.lower_bound = 1.01;
  B.cert_error = B.amplitude * scale_d * quad_err;
  if (B.cert_error >= B.lower_bound - 1.0)
    fail(ErrorCode::CertificationFailed, "quadrature error exceeds the certification margin");

  const auto count = static_cast<std::size_t>(B.table_max / B.table_step) + 4;
  B.table.resize(count);
  for (std::size_t i = 0; i < unit_entries; ++i) B.table[i] = B.amplitude * scale_d * unit[i];
  for (std::size_t i = unit_entries; i < count; ++i)
    B.table[i] = B.amplitude * scale_d *
                 proj.transform(support_rho * (static_cast<double>(i) * B.table_step));
  (void)argmin;

  for (std::size_t i = 0; i < count; ++i) {
    double r = static_cast<double>(i) * B.table_step;
    double b = 1.0 + r;
    double b2 = b * b;
    double b4 = b2 * b2;
    B.envelope_m8 = std::max(B.envelope_m8, std::abs(B.table[i]) * b4 * b4);
  }
  return bump;
}

}  // namespace

std::shared_ptr<const BumpProfile> make_bump(int n_minus_1, double support_rho) {
  if (n_minus_1 < 1) fail(ErrorCode::InvalidArgument, "bump dimension must be >= 1");
  if (!(support_rho > 0.0 && support_rho <= 1.0))
    fail(ErrorCode::InvalidArgument, "support rho must be in (0, 1]");

  // profiles are immutable; identical parameters share one table
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const BumpProfile>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(n_minus_1, support_rho);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto bump = build_bump(n_minus_1, support_rho);
  cache[key] = bump;
  return bump;
}

}  // namespace knapp
