#include "knapp/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "knapp/parallel.hpp"
#include "knapp/summation.hpp"

namespace knapp {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr std::size_t kTileSize = 16384;

int wavelength_nodes(double lambda, double extent) {
  // grid spacing floor h <= (2 pi / lambda) / 10
  if (lambda <= 0.0) return 0;
  return static_cast<int>(std::ceil(extent * 10.0 * lambda / kTwoPi));
}

struct GridDim {
  int count;
  double lo;
  double step;
};

struct Grid {
  std::vector<GridDim> dims;
  double weight = 1.0;       // per-node measure factor
  double final_scale = 1.0;  // covering factor (1/N or 1/|Gamma| or 1/m)
  std::uint64_t total = 1;
};

Grid make_grid(const IntegrationDomain& D, int refine) {
  Grid g;
  auto add = [&](int count, double lo, double hi) {
    count *= refine;
    g.dims.push_back({count, lo, (hi - lo) / count});
    g.weight *= (hi - lo) / count;
    g.total *= static_cast<std::uint64_t>(count);
  };
  switch (D.kind) {
    case DomainKind::flat_cell:
      for (int i = 0; i < D.n; ++i) add(D.base_res[i], 0.0, 1.0);
      g.weight *= std::abs(D.basis.determinant());
      g.final_scale = 1.0 / D.quotient_index;
      break;
    case DomainKind::sphere:
      add(D.base_res[0], 0.0, kTwoPi);
      for (int i = 1; i < D.n; ++i) add(D.base_res[i], -1.0, 1.0);
      g.final_scale = 1.0 / static_cast<double>(D.divisor);
      break;
    case DomainKind::sphere_tube: {
      double sr = std::sin(D.tube_radius);
      add(D.base_res[0], 0.0, kTwoPi);
      for (int i = 1; i < D.n; ++i) add(D.base_res[i], -sr, sr);
      g.final_scale = 1.0 / static_cast<double>(D.divisor);
      break;
    }
    case DomainKind::flat_tube:
      add(D.base_res[0], D.axis_start, D.axis_start + D.axis_length);
      for (int i = 1; i < D.n; ++i) add(D.base_res[i], -D.tube_radius, D.tube_radius);
      break;
  }
  return g;
}

struct TileResult {
  KahanSum sums[3];
  double min_abs = std::numeric_limits<double>::infinity();
};

// Integrates |f|^p for each requested power over the grid; deterministic for
// any worker count (fixed tiles, in-order combination).
struct PassResult {
  double integrals[3] = {0, 0, 0};
  double min_abs = std::numeric_limits<double>::infinity();
  std::uint64_t nodes = 0;
};

PassResult run_pass(const IntegrationDomain& D, const Grid& g, const AbsEvaluator& f,
                    const std::vector<double>& powers) {
  const int dims = static_cast<int>(g.dims.size());
  const std::size_t tiles = static_cast<std::size_t>((g.total + kTileSize - 1) / kTileSize);
  std::vector<TileResult> partial(tiles);

  const bool tube_ball = (D.kind == DomainKind::sphere_tube || D.kind == DomainKind::flat_tube);
  const double ball_radius = D.kind == DomainKind::sphere_tube ? std::sin(D.tube_radius)
                                                               : D.tube_radius;

  parallel_tiles(tiles, [&](std::size_t tile) {
    TileResult& out = partial[tile];
    std::uint64_t begin = tile * kTileSize;
    std::uint64_t end = std::min<std::uint64_t>(begin + kTileSize, g.total);
    VecN param(dims);
    VecN x;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      std::uint64_t rest = idx;
      for (int j = dims - 1; j >= 0; --j) {
        auto c = static_cast<std::uint64_t>(g.dims[j].count);
        auto ij = static_cast<double>(rest % c);
        rest /= c;
        param[j] = g.dims[j].lo + (ij + 0.5) * g.dims[j].step;
      }

      // chart -> ambient point, with ball indicators where needed
      bool inside = true;
      switch (D.kind) {
        case DomainKind::flat_cell:
          x = D.basis * param;
          break;
        case DomainKind::sphere:
        case DomainKind::sphere_tube: {
          double w2 = 0.0;
          for (int j = 1; j < dims; ++j) w2 += param[j] * param[j];
          double limit = D.kind == DomainKind::sphere ? 1.0 : ball_radius * ball_radius;
          if (w2 >= limit) { inside = false; break; }
          x.resize(D.n + 1);
          double r = std::sqrt(1.0 - w2);
          x[0] = r * std::cos(param[0]);
          x[1] = r * std::sin(param[0]);
          for (int j = 1; j < dims; ++j) x[j + 1] = param[j];
          break;
        }
        case DomainKind::flat_tube: {
          if (dims > 2) {
            double u2 = 0.0;
            for (int j = 1; j < dims; ++j) u2 += param[j] * param[j];
            if (u2 > ball_radius * ball_radius) { inside = false; break; }
          }
          VecN aligned(D.n);
          for (int j = 1; j < dims; ++j) aligned[j - 1] = D.axis_prime[j - 1] + param[j];
          aligned[D.n - 1] = param[0];
          x = D.to_original * aligned;
          break;
        }
      }
      if (!inside) continue;

      double a = f(x);
      out.min_abs = std::min(out.min_abs, a);
      for (std::size_t pi = 0; pi < powers.size(); ++pi) {
        double p = powers[pi];
        double v;
        if (p == 1.0) v = a;
        else if (p == 2.0) v = a * a;
        else if (p == 4.0) { double a2 = a * a; v = a2 * a2; }
        else v = std::pow(a, p);
        out.sums[pi].add(v);
      }
    }
  });

  PassResult res;
  res.nodes = g.total;
  KahanSum totals[3];
  for (const TileResult& t : partial) {
    res.min_abs = std::min(res.min_abs, t.min_abs);
    for (std::size_t pi = 0; pi < powers.size(); ++pi) totals[pi].add(t.sums[pi].value());
  }
  for (std::size_t pi = 0; pi < powers.size(); ++pi)
    res.integrals[pi] = totals[pi].value() * g.weight * g.final_scale;
  return res;
}

void check_resolution(const IntegrationDomain& D) {
  if (D.base_res.empty() || static_cast<int>(D.base_res.size()) != D.n)
    fail(ErrorCode::InvalidArgument, "domain resolution not initialized");
  if (D.lambda_hint <= 0.0) return;
  IntegrationDomain ref = D;
  switch (D.kind) {
    case DomainKind::flat_cell: {
      double bnorm = Eigen::JacobiSVD<Eigen::MatrixXd>(Eigen::MatrixXd(D.basis))
                         .singularValues()(0);
      int need = wavelength_nodes(D.lambda_hint, bnorm);
      for (int i = 0; i < D.n; ++i)
        if (D.base_res[i] < need)
          fail(ErrorCode::ResolutionTooCoarse, "fewer than 10 nodes per wavelength");
      break;
    }
    case DomainKind::sphere:
    case DomainKind::sphere_tube: {
      if (D.base_res[0] < wavelength_nodes(D.lambda_hint, kTwoPi))
        fail(ErrorCode::ResolutionTooCoarse, "fewer than 10 nodes per wavelength along the circle");
      break;
    }
    case DomainKind::flat_tube:
      if (D.base_res[0] < wavelength_nodes(D.lambda_hint, D.axis_length))
        fail(ErrorCode::ResolutionTooCoarse, "fewer than 10 nodes per wavelength along the axis");
      break;
  }
  (void)ref;
}

double norm_from_integral(double integral, double p) {
  return std::pow(std::max(integral, 0.0), 1.0 / p);
}

}  // namespace

IntegrationDomain sphere_domain(int n, std::size_t group_order, double lambda_hint) {
  if (n < 2 || n > 7) fail(ErrorCode::InvalidArgument, "sphere dimension out of range");
  IntegrationDomain D;
  D.kind = DomainKind::sphere;
  D.n = n;
  D.divisor = group_order;
  D.lambda_hint = lambda_hint;
  D.base_res.assign(n, 0);
  D.base_res[0] = std::max(16, wavelength_nodes(lambda_hint, kTwoPi));
  for (int i = 1; i < n; ++i) D.base_res[i] = std::max(16, wavelength_nodes(lambda_hint, 2.0));
  return D;
}

IntegrationDomain flat_cell_domain(const FlatQuotient& F, double lambda_hint) {
  IntegrationDomain D;
  D.kind = DomainKind::flat_cell;
  D.n = F.n;
  D.basis = F.basis;
  D.quotient_index = F.index();
  D.lambda_hint = lambda_hint;
  double bnorm =
      Eigen::JacobiSVD<Eigen::MatrixXd>(Eigen::MatrixXd(F.basis)).singularValues()(0);
  int m = std::max(8, wavelength_nodes(lambda_hint, bnorm));
  D.base_res.assign(F.n, m);
  return D;
}

IntegrationDomain sphere_tube_domain(int n, std::size_t stabilizer_order, double radius,
                                     double separation, double lambda_hint) {
  if (radius <= 0.0) fail(ErrorCode::InvalidArgument, "tube radius must be positive");
  double limit = std::min(separation / 2, std::numbers::pi / 4);
  if (radius >= limit)
    fail(ErrorCode::TubeNotEmbedded, "tube radius " + std::to_string(radius) +
                                         " reaches the certified separation " +
                                         std::to_string(limit));
  IntegrationDomain D;
  D.kind = DomainKind::sphere_tube;
  D.n = n;
  D.divisor = stabilizer_order;
  D.tube_radius = radius;
  D.lambda_hint = lambda_hint;
  D.base_res.assign(n, 0);
  D.base_res[0] = std::max(16, wavelength_nodes(lambda_hint, kTwoPi));
  for (int i = 1; i < n; ++i)
    D.base_res[i] = std::max(64, wavelength_nodes(lambda_hint, 2 * std::sin(radius)));
  return D;
}

IntegrationDomain flat_tube_domain(const FlatQuotient& F_aligned, const MatN& to_original,
                                   const AxisChoice& axis, double period, double radius,
                                   double lambda_hint) {
  if (!F_aligned.aligned())
    fail(ErrorCode::InvalidArgument, "flat tube requires an aligned quotient");
  if (radius <= 0.0 || period <= 0.0)
    fail(ErrorCode::InvalidArgument, "tube radius and period must be positive");
  const int n = F_aligned.n;

  if (radius >= axis.clearance / 2)
    fail(ErrorCode::TubeNotEmbedded, "tube radius reaches half the axis clearance");

  // lattice translates of the axis line: perpendicular offsets pi(B z)
  double lattice_offset = std::numeric_limits<double>::infinity();
  {
    const int Z = 3;
    IVecN z = IVecN::Constant(n, -Z);
    for (;;) {
      VecN shift = VecN::Zero(n);
      bool zero = true;
      for (int i = 0; i < n; ++i) {
        shift += F_aligned.basis.col(i) * static_cast<double>(z[i]);
        if (z[i] != 0) zero = false;
      }
      if (!zero) {
        double off2 = 0.0;
        for (int i = 0; i + 1 < n; ++i) off2 += shift[i] * shift[i];
        if (off2 > 1e-24) lattice_offset = std::min(lattice_offset, std::sqrt(off2));
      }
      int i = 0;
      for (; i < n; ++i) {
        if (z[i] < Z) { ++z[i]; break; }
        z[i] = -Z;
      }
      if (i == n) break;
    }
  }
  if (radius >= lattice_offset / 2)
    fail(ErrorCode::TubeNotEmbedded, "tube radius reaches half the lattice offset");

  VecN en = VecN::Unit(n, n - 1);
  for (int i = 1; i < F_aligned.index(); ++i) {
    Line li = coset_line(F_aligned.coset_reps[i], axis.x0_prime);
    if (std::abs(std::abs(li.dir.dot(en)) - 1.0) > 1e-9)
      fail(ErrorCode::TubeNotEmbedded, "coset line skew to the axis; covering multiplicity unclear");
  }

  IntegrationDomain D;
  D.kind = DomainKind::flat_tube;
  D.n = n;
  D.basis = F_aligned.basis;
  D.to_original = to_original;
  D.axis_prime = axis.x0_prime;
  D.axis_start = axis.x0_n - period / 2;
  D.axis_length = period;
  D.tube_radius = radius;
  D.lambda_hint = lambda_hint;
  D.base_res.assign(n, 0);
  D.base_res[0] = std::max(32, wavelength_nodes(lambda_hint, period));
  for (int i = 1; i < n; ++i)
    D.base_res[i] = std::max(64, wavelength_nodes(lambda_hint, 2 * radius));
  return D;
}

namespace {

MultiNorms norms_impl(const AbsEvaluator& f, const IntegrationDomain& D,
                      const std::vector<double>& powers, double tol) {
  check_resolution(D);
  auto t0 = std::chrono::steady_clock::now();

  Grid g1 = make_grid(D, 1);
  Grid g2 = make_grid(D, 2);
  PassResult r1 = run_pass(D, g1, f, powers);
  PassResult r2 = run_pass(D, g2, f, powers);
  std::uint64_t nodes = r1.nodes + r2.nodes;

  auto finish = [&](const PassResult& lo, const PassResult& hi) {
    MultiNorms out;
    NormReport* reports[3] = {&out.p1, &out.p2, &out.p4};
    double wall =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    for (std::size_t i = 0; i < powers.size(); ++i) {
      NormReport& rep = *reports[i];
      rep.p = powers[i];
      double vlo = norm_from_integral(lo.integrals[i], powers[i]);
      double vhi = norm_from_integral(hi.integrals[i], powers[i]);
      rep.value = vhi;
      rep.error_estimate = std::abs(vhi - vlo) / 3.0;  // order-2 Richardson difference
      rep.nodes = nodes;
      rep.wall_ms = wall;
      rep.converged = rep.error_estimate <= tol * std::max(std::abs(vhi), 1e-6);
    }
    return out;
  };

  MultiNorms out = finish(r1, r2);
  const NormReport* reports[3] = {&out.p1, &out.p2, &out.p4};
  bool ok = true;
  for (std::size_t i = 0; i < powers.size(); ++i) ok = ok && reports[i]->converged;
  if (!ok) {
    Grid g4 = make_grid(D, 4);
    PassResult r4 = run_pass(D, g4, f, powers);
    nodes += r4.nodes;
    out = finish(r2, r4);
    const NormReport* reports4[3] = {&out.p1, &out.p2, &out.p4};
    for (std::size_t i = 0; i < powers.size(); ++i)
      if (!reports4[i]->converged)
        fail(ErrorCode::NotConverged,
             "p = " + std::to_string(powers[i]) +
                 " error estimate " + std::to_string(reports4[i]->error_estimate) +
                 " above tolerance after one refinement");
  }
  return out;
}

}  // namespace

NormReport lp_norm(const AbsEvaluator& f, const IntegrationDomain& D, double p, double tol) {
  if (p < 1.0) fail(ErrorCode::InvalidArgument, "p >= 1 required");
  MultiNorms m = norms_impl(f, D, {p}, tol);
  return m.p1;
}

MultiNorms lp_norms_124(const AbsEvaluator& f, const IntegrationDomain& D, double tol) {
  return norms_impl(f, D, {1.0, 2.0, 4.0}, tol);
}

NormReport tube_lp_norm(const AbsEvaluator& f, const IntegrationDomain& D, double p, double tol) {
  if (D.kind != DomainKind::sphere_tube && D.kind != DomainKind::flat_tube)
    fail(ErrorCode::InvalidArgument, "tube_lp_norm requires a tube domain");
  return lp_norm(f, D, p, tol);
}

double sampled_min_abs(const AbsEvaluator& f, const IntegrationDomain& D) {
  if (D.kind != DomainKind::sphere_tube && D.kind != DomainKind::flat_tube)
    fail(ErrorCode::InvalidArgument, "sampled_min_abs requires a tube domain");
  Grid g = make_grid(D, 1);
  PassResult r = run_pass(D, g, f, {});
  return r.min_abs;
}

double l2_exact_parseval(const FlatMode& mode) {
  KahanSum sum;
  for (const ActiveFrequency& af : mode.combined) sum.add(std::norm(af.coeff));
  return sum.value() * mode.quotient.det() / mode.quotient.index();
}

}  // namespace knapp
