#include "knapp/flat_quotient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "knapp/halton.hpp"

namespace knapp {

namespace {

constexpr std::size_t kMaxPointGroup = 10000;
constexpr double kLatticeResidual = 1e-8;

std::vector<int> int_key(const IMatN& U) {
  std::vector<int> key(U.size());
  for (int i = 0; i < U.size(); ++i) key[i] = U.data()[i];
  return key;
}

IMatN round_to_int(const MatN& M, double residual_tol, const char* what) {
  IMatN U(M.rows(), M.cols());
  for (int r = 0; r < M.rows(); ++r)
    for (int c = 0; c < M.cols(); ++c) {
      double v = M(r, c);
      long iv = std::lround(v);
      if (std::abs(v - static_cast<double>(iv)) > residual_tol)
        fail(ErrorCode::LatticeNotPreserved, what);
      U(r, c) = static_cast<int>(iv);
    }
  return U;
}

// shift normalized so B^{-1} j lies in [0,1)^n
VecN normalize_shift(const MatN& B, const MatN& Binv, const VecN& j) {
  VecN y = Binv * j;
  for (int i = 0; i < y.size(); ++i) y[i] -= std::floor(y[i]);
  // snap coordinates that normalized to just below 1
  for (int i = 0; i < y.size(); ++i)
    if (y[i] > 1.0 - 1e-12) y[i] = 0.0;
  return B * y;
}

void check_rep_free(const FlatQuotient& F, const RigidMotion& rep, int rep_index) {
  const int n = F.n;
  MatN P = MatN::Zero(n, n);  // projector onto ker(I - m): average over the cyclic group of m
  MatN power = MatN::Identity(n, n);
  int order = 0;
  for (int r = 0; r < static_cast<int>(kMaxPointGroup) + 1; ++r) {
    P += power;
    ++order;
    power = MatN(rep.linear * power);
    if (max_abs(power - MatN::Identity(n, n)) <= 10 * F.tol) break;
    if (r == static_cast<int>(kMaxPointGroup))
      fail(ErrorCode::ClosureNotReached, "point-group element order exceeds cap");
  }
  P /= static_cast<double>(order);
  // lambda * rep has a fixed point iff P(j + B z) = 0 for some z; the
  // projected lattice is discrete, so a small box suffices.
  const int Z = 4;
  IVecN z = IVecN::Constant(n, -Z);
  for (;;) {
    VecN shift = rep.shift;
    for (int i = 0; i < n; ++i) shift += F.basis.col(i) * static_cast<double>(z[i]);
    if ((P * shift).norm() <= 10 * F.tol)
      fail(ErrorCode::NotFreeAction,
           "coset representative " + std::to_string(rep_index) +
               " composed with a lattice translation fixes a point");
    int i = 0;
    for (; i < n; ++i) {
      if (z[i] < Z) { ++z[i]; break; }
      z[i] = -Z;
    }
    if (i == n) break;
  }
}

}  // namespace

bool FlatQuotient::aligned() const {
  VecN bn = basis.col(n - 1);
  for (int i = 0; i + 1 < n; ++i)
    if (std::abs(bn[i]) > 10 * tol) return false;
  return bn[n - 1] > 0;
}

FlatQuotient make_flat_quotient(const MatN& B, const std::vector<RigidMotion>& affine_gens,
                                double tol) {
  const int n = static_cast<int>(B.rows());
  if (n < 2 || B.cols() != n) fail(ErrorCode::InvalidArgument, "basis must be square, n >= 2");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(B)};
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(n - 1);
  if (!(smin > 1e-12 * smax)) fail(ErrorCode::SingularBasis, "lattice basis is singular");

  FlatQuotient F;
  F.n = n;
  F.basis = B;
  F.basis_inv = B.inverse();
  F.cond = smax / smin;
  F.tol = tol;

  std::vector<RigidMotion> gens;
  for (std::size_t i = 0; i < affine_gens.size(); ++i) {
    const RigidMotion& g = affine_gens[i];
    if (g.linear.rows() != n || g.linear.cols() != n || g.shift.size() != n)
      fail(ErrorCode::InvalidArgument, "generator has wrong dimensions");
    if (!is_orthogonal(g.linear, tol))
      fail(ErrorCode::NotOrthogonal, "generator " + std::to_string(i) + " is not a rigid motion");
    round_to_int(MatN(F.basis_inv * g.linear * F.basis), kLatticeResidual,
                 "generator linear part does not preserve the lattice");
    gens.push_back(g);
    gens.push_back(g.inverse());
  }

  // closure over point-group elements; one normalized representative each
  std::map<std::vector<int>, int> seen;
  std::vector<RigidMotion> reps;
  std::vector<IMatN> units;

  RigidMotion id{MatN::Identity(n, n), VecN::Zero(n)};
  reps.push_back(id);
  units.push_back(IMatN(IMatN::Identity(n, n)));
  seen[int_key(units[0])] = 0;

  auto verify_or_insert = [&](const RigidMotion& cand) {
    IMatN U = round_to_int(MatN(F.basis_inv * cand.linear * F.basis), kLatticeResidual,
                           "group element does not preserve the lattice");
    auto it = seen.find(int_key(U));
    if (it == seen.end()) {
      if (reps.size() >= kMaxPointGroup)
        fail(ErrorCode::ClosureNotReached, "point group exceeded order cap");
      RigidMotion rep{cand.linear, normalize_shift(F.basis, F.basis_inv, cand.shift)};
      seen[int_key(U)] = static_cast<int>(reps.size());
      reps.push_back(rep);
      units.push_back(U);
      return true;
    }
    // same point-group element: shifts must agree modulo the lattice
    VecN diff = F.basis_inv * (cand.shift - reps[it->second].shift);
    for (int i = 0; i < n; ++i)
      if (std::abs(diff[i] - std::round(diff[i])) > kLatticeResidual)
        fail(ErrorCode::LatticeNotPreserved,
             "declared basis does not span the translation subgroup");
    return false;
  };

  for (std::size_t head = 0; head < reps.size(); ++head) {
    RigidMotion current = reps[head];
    for (const RigidMotion& g : gens) {
      verify_or_insert(g.after(current));
      verify_or_insert(current.after(g));
    }
  }

  F.coset_reps = std::move(reps);
  F.point_group_int = std::move(units);

  for (std::size_t i = 1; i < F.coset_reps.size(); ++i)
    check_rep_free(F, F.coset_reps[i], static_cast<int>(i));

  return F;
}

Alignment align_lattice(const FlatQuotient& F) {
  const int n = F.n;
  VecN bn = F.basis.col(n - 1);
  double s = bn.norm();
  MatN Q = MatN::Identity(n, n);

  if (!F.aligned()) {
    VecN target = VecN::Zero(n);
    target[n - 1] = s;
    VecN v = bn - target;
    if (v.norm() > 1e-14 * s) {
      MatN H = MatN::Identity(n, n) - 2.0 / v.squaredNorm() * (v * v.transpose());
      H.row(0) *= -1.0;  // restore det +1 (Householder reflects)
      Q = H;
    }
  }

  Alignment out;
  out.rotation = Q;
  if (max_abs(Q - MatN::Identity(n, n)) == 0.0) {
    out.quotient = F;
    return out;
  }

  FlatQuotient G = F;
  G.basis = Q * F.basis;
  G.basis_inv = F.basis_inv * Q.transpose();
  for (auto& rep : G.coset_reps) {
    rep.linear = MatN(Q * rep.linear * Q.transpose());
    rep.shift = VecN(Q * rep.shift);
  }
  // zero out rounding fuzz in the aligned column
  for (int i = 0; i + 1 < n; ++i)
    if (std::abs(G.basis(i, n - 1)) < 1e-13 * s) G.basis(i, n - 1) = 0.0;
  out.quotient = std::move(G);
  return out;
}

Line coset_line(const RigidMotion& alpha, const VecN& x0_prime) {
  const int n = alpha.linear.rows();
  VecN p0 = VecN::Zero(n);
  for (int i = 0; i + 1 < n; ++i) p0[i] = x0_prime[i];
  Line line;
  line.point = alpha.linear.transpose() * (p0 - alpha.shift);
  line.dir = alpha.linear.transpose() * VecN::Unit(n, n - 1);
  return line;
}

double distance_point_line(const VecN& x, const Line& line) {
  VecN d = x - line.point;
  double along = d.dot(line.dir);
  return std::sqrt(std::max(0.0, d.squaredNorm() - along * along));
}

namespace {

bool lines_equal(const Line& a, const VecN& x0_prime, int n, double tol) {
  // compare against l0 = {(x0', t)}
  VecN en = VecN::Unit(n, n - 1);
  if (std::abs(std::abs(a.dir.dot(en)) - 1.0) > tol) return false;
  VecN p0 = VecN::Zero(n);
  for (int i = 0; i + 1 < n; ++i) p0[i] = x0_prime[i];
  Line l0{p0, en};
  return distance_point_line(a.point, l0) <= tol;
}

}  // namespace

AxisChoice choose_axis_line(const FlatQuotient& F) {
  if (!F.aligned()) fail(ErrorCode::InvalidArgument, "choose_axis_line requires an aligned quotient");
  const int n = F.n;
  const int d = n - 1;
  AxisChoice A;
  A.c0 = 0.05;

  if (F.index() == 1) {
    A.x0_prime = VecN::Zero(d);
    A.x0_n = 0.0;
    A.clearance = std::numeric_limits<double>::infinity();
    A.c1 = A.c2 = 0.05;
    return A;
  }

  const double s = F.basis(n - 1, n - 1);
  const int candidate_trials = 256;
  const int height_trials = 256;
  const double line_tol = 100 * F.tol;

  double best_clear = -1.0;
  VecN best_x0p;
  double best_height = 0.0;

  for (int trial = 1; trial <= candidate_trials; ++trial) {
    VecN u = halton_point(trial, d);
    VecN x0p(d);
    for (int i = 0; i < d; ++i) x0p[i] = A.c0 * (2 * u[i] - 1);

    std::vector<Line> lines;
    bool distinct = true;
    for (int i = 1; i < F.index(); ++i) {
      Line li = coset_line(F.coset_reps[i], x0p);
      if (lines_equal(li, x0p, n, line_tol)) { distinct = false; break; }
      lines.push_back(li);
    }
    if (!distinct) continue;

    for (int ht = 1; ht <= height_trials; ++ht) {
      double t = s * radical_inverse(ht, 3);
      VecN x0 = VecN::Zero(n);
      for (int i = 0; i < d; ++i) x0[i] = x0p[i];
      x0[n - 1] = t;
      double clear = std::numeric_limits<double>::infinity();
      for (const Line& li : lines) clear = std::min(clear, distance_point_line(x0, li));
      if (clear > best_clear) {
        best_clear = clear;
        best_x0p = x0p;
        best_height = t;
      }
    }
  }

  if (best_clear <= 10 * F.tol)
    fail(ErrorCode::SearchExhausted, "no axis line found clear of the coset lines");

  A.x0_prime = best_x0p;
  A.x0_n = best_height;
  A.clearance = best_clear;
  A.c1 = A.c2 = std::min(best_clear / 4, 0.05);
  return A;
}

double geodesic_period(const FlatQuotient& F, const AxisChoice& A) {
  if (!F.aligned()) fail(ErrorCode::InvalidArgument, "geodesic_period requires an aligned quotient");
  const int n = F.n;
  const double s = F.basis(n - 1, n - 1);
  const double tol = 1e-9;

  VecN x0 = VecN::Zero(n);
  for (int i = 0; i + 1 < n; ++i) x0[i] = A.x0_prime[i];

  double binv_norm = F.basis_inv.cwiseAbs().rowwise().sum().maxCoeff();
  int Z = std::min(16, 2 + static_cast<int>(std::ceil(binv_norm * (2 * s + 2.0))));

  double best = std::numeric_limits<double>::infinity();
  VecN en = VecN::Unit(n, n - 1);
  for (const RigidMotion& rep : F.coset_reps) {
    if ((rep.linear * en - en).norm() > 100 * F.tol) continue;  // must preserve +e_n
    VecN base = rep.apply(x0);
    IVecN z = IVecN::Constant(n, -Z);
    for (;;) {
      VecN img = base;
      for (int i = 0; i < n; ++i) img += F.basis.col(i) * static_cast<double>(z[i]);
      bool on_line = true;
      for (int i = 0; i + 1 < n; ++i)
        if (std::abs(img[i] - x0[i]) > tol) { on_line = false; break; }
      if (on_line) {
        double t = img[n - 1];
        if (t > tol && t < best) best = t;
      }
      int i = 0;
      for (; i < n; ++i) {
        if (z[i] < Z) { ++z[i]; break; }
        z[i] = -Z;
      }
      if (i == n) break;
    }
  }

  if (!std::isfinite(best))
    fail(ErrorCode::NoPeriodFound, "no deck element closes the axis line");
  return best;
}

}  // namespace knapp
