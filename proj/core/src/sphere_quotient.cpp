#include "knapp/sphere_quotient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "knapp/halton.hpp"

namespace knapp {

namespace {

constexpr std::size_t kMaxGroupOrder = 10000;

bool matches(const MatN& a, const MatN& b, double tol) { return max_abs(a - b) <= tol; }

int find_element(const std::vector<MatN>& group, const MatN& g, double tol) {
  for (std::size_t i = 0; i < group.size(); ++i)
    if (matches(group[i], g, tol)) return static_cast<int>(i);
  return -1;
}

void check_free(const MatN& g, double tol, int index) {
  // Free action on S^n <=> no non-identity element has eigenvalue 1.
  Eigen::MatrixXd m = g;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  for (int i = 0; i < m.rows(); ++i) {
    std::complex<double> ev = es.eigenvalues()[i];
    if (std::abs(ev - std::complex<double>(1.0, 0.0)) <= 10 * tol)
      fail(ErrorCode::NotFreeAction,
           "deck element " + std::to_string(index) + " has eigenvalue 1 (fixed point on S^n)");
  }
}

}  // namespace

SphereQuotient make_sphere_quotient(int n, const std::vector<MatN>& generators, double tol) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "sphere dimension must be >= 2");
  const int d = n + 1;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].rows() != d || generators[i].cols() != d)
      fail(ErrorCode::InvalidArgument, "generator has wrong dimensions");
    if (!is_orthogonal(generators[i], tol))
      fail(ErrorCode::NotOrthogonal, "generator " + std::to_string(i) + " is not orthogonal");
  }

  const double dedup = 10 * tol;
  std::vector<MatN> group;
  group.push_back(MatN::Identity(d, d));
  std::vector<MatN> gens = generators;
  for (const MatN& g : generators) gens.push_back(g.transpose());  // inverses

  // breadth-first closure
  for (std::size_t head = 0; head < group.size(); ++head) {
    MatN current = group[head];  // copy: group may reallocate
    for (const MatN& g : gens) {
      MatN prod = g * current;
      if (find_element(group, prod, dedup) < 0) {
        if (group.size() >= kMaxGroupOrder)
          fail(ErrorCode::ClosureNotReached,
               "group closure exceeded " + std::to_string(kMaxGroupOrder) + " elements");
        group.push_back(prod);
      }
    }
  }

  for (std::size_t i = 1; i < group.size(); ++i) check_free(group[i], tol, static_cast<int>(i));

  SphereQuotient S;
  S.n = n;
  S.deck = std::move(group);
  S.tol = tol;
  return S;
}

double distance_to_equator(const VecN& x) {
  double tail2 = 0.0;
  for (int i = 2; i < x.size(); ++i) tail2 += x[i] * x[i];
  return std::asin(std::min(1.0, std::sqrt(tail2)));
}

EquatorStabilizer equator_stabilizer(const SphereQuotient& S) {
  const int d = S.n + 1;
  const double tol = 10 * S.tol;
  EquatorStabilizer E;

  for (std::size_t idx = 0; idx < S.deck.size(); ++idx) {
    const MatN& g = S.deck[idx];
    // g maps gamma0 into itself iff it preserves span{e1, e2}.
    bool preserves = true;
    for (int col = 0; col < 2 && preserves; ++col)
      for (int row = 2; row < d; ++row)
        if (std::abs(g(row, col)) > tol) { preserves = false; break; }
    if (!preserves) {
      E.non_stabilizer.push_back(static_cast<int>(idx));
      continue;
    }
    // orthogonality forces the complementary block to vanish as well
    for (int col = 2; col < d; ++col)
      for (int row = 0; row < 2; ++row)
        if (std::abs(g(row, col)) > tol)
          fail(ErrorCode::StabilizerNotCyclicRotations,
               "stabilizer element lacks the block form; conjugate the group so the "
               "reference circle is invariant");
    MatN rot = g.block(0, 0, 2, 2);
    double det = rot(0, 0) * rot(1, 1) - rot(0, 1) * rot(1, 0);
    if (det < 0)
      fail(ErrorCode::StabilizerNotCyclicRotations,
           "stabilizer element reflects the reference circle");
    E.stabilizer.push_back(static_cast<int>(idx));
    E.angles.push_back(std::atan2(rot(1, 0), rot(0, 0)));
    E.blocks.push_back(MatN(g.block(2, 2, d - 2, d - 2)));
  }

  E.m = static_cast<int>(E.stabilizer.size());

  // acting on gamma0 the stabilizer must be Z/m: angles are distinct 2 pi j / m
  const double two_pi = 2 * std::numbers::pi;
  std::vector<bool> slot(E.m, false);
  for (double a : E.angles) {
    double frac = a / two_pi * E.m;
    long j = std::lround(frac);
    if (std::abs(frac - static_cast<double>(j)) > 1e-6 * E.m)
      fail(ErrorCode::StabilizerNotCyclicRotations, "stabilizer angles are not multiples of 2pi/m");
    int jj = static_cast<int>(((j % E.m) + E.m) % E.m);
    if (slot[jj])
      fail(ErrorCode::StabilizerNotCyclicRotations, "repeated rotation angle in stabilizer");
    slot[jj] = true;
  }
  return E;
}

namespace {

// distance from a point p to the circle alpha^{-1}(gamma0): map p forward.
double distance_to_image_circle(const MatN& alpha, const VecN& p) {
  VecN q = alpha * p;
  return distance_to_equator(q);
}

}  // namespace

double equator_separation(const SphereQuotient& S, const EquatorStabilizer& E) {
  if (E.non_stabilizer.empty()) return std::numeric_limits<double>::infinity();
  const int d = S.n + 1;
  const int samples = 4096;
  double best = std::numeric_limits<double>::infinity();
  for (int idx : E.non_stabilizer) {
    const MatN& g = S.deck[idx];
    for (int i = 0; i < samples; ++i) {
      double theta = 2 * std::numbers::pi * i / samples;
      VecN p = VecN::Zero(d);
      p[0] = std::cos(theta);
      p[1] = std::sin(theta);
      best = std::min(best, distance_to_image_circle(g, p));
    }
  }
  return best;
}

SphereBasePoint choose_base_point_sphere(const SphereQuotient& S, const EquatorStabilizer& E) {
  const int d = S.n + 1;
  const double cap = std::numbers::pi / 4;

  auto point_at = [&](double theta) {
    VecN p = VecN::Zero(d);
    p[0] = std::cos(theta);
    p[1] = std::sin(theta);
    return p;
  };

  SphereBasePoint best;
  best.theta = 0.0;
  best.point = point_at(0.0);

  if (E.non_stabilizer.empty()) {
    best.clearance = cap;
    return best;
  }

  auto min_distance = [&](double theta) {
    VecN p = point_at(theta);
    double m = std::numeric_limits<double>::infinity();
    for (int idx : E.non_stabilizer)
      m = std::min(m, distance_to_image_circle(S.deck[idx], p));
    return m;
  };

  double best_min = min_distance(0.0);
  const int trials = 4096;  // deterministic Halton scan along gamma0
  for (int i = 1; i <= trials; ++i) {
    double theta = 2 * std::numbers::pi * radical_inverse(i, 2);
    double m = min_distance(theta);
    if (m > best_min) {
      best_min = m;
      best.theta = theta;
      best.point = point_at(theta);
    }
  }

  if (best_min <= 10 * S.tol)
    fail(ErrorCode::NoBasePoint, "base-point search degenerated below tolerance");
  best.clearance = std::min(cap, best_min / 2);
  return best;
}

}  // namespace knapp
