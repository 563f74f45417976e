#include <doctest.h>

#include <numbers>
#include <set>

#include "knapp/presets.hpp"
#include "knapp/sphere_quotient.hpp"
#include "test_oracles.hpp"

using namespace knapp;

namespace {

MatN plane_rotation(int axis_a, int axis_b, double angle, int dim) {
  MatN g = MatN::Identity(dim, dim);
  g(axis_a, axis_a) = std::cos(angle);
  g(axis_a, axis_b) = -std::sin(angle);
  g(axis_b, axis_a) = std::sin(angle);
  g(axis_b, axis_b) = std::cos(angle);
  return g;
}

// brute-force closure with an unrelated dedup scheme
std::size_t closure_order_oracle(const std::vector<MatN>& gens, int dim) {
  auto key = [&](const MatN& m) {
    std::vector<long> v;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) v.push_back(std::lround(m(i, j) * 1e6));
    return v;
  };
  std::set<std::vector<long>> seen;
  std::vector<MatN> group{MatN::Identity(dim, dim)};
  seen.insert(key(group[0]));
  for (std::size_t head = 0; head < group.size(); ++head) {
    for (const MatN& g : gens) {
      MatN p = g * group[head];
      if (seen.insert(key(p)).second) group.push_back(p);
    }
  }
  return group.size();
}

}  // namespace

TEST_SUITE("geometry_sphere") {

TEST_CASE("antipodal map generates RP^2") {
  SphereQuotient S = preset_rp(2);
  CHECK(S.order() == 2);
  CHECK(max_abs(S.deck[0] - MatN::Identity(3, 3)) == 0.0);
}

TEST_CASE("quaternion group has order 8 (closure oracle)") {
  SphereQuotient S = preset_quaternion();
  CHECK(S.order() == 8);
  MatN li = MatN::Zero(4, 4);
  li(0, 1) = -1; li(1, 0) = 1; li(2, 3) = -1; li(3, 2) = 1;
  MatN lj = MatN::Zero(4, 4);
  lj(0, 2) = -1; lj(1, 3) = 1; lj(2, 0) = 1; lj(3, 1) = -1;
  CHECK(closure_order_oracle({li, lj}, 4) == 8);
}

TEST_CASE("reflection fixing the equator is rejected") {
  MatN g = MatN::Identity(3, 3);
  g(2, 2) = -1;
  try {
    make_sphere_quotient(2, {g});
    FAIL("expected NotFreeAction");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotFreeAction);
  }
}

TEST_CASE("non-orthogonal generator is rejected") {
  MatN g = MatN::Identity(3, 3);
  g(0, 1) = 0.5;
  try {
    make_sphere_quotient(2, {g});
    FAIL("expected NotOrthogonal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotOrthogonal);
  }
}

TEST_CASE("irrational rotation never closes") {
  // two-plane rotation by 1 radian on S^3 (no fixed directions, infinite order)
  MatN g = plane_rotation(0, 1, 1.0, 4) * plane_rotation(2, 3, 1.0, 4);
  try {
    make_sphere_quotient(3, {g});
    FAIL("expected ClosureNotReached");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ClosureNotReached);
  }
}

TEST_CASE("group closure property: products stay in the group") {
  for (const SphereQuotient& S : {preset_quaternion(), preset_lens(5, 2)}) {
    for (const MatN& a : S.deck)
      for (const MatN& b : S.deck) {
        MatN p = a * b;
        double best = 1e9;
        for (const MatN& c : S.deck) best = std::min(best, max_abs(p - c));
        CHECK(best <= 10 * S.tol);
      }
  }
}

TEST_CASE("freeness: displacement bounded below at random points") {
  SphereQuotient S = preset_quaternion();
  double worst = 1e9;
  for (int i = 1; i <= 10000; ++i) {
    VecN x = oracle::sphere_point(i, 3);
    for (std::size_t g = 1; g < S.deck.size(); ++g)
      worst = std::min(worst, (S.deck[g] * x - x).norm());
  }
  CHECK(worst > 10 * S.tol);
}

TEST_CASE("equator stabilizer orders") {
  SUBCASE("trivial group") {
    EquatorStabilizer E = equator_stabilizer(preset_sphere(2));
    CHECK(E.m == 1);
  }
  SUBCASE("projective space: antipodal rotates by pi") {
    EquatorStabilizer E = equator_stabilizer(preset_rp(3));
    CHECK(E.m == 2);
    CHECK(E.non_stabilizer.empty());
  }
  SUBCASE("quaternion group: i-multiplication stabilizes, j and k move the circle") {
    SphereQuotient S = preset_quaternion();
    EquatorStabilizer E = equator_stabilizer(S);
    CHECK(E.m == 4);
    CHECK(E.non_stabilizer.size() == 4);
    // orbit oracle: sampled circle points; stabilizer images stay on the circle
    for (int idx : E.stabilizer)
      for (int i = 0; i < 64; ++i) {
        double t = 2 * std::numbers::pi * i / 64;
        VecN p(4);
        p << std::cos(t), std::sin(t), 0, 0;
        CHECK(distance_to_equator(VecN(S.deck[idx] * p)) < 1e-12);
      }
    for (int idx : E.non_stabilizer) {
      VecN p(4);
      p << 1, 0, 0, 0;
      CHECK(distance_to_equator(VecN(S.deck[idx] * p)) > 1.0);
    }
  }
  SUBCASE("lens space: whole group stabilizes") {
    EquatorStabilizer E = equator_stabilizer(preset_lens(3, 1));
    CHECK(E.m == 3);
    CHECK(E.non_stabilizer.empty());
  }
}

TEST_CASE("stabilizer rejects a reflecting block form") {
  SphereQuotient S;  // hand-built, bypasses the freeness check on purpose
  S.n = 2;
  S.tol = 1e-10;
  S.deck.push_back(MatN::Identity(3, 3));
  MatN refl = MatN::Identity(3, 3);
  refl(1, 1) = -1;  // reflects the circle, fixes (1,0,0)
  refl(2, 2) = -1;
  S.deck.push_back(refl);
  try {
    equator_stabilizer(S);
    FAIL("expected StabilizerNotCyclicRotations");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StabilizerNotCyclicRotations);
  }
}

TEST_CASE("base point with empty exclusion set: the marked point, pi/4 cap") {
  SphereQuotient S = preset_lens(3, 1);
  EquatorStabilizer E = equator_stabilizer(S);
  SphereBasePoint bp = choose_base_point_sphere(S, E);
  CHECK(bp.theta == 0.0);
  CHECK(bp.point[0] == doctest::Approx(1.0));
  CHECK(bp.clearance == doctest::Approx(std::numbers::pi / 4));
}

TEST_CASE("quaternion base point: disjoint circle at distance pi/2") {
  SphereQuotient S = preset_quaternion();
  EquatorStabilizer E = equator_stabilizer(S);
  // distance between the two circles by direct minimization
  double dist = 1e9;
  for (int idx : E.non_stabilizer)
    for (int i = 0; i < 512; ++i) {
      double t = 2 * std::numbers::pi * i / 512;
      VecN p(4);
      p << std::cos(t), std::sin(t), 0, 0;
      dist = std::min(dist, distance_to_equator(VecN(S.deck[idx] * p)));
    }
  // asin is steep near 1: rounding in the image coordinates costs ~1e-8
  CHECK(dist == doctest::Approx(std::numbers::pi / 2).epsilon(1e-6));

  SphereBasePoint bp = choose_base_point_sphere(S, E);
  CHECK(bp.theta == 0.0);
  CHECK(bp.clearance == doctest::Approx(std::numbers::pi / 4));
  CHECK(equator_separation(S, E) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-6));
}

TEST_CASE("crossing circle pushes the base point away from the crossing") {
  // hand-built: a rotation in the (x2,x3)-plane maps the equator to a circle
  // crossing it at (+-1, 0, 0); not a free group, but only the circles matter
  SphereQuotient S;
  S.n = 2;
  S.tol = 1e-10;
  S.deck.push_back(MatN::Identity(3, 3));
  S.deck.push_back(plane_rotation(1, 2, std::numbers::pi / 2, 3));
  EquatorStabilizer E = equator_stabilizer(S);
  CHECK(E.m == 1);
  REQUIRE(E.non_stabilizer.size() == 1);

  SphereBasePoint bp = choose_base_point_sphere(S, E);
  double dist_to_crossing =
      std::min(std::abs(std::remainder(bp.theta, std::numbers::pi)),
               std::numbers::pi - std::abs(std::remainder(bp.theta, std::numbers::pi)));
  CHECK(dist_to_crossing > 0.5);
  CHECK(bp.clearance > 0.5);
}

}  // TEST_SUITE
