#include <doctest.h>

#include <cmath>
#include <numbers>

#include "knapp/highest_weight.hpp"
#include "knapp/parallel.hpp"
#include "knapp/presets.hpp"
#include "knapp/quadrature.hpp"
#include "test_oracles.hpp"

using namespace knapp;

namespace {

AbsEvaluator constant_one() {
  return [](const VecN&) { return 1.0; };
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("constants") {
  SUBCASE("L2 of 1 on S^2 is sqrt(4 pi)") {
    IntegrationDomain D = sphere_domain(2, 1, 0.0).with_resolution({64, 64});
    NormReport rep = lp_norm(constant_one(), D, 2.0, 1e-9);
    CHECK(rep.value == doctest::Approx(std::sqrt(4 * std::numbers::pi)).epsilon(1e-12));
  }
  SUBCASE("L2 of 1 on the Klein-bottle fundamental domain is sqrt(1/2)") {
    FlatQuotient F = preset_klein_bottle();
    IntegrationDomain D = flat_cell_domain(F, 0.0).with_resolution({32, 32});
    NormReport rep = lp_norm(constant_one(), D, 2.0, 1e-9);
    CHECK(rep.value == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
  }
  SUBCASE("L2 of 1 on S^3 is sqrt(2 pi^2)") {
    // the disk indicator contributes an O(h) boundary error for integrands
    // that do not vanish at |w| = 1 (the modes all do)
    IntegrationDomain D = sphere_domain(3, 1, 0.0).with_resolution({48, 48, 48});
    NormReport rep = lp_norm(constant_one(), D, 2.0, 2e-2);
    CHECK(rep.value ==
          doctest::Approx(std::sqrt(2 * std::numbers::pi * std::numbers::pi)).epsilon(1e-2));
  }
}

TEST_CASE("highest-weight L2 matches the log-gamma closed form") {
  for (int k : {4, 20}) {
    SphereMode mode = plain_sphere_mode(2, k);
    AbsEvaluator f = [&](const VecN& x) { return std::abs(mode(x)); };
    IntegrationDomain D = sphere_domain(2, 1, mode.lambda);
    NormReport rep = lp_norm(f, D, 2.0, 1e-7);
    double want = std::sqrt(oracle::qk_l2_squared(2, k));
    CHECK(rep.value == doctest::Approx(want).epsilon(1e-7));
    if (k == 4) CHECK(rep.value * rep.value == doctest::Approx(10.213).epsilon(1e-4));
  }
  // S^3 closed form: ||Q_k||_2^2 = 2 pi^2 k / (k+1)
  SphereMode mode = plain_sphere_mode(3, 12);
  AbsEvaluator f = [&](const VecN& x) { return std::abs(mode(x)); };
  NormReport rep = lp_norm(f, sphere_domain(3, 1, mode.lambda), 2.0, 1e-6);
  CHECK(rep.value * rep.value == doctest::Approx(oracle::qk_l2_squared(3, 12)).epsilon(1e-6));
}

TEST_CASE("covering identity: quotient integral equals cover integral over order") {
  // Gamma-invariant integrand on RP^2: quotient norms divide by |Gamma| = 2
  SphereQuotient S = preset_rp(2);
  EquatorStabilizer E = equator_stabilizer(S);
  SphereMode mode = deck_sum_mode(S, E, 10);  // k = 20, e = 2 Q_20
  AbsEvaluator f = [&](const VecN& x) { return std::abs(mode(x)); };
  NormReport quotient = lp_norm(f, sphere_domain(2, S.order(), mode.lambda), 2.0, 1e-7);
  double cover = 2.0 * std::sqrt(oracle::qk_l2_squared(2, 20));  // ||2 Q_20||_{L^2(S^2)}
  CHECK(quotient.value == doctest::Approx(cover / std::sqrt(2.0)).epsilon(1e-7));
}

TEST_CASE("two-grid estimate shrinks by at least 3 under refinement") {
  // smooth non-periodic integrand in the w-direction: order-2 midpoint
  AbsEvaluator f = [](const VecN& x) { return std::exp(x[2]); };
  IntegrationDomain lo = sphere_domain(2, 1, 0.0).with_resolution({32, 32});
  IntegrationDomain hi = sphere_domain(2, 1, 0.0).with_resolution({64, 64});
  NormReport a = lp_norm(f, lo, 2.0, 1e-1);
  NormReport b = lp_norm(f, hi, 2.0, 1e-1);
  CHECK(a.error_estimate / b.error_estimate >= 3.0);
}

TEST_CASE("resolution floor and convergence failures") {
  SUBCASE("too few nodes per wavelength") {
    IntegrationDomain D = sphere_domain(2, 1, 100.0).with_resolution({64, 64});
    try {
      lp_norm(constant_one(), D, 2.0, 1e-6);
      FAIL("expected ResolutionTooCoarse");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ResolutionTooCoarse);
    }
  }
  SUBCASE("cusp integrand cannot hit 1e-12") {
    AbsEvaluator cusp = [](const VecN& x) { return std::pow(std::abs(x[2] - 0.123456), 0.1); };
    IntegrationDomain D = sphere_domain(2, 1, 0.0).with_resolution({24, 24});
    try {
      lp_norm(cusp, D, 2.0, 1e-12);
      FAIL("expected NotConverged");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotConverged);
    }
  }
}

TEST_CASE("tube integrals") {
  SUBCASE("constant over a flat tube recovers the tube volume") {
    FlatQuotient F = preset_torus(MatN::Identity(2, 2));
    AxisChoice A = choose_axis_line(F);
    double r = 0.01;
    IntegrationDomain T =
        flat_tube_domain(F, MatN::Identity(2, 2), A, 1.0, r, 0.0).with_resolution({32, 32});
    NormReport rep = lp_norm(constant_one(), T, 1.0, 1e-9);
    CHECK(rep.value == doctest::Approx(2 * r * 1.0).epsilon(1e-12));
  }
  SUBCASE("concentration ratio of Q_k vs the 1-d oracle") {
    for (int k : {50, 100}) {
      SphereMode mode = plain_sphere_mode(2, k);
      AbsEvaluator f = [&](const VecN& x) { return std::abs(mode(x)); };
      double radius = 1.0 / std::sqrt(static_cast<double>(k));
      NormReport tube = tube_lp_norm(
          f, sphere_tube_domain(2, 1, radius, std::numeric_limits<double>::infinity(),
                                mode.lambda),
          2.0, 1e-5);
      NormReport whole = lp_norm(f, sphere_domain(2, 1, mode.lambda), 2.0, 1e-7);
      double ratio = tube.value / whole.value;
      // oracle: integrate (1-t^2)^k over |t| <= sin r against the full range
      double num = oracle::adaptive_quad(
          [&](double t) { return std::pow(1 - t * t, k); }, -std::sin(radius), std::sin(radius));
      double den = oracle::adaptive_quad(
          [&](double t) { return std::pow(1 - t * t, k); }, -1.0, 1.0);
      CHECK(ratio == doctest::Approx(std::sqrt(num / den)).epsilon(1e-5));
      CHECK(ratio >= 0.5);
    }
  }
  SUBCASE("monotone in the radius (up to the reported error)") {
    SphereMode mode = plain_sphere_mode(2, 60);
    AbsEvaluator f = [&](const VecN& x) { return std::abs(mode(x)); };
    double r1 = 0.08, r2 = 0.12;
    NormReport a = tube_lp_norm(
        f, sphere_tube_domain(2, 1, r1, std::numeric_limits<double>::infinity(), mode.lambda),
        2.0, 1e-6);
    NormReport b = tube_lp_norm(
        f, sphere_tube_domain(2, 1, r2, std::numeric_limits<double>::infinity(), mode.lambda),
        2.0, 1e-6);
    CHECK(a.value <= b.value + a.error_estimate + b.error_estimate);
  }
  SUBCASE("embedding guards") {
    // quaternion circles sit pi/2 apart: radius above pi/4 cannot embed
    try {
      sphere_tube_domain(3, 4, 0.9, std::numbers::pi / 2, 10.0);
      FAIL("expected TubeNotEmbedded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TubeNotEmbedded);
    }
    FlatQuotient F = preset_klein_bottle();
    AxisChoice A = choose_axis_line(F);
    try {
      flat_tube_domain(F, MatN::Identity(2, 2), A, 1.0, A.clearance, 10.0);
      FAIL("expected TubeNotEmbedded");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TubeNotEmbedded);
    }
  }
}

TEST_CASE("deterministic across worker counts") {
  SphereMode mode = plain_sphere_mode(2, 30);
  AbsEvaluator f = [&](const VecN& x) { return std::abs(mode(x)); };
  IntegrationDomain D = sphere_domain(2, 1, mode.lambda);
  set_worker_count(1);
  NormReport serial = lp_norm(f, D, 1.0, 1e-6);
  set_worker_count(4);
  NormReport parallel = lp_norm(f, D, 1.0, 1e-6);
  set_worker_count(0);
  CHECK(serial.value == parallel.value);  // bitwise
}

TEST_CASE("one-pass multi-norm values equal per-norm runs") {
  SphereMode mode = plain_sphere_mode(2, 24);
  AbsEvaluator f = [&](const VecN& x) { return std::abs(mode(x)); };
  IntegrationDomain D = sphere_domain(2, 1, mode.lambda);
  MultiNorms multi = lp_norms_124(f, D, 1e-6);
  CHECK(multi.p1.value == lp_norm(f, D, 1.0, 1e-6).value);
  CHECK(multi.p2.value == lp_norm(f, D, 2.0, 1e-6).value);
  CHECK(multi.p4.value == lp_norm(f, D, 4.0, 1e-6).value);
}

}  // TEST_SUITE
