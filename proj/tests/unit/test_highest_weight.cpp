#include <doctest.h>

#include <cmath>
#include <numbers>

#include "knapp/highest_weight.hpp"
#include "test_oracles.hpp"

using namespace knapp;

TEST_SUITE("highest_weight") {

TEST_CASE("eigenvalues sqrt(k(k+n-1))") {
  CHECK(sphere_eigenvalue(2, 3) == doctest::Approx(std::sqrt(12.0)));
  CHECK(sphere_eigenvalue(2, 3) == doctest::Approx(3.464102).epsilon(1e-6));
  CHECK(sphere_eigenvalue(5, 0) == 0.0);
  CHECK(sphere_eigenvalue(3, 10) == doctest::Approx(std::sqrt(120.0)));
}

TEST_CASE("pointwise values") {
  VecN e1(3);
  e1 << 1, 0, 0;
  CHECK(evaluate_highest_weight(2, 3, e1).real() == doctest::Approx(std::pow(3.0, 0.25)));
  CHECK(std::abs(evaluate_highest_weight(2, 3, e1)) == doctest::Approx(1.316074).epsilon(1e-6));

  VecN pole(3);
  pole << 0, 0, 1;
  CHECK(std::abs(evaluate_highest_weight(2, 7, pole)) == 0.0);

  VecN off(3);
  off << 1.05, 0, 0;
  CHECK_THROWS_AS((void)evaluate_highest_weight(2, 3, off), Error);
}

TEST_CASE("large-k magnitude via the closed form k^{1/4} (cos d)^k") {
  // geodesic distance 0.5 from the equator
  double d = 0.5;
  VecN x(3);
  x << std::cos(d), 0, std::sin(d);
  double got = std::abs(evaluate_highest_weight(2, 200, x));
  double expected = std::pow(200.0, 0.25) * std::pow(std::cos(d), 200.0);
  CHECK(got == doctest::Approx(expected).epsilon(1e-10));
  CHECK(got == doctest::Approx(1.7e-11).epsilon(0.05));
}

TEST_CASE("agreement with a direct complex-power oracle") {
  for (int k : {1, 5, 17, 30})
    for (int i = 1; i <= 100; ++i) {
      VecN x = oracle::sphere_point(i, 2);
      Complex got = evaluate_highest_weight(2, k, x);
      Complex want = oracle::qk_direct(2, k, x);
      CHECK(std::abs(got - want) <= 1e-12 * (1 + std::abs(want)));
    }
}

TEST_CASE("antipodal parity Q_k(-x) = (-1)^k Q_k(x)") {
  for (int k : {4, 9, 50})
    for (int i = 1; i <= 50; ++i) {
      VecN x = oracle::sphere_point(i, 2);
      Complex a = evaluate_highest_weight(2, k, x);
      Complex b = evaluate_highest_weight(2, k, VecN(-x));
      double sign = (k % 2 == 0) ? 1.0 : -1.0;
      CHECK(std::abs(b - sign * a) <= 1e-12 * (1 + std::abs(a)));
    }
}

TEST_CASE("discrete Laplace-Beltrami residual converges at order 2") {
  const int k = 5;
  auto f = [&](double phi, double theta) {
    VecN x(3);
    x << std::sin(phi) * std::cos(theta), std::sin(phi) * std::sin(theta), std::cos(phi);
    x /= x.norm();
    return evaluate_highest_weight(2, k, x);
  };
  double r1 = oracle::s2_eigen_residual(k, 1.0, 0.7, 1e-2, f);
  double r2 = oracle::s2_eigen_residual(k, 1.0, 0.7, 5e-3, f);
  double ratio = r1 / r2;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

}  // TEST_SUITE
