#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "knapp/flat_mode.hpp"
#include "knapp/presets.hpp"
#include "knapp/quadrature.hpp"

using namespace knapp;

TEST_SUITE("parseval") {

TEST_CASE("single exponential on the unit torus has L2 norm 1") {
  FlatQuotient F = preset_torus(MatN::Identity(2, 2));
  ActiveFrequency f;
  f.freq = IVecN(2);
  f.freq << 3, 17;
  f.coeff = {1.0, 0.0};
  FlatMode raw = make_raw_mode(F, 17.0, 0.5, {f});
  CHECK(l2_exact_parseval(raw) == doctest::Approx(1.0));
}

TEST_CASE("torus mode: stated coefficient formula") {
  FlatQuotient F = preset_torus(MatN::Identity(2, 2));
  AxisChoice A = choose_axis_line(F);
  auto bump = make_bump(1, 0.6);
  int k = 150;
  FlatMode mode = spaceform_mode(F, bump, k, 1.0 / std::log(150.0), A);
  double ld = mode.lambda * mode.delta;
  double sum = 0.0;
  for (std::size_t i = 0; i < mode.base_freqs.size(); ++i) {
    double v = mode.base_coeffs[i];
    sum += v * v;
  }
  double want = std::pow(ld, -0.5) * sum * F.det();
  CHECK(l2_exact_parseval(mode) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("quadrature L2 equals the exact Parseval value") {
  SUBCASE("torus") {
    FlatQuotient F = preset_torus(MatN::Identity(2, 2));
    AxisChoice A = choose_axis_line(F);
    FlatMode mode = spaceform_mode(F, make_bump(1, 0.6), 100, 1.0 / std::log(100.0), A);
    AbsEvaluator f = [&](const VecN& x) { return std::abs(mode(x)); };
    NormReport rep = lp_norm(f, flat_cell_domain(F, mode.lambda), 2.0, 1e-7);
    CHECK(rep.value * rep.value ==
          doctest::Approx(l2_exact_parseval(mode)).epsilon(1e-6));
  }
  SUBCASE("Klein bottle (cross terms between the deck summands)") {
    FlatQuotient F = preset_klein_bottle();
    AxisChoice A = choose_axis_line(F);
    FlatMode mode = spaceform_mode(F, make_bump(1, 0.6), 120, 1.0 / std::log(120.0), A);
    AbsEvaluator f = [&](const VecN& x) { return std::abs(mode(x)); };
    NormReport rep = lp_norm(f, flat_cell_domain(F, mode.lambda), 2.0, 1e-7);
    CHECK(rep.value * rep.value ==
          doctest::Approx(l2_exact_parseval(mode)).epsilon(1e-6));
  }
}

TEST_CASE("combined frequencies are collision-free after merging") {
  FlatQuotient F = preset_klein_bottle();
  AxisChoice A = choose_axis_line(F);
  FlatMode mode = spaceform_mode(F, make_bump(1, 0.6), 80, 1.0 / std::log(80.0), A);
  std::set<std::pair<int, int>> keys;
  for (const ActiveFrequency& af : mode.combined)
    CHECK(keys.insert({af.freq[0], af.freq[1]}).second);
  // the glide maps (xi', k) to (-xi', k): the zero column collides and merges
  CHECK(mode.combined.size() < 2 * mode.base_freqs.size());
  // even k: the merged coefficients are 2 a cos(2 pi xi' y0')
  double y0 = mode.y0_prime[0];
  for (std::size_t i = 0; i < mode.base_freqs.size(); ++i) {
    int xi = mode.base_freqs[i][0];
    for (const ActiveFrequency& af : mode.combined)
      if (af.freq[0] == xi) {
        double want = 2 * mode.normalization * mode.base_coeffs[i] *
                      std::cos(2 * std::numbers::pi * xi * y0);
        CHECK(std::abs(af.coeff) == doctest::Approx(std::abs(want)).epsilon(1e-9));
      }
  }
}

}  // TEST_SUITE
