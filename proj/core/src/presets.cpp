#include "knapp/presets.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace knapp {

SphereQuotient preset_sphere(int n) {
  return make_sphere_quotient(n, {});
}

SphereQuotient preset_rp(int n) {
  MatN neg = -MatN::Identity(n + 1, n + 1);
  return make_sphere_quotient(n, {neg});
}

SphereQuotient preset_lens(int p, int q) {
  if (p < 1 || std::gcd(p, std::abs(q)) != 1)
    fail(ErrorCode::InvalidArgument, "lens space requires gcd(p, q) = 1");
  double a = 2 * std::numbers::pi / p;
  double b = a * q;
  MatN g = MatN::Zero(4, 4);
  g(0, 0) = std::cos(a); g(0, 1) = -std::sin(a);
  g(1, 0) = std::sin(a); g(1, 1) = std::cos(a);
  g(2, 2) = std::cos(b); g(2, 3) = -std::sin(b);
  g(3, 2) = std::sin(b); g(3, 3) = std::cos(b);
  return make_sphere_quotient(3, {g});
}

SphereQuotient preset_quaternion() {
  // left multiplication by i and j on H = R^4 with basis (1, i, j, k)
  MatN li = MatN::Zero(4, 4);
  li(0, 1) = -1; li(1, 0) = 1; li(2, 3) = -1; li(3, 2) = 1;
  MatN lj = MatN::Zero(4, 4);
  lj(0, 2) = -1; lj(1, 3) = 1; lj(2, 0) = 1; lj(3, 1) = -1;
  return make_sphere_quotient(3, {li, lj});
}

FlatQuotient preset_torus(const MatN& basis) {
  const int n = static_cast<int>(basis.rows());
  std::vector<RigidMotion> gens;
  for (int i = 0; i < n; ++i) gens.push_back({MatN::Identity(n, n), VecN(basis.col(i))});
  return make_flat_quotient(basis, gens);
}

FlatQuotient preset_klein_bottle() {
  MatN B = MatN::Identity(2, 2);
  MatN glide_lin(2, 2);
  glide_lin << -1, 0, 0, 1;
  VecN glide_shift(2);
  glide_shift << 0.0, 0.5;
  VecN tx(2);
  tx << 1.0, 0.0;
  return make_flat_quotient(B, {{glide_lin, glide_shift}, {MatN::Identity(2, 2), tx}});
}

}  // namespace knapp
