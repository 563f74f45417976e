#pragma once

#include <Eigen/Dense>
#include <complex>

namespace knapp {

// Stack-allocated dynamic vectors/matrices; ambient dimensions stay small (<= 8).
using VecN = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
using MatN = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;
using IVecN = Eigen::Matrix<int, Eigen::Dynamic, 1, 0, 8, 1>;
using IMatN = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;

using Complex = std::complex<double>;

inline double max_abs(const MatN& m) { return m.cwiseAbs().maxCoeff(); }

inline double orthogonality_defect(const MatN& m) {
  MatN d = m.transpose() * m;
  d.diagonal().array() -= 1.0;
  return max_abs(d);
}

inline bool is_orthogonal(const MatN& m, double tol) { return orthogonality_defect(m) <= tol; }

// z^k for |z| ~ 1 by binary powering; phase error O(log k * eps).
inline Complex unit_pow(Complex z, unsigned long k) {
  Complex result(1.0, 0.0);
  while (k != 0) {
    if (k & 1u) result *= z;
    z *= z;
    k >>= 1u;
  }
  return result;
}

}  // namespace knapp
