#pragma once

// Small standalone helpers for the test oracles. Deliberately independent of the library so
// that oracle values do not inherit its bugs.

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace oracle {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

inline double entropy_bits(const CMat& rho) {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (rho + rho.adjoint()));
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s -= xlog2x(std::max(0.0, es.eigenvalues()(i)));
  return s;
}

inline double h2(double p) { return -xlog2x(p) - xlog2x(1.0 - p); }

// Reduced state of the first qubit of a two-qubit operator, written out entry by entry.
inline CMat trace_second_qubit(const CMat& rho) {
  CMat r(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) r(a, b) = rho(2 * a, 2 * b) + rho(2 * a + 1, 2 * b + 1);
  return r;
}

}  // namespace oracle
