#pragma once

#include "entrocheck/qmat.hpp"
#include "entrocheck/random.hpp"

#include <cmath>

namespace entrocheck::testing {

inline DensityMatrix diag2(double a, double b) { return DensityMatrix::diagonal((RealVector(2) << a, b).finished(), {2}); }

inline PureStateVector bell_phi_plus() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return PureStateVector(v, {2, 2});
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline Matrix random_hermitian(Rng& rng, int d) {
  const Matrix g = complex_gaussian(rng, d, d);
  return 0.5 * (g + g.adjoint());
}

}  // namespace entrocheck::testing
