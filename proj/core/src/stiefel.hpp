#pragma once

// Local search on the complex Stiefel manifold {V : V^dagger V = I}.

#include "entrocheck/qmat.hpp"

#include <functional>

namespace entrocheck::detail {

struct StiefelProblem {
  std::function<double(const Matrix&)> value;
  /// Returns the value and writes the Euclidean gradient (dvalue = Re Tr(G^dagger dV)).
  std::function<double(const Matrix&, Matrix&)> value_and_gradient;
};

struct StiefelOptions {
  int max_iterations = 2000;
  double tolerance = 1e-6;
};

struct StiefelRun {
  Matrix v;
  double value;
  bool converged;
  int iterations;
};

/// Riemannian gradient descent with Barzilai-Borwein steps, Armijo backtracking and the
/// QR retraction. `v0` must have orthonormal columns.
StiefelRun minimize_on_stiefel(const StiefelProblem& problem, Matrix v0, const StiefelOptions& opts);

/// Riemannian gradient of the embedded metric: G - V herm(V^dagger G).
Matrix stiefel_project(const Matrix& v, const Matrix& g);

}  // namespace entrocheck::detail
