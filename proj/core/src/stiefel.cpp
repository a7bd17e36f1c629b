#include "stiefel.hpp"

#include <algorithm>
#include <cmath>

namespace entrocheck::detail {

Matrix stiefel_project(const Matrix& v, const Matrix& g) {
  const Matrix vg = v.adjoint() * g;
  return g - v * (0.5 * (vg + vg.adjoint()));
}

namespace {

double real_inner(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b.conjugate()).sum().real(); }

}  // namespace

StiefelRun minimize_on_stiefel(const StiefelProblem& problem, Matrix v, const StiefelOptions& opts) {
  constexpr double kArmijo = 1e-4;
  Matrix g;
  double f = problem.value_and_gradient(v, g);
  Matrix xi = stiefel_project(v, g);
  double step = 1.0 / std::max(1.0, xi.norm());
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const double xi_sq = xi.squaredNorm();
    if (std::sqrt(xi_sq) < opts.tolerance) return {std::move(v), f, true, it};
    bool accepted = false;
    Matrix v_next;
    double f_next = 0.0;
    for (int bt = 0; bt < 50; ++bt) {
      v_next = orthonormal_factor(v - step * xi);
      f_next = problem.value(v_next);
      if (f_next <= f - kArmijo * step * xi_sq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return {std::move(v), f, false, it};
    Matrix g_next;
    f_next = problem.value_and_gradient(v_next, g_next);
    Matrix xi_next = stiefel_project(v_next, g_next);
    const Matrix s = v_next - v;
    const Matrix y = xi_next - xi;
    const double sy = std::abs(real_inner(s, y));
    step = sy > 1e-300 ? std::clamp(s.squaredNorm() / sy, 1e-10, 1e6) : std::min(step * 2.0, 1e6);
    v = std::move(v_next);
    xi = std::move(xi_next);
    f = f_next;
  }
  return {std::move(v), f, xi.norm() < opts.tolerance, it};
}

}  // namespace entrocheck::detail
