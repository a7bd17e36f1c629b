#pragma once

// Relative-entropy distance to a finitely generated convex set of states, and the
// inequality checkers built on it.

#include "entrocheck/continuity.hpp"
#include "entrocheck/functionals.hpp"
#include "entrocheck/qmat.hpp"

#include <cstdint>
#include <vector>

namespace entrocheck {

/// Convex hull of a finite list of states that always contains I/d.
class ConvexSetSpec {
 public:
  /// Generators must be valid states with equal dims. When no generator equals I/d within
  /// 1e-10 (max entry), I/d is appended if `append_maximally_mixed`, otherwise
  /// std::invalid_argument is thrown.
  explicit ConvexSetSpec(std::vector<DensityMatrix> generators, bool append_maximally_mixed = true);

  const std::vector<DensityMatrix>& generators() const { return generators_; }
  std::size_t size() const { return generators_.size(); }
  int dim() const { return generators_.front().dim(); }
  const Dims& dims() const { return generators_.front().dims(); }
  /// True when I/d was added by the constructor.
  bool appended_maximally_mixed() const { return appended_; }

  /// sum_j weights_j sigma_j for a simplex vector of length size().
  Matrix point(const RealVector& weights) const;

 private:
  std::vector<DensityMatrix> generators_;
  bool appended_ = false;
};

struct RelDistOptions {
  int restarts = 32;
  int max_iterations = 5000;
  /// Stop once the projected-gradient step norm falls below this.
  double tolerance = 1e-7;
  std::uint64_t seed = 0;
};

struct RelDistResult {
  double value = 0.0;
  RealVector weights;
  DensityMatrix state;
  bool converged = false;
  long iterations = 0;
};

/// S(rho | sum_j weights_j sigma_j) in bits; infinite on a support failure.
FunctionalValue relative_entropy_objective(const DensityMatrix& rho, const ConvexSetSpec& set,
                                           const RealVector& weights);

/// Gradient of relative_entropy_objective with respect to the weights (Frechet derivative
/// of the matrix logarithm in divided-difference form). Throws std::domain_error when the
/// hull point does not cover the support of rho.
RealVector objective_gradient(const DensityMatrix& rho, const RealVector& weights, const ConvexSetSpec& set);

/// Euclidean projection onto the probability simplex.
RealVector project_to_simplex(const RealVector& v);

/// inf over the hull of S(rho | sigma): projected gradient with Armijo backtracking from
/// the barycentric start and random restarts, plus every generator as a candidate. The
/// value is always attained by the returned state, so it is an upper bound on the infimum.
RelDistResult rel_entropy_distance(const DensityMatrix& rho, const ConvexSetSpec& set,
                                   const RelDistOptions& opts = {});

inline constexpr double kOptimizerSlack = 1e-3;

/// sum_k p_k E(rho_k) - E(sum_k p_k rho_k) <= S(sum_k p_k rho_k) - sum_k p_k S(rho_k).
/// The record is marked skipped when any distance optimization did not converge.
BoundRecord check_donation_inequality(const Ensemble& ensemble, const ConvexSetSpec& set,
                                      const RelDistOptions& opts = {}, double slack = kOptimizerSlack,
                                      long trial = 0);

/// |E((1 - delta) rho + delta sigma) - E(rho)| <= 2 delta log2 d + H(delta), delta in [0, 1].
BoundRecord check_lemma1(const DensityMatrix& rho, const DensityMatrix& sigma, double delta,
                         const ConvexSetSpec& set, const RelDistOptions& opts = {},
                         double slack = kOptimizerSlack, long trial = 0);

/// |E(rho) - E(sigma)| <= 4 eps log2 d + 2 H(eps), eps = ||rho - sigma||_1, with H evaluated
/// at min(eps, 1/2).
BoundRecord check_lemma2(const DensityMatrix& rho, const DensityMatrix& sigma, const ConvexSetSpec& set,
                         const RelDistOptions& opts = {}, double slack = kOptimizerSlack, long trial = 0);

}  // namespace entrocheck
