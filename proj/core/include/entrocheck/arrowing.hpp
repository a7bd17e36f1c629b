#pragma once

// Functionals optimized over measurements on an ancilla: the conditional value F(rho, M),
// its infimum / supremum over POVMs (general or rank-one), the backward classical
// correlation, and classical intrinsic information.

#include "entrocheck/continuity.hpp"
#include "entrocheck/functionals.hpp"
#include "entrocheck/qmat.hpp"

#include <cstdint>
#include <vector>

namespace entrocheck {

/// Outcomes below this probability are dropped: their conditional state is undefined.
inline constexpr double kOutcomeThreshold = 1e-14;

struct MeasurementOutcome {
  double probability;
  /// Normalized post-measurement state of X.
  DensityMatrix conditional;
};

/// Measures the last tensor factor (E) of rho_xe with `povm`; X is everything else.
/// Only outcomes with probability >= kOutcomeThreshold are returned.
std::vector<MeasurementOutcome> measure_ancilla(const DensityMatrix& rho_xe, const Povm& povm);

/// F(rho, M) = sum_i p_i f(rho^i_X).
double avg_under_measurement(const DensityMatrix& rho_xe, const Povm& povm, const Functional& f);

// ---------------------------------------------------------------------------

struct ArrowOptions {
  int restarts = 32;
  int max_iterations = 2000;
  /// Riemannian gradient norm at which a local search stops.
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  /// Extra starting POVMs; they are zero-padded to the outcome budget.
  std::vector<Povm> warm_starts;
};

struct ArrowResult {
  double value;
  Povm best_povm;
  /// Outcome budget the search ran with.
  int outcomes;
  bool converged;
  int restarts;
};

/// Default budget dE^2 + 1.
int default_outcome_budget(const DensityMatrix& rho_xe);

/// inf over POVMs with at most m outcomes of F(rho, M). m <= 0 selects the default
/// budget. The single-outcome POVM is always a candidate, so the value never exceeds
/// f(Tr_E rho). The value is attained by best_povm.
ArrowResult arrow_down(const DensityMatrix& rho_xe, const Functional& f, int m = 0, const ArrowOptions& opts = {});

/// sup counterpart of arrow_down.
ArrowResult arrow_up(const DensityMatrix& rho_xe, const Functional& f, int m = 0, const ArrowOptions& opts = {});

/// arrow_down restricted to POVMs whose elements are rank one. Requires m >= dE.
ArrowResult arrow_down_cpl(const DensityMatrix& rho_xe, const Functional& f, int m = 0,
                           const ArrowOptions& opts = {});

/// arrow_down for budgets 1..m_max, each warm-started from the previous optimum, so the
/// values are nonincreasing in the budget.
std::vector<ArrowResult> arrow_down_sweep(const DensityMatrix& rho_xe, const Functional& f, int m_max,
                                          const ArrowOptions& opts = {});

/// sup over POVMs on B of S(rho_A) - sum_i p_i S(rho^i_A).
ArrowResult classical_correlation_backward(const DensityMatrix& rho_ab, int m = 0, const ArrowOptions& opts = {});

/// Smooth objective behind the measurement searches, exposed for derivative checks.
///
/// A POVM with `outcomes` elements is encoded as a stacked matrix V of shape
/// (outcomes * block_rows) x dE whose k-th row block is the measurement operator A_k
/// (block_rows = 1 for rank-one elements, dE otherwise). Completeness is V^dagger V = I.
/// value() is defined for any V: sign * sum_k p_k f(tau_k / p_k) with
/// tau_k = Tr_E[(I (x) A_k) rho (I (x) A_k)^dagger] and p_k = Tr tau_k.
class MeasurementObjective {
 public:
  MeasurementObjective(const DensityMatrix& rho_xe, Functional f, int outcomes, bool rank_one, double sign = 1.0);

  int outcomes() const { return outcomes_; }
  int block_rows() const { return block_rows_; }
  int rows() const { return outcomes_ * block_rows_; }
  int cols() const { return de_; }
  const Dims& x_dims() const { return x_dims_; }

  double value(const Matrix& v) const;
  /// Euclidean gradient with respect to the real and imaginary parts of V, packed as a
  /// complex matrix: dvalue = Re Tr(G^dagger dV). Analytic for entropic functionals,
  /// central differences on V otherwise.
  Matrix gradient(const Matrix& v) const;
  double value_and_gradient(const Matrix& v, Matrix& grad) const;

  /// POVM encoded by an isometric V.
  Povm povm(const Matrix& v) const;
  /// Stacked matrix for a POVM with at most outcomes() elements (zero-padded). For rank-one
  /// encodings each element must be rank one; its nonzero row is used.
  Matrix encode(const Povm& povm) const;

 private:
  struct Conditional {
    Matrix tau;
    double p;
  };
  std::vector<Conditional> conditionals(const Matrix& v) const;
  double outcome_value(const Conditional& c) const;
  Matrix outcome_gradient(const Conditional& c) const;

  Functional f_;
  Dims x_dims_;
  int dx_;
  int de_;
  int outcomes_;
  int block_rows_;
  double sign_;
  /// Columns of the rank-revealing factor of rho_xe reshaped as dX x dE matrices.
  std::vector<Matrix> factors_;
};

// ---------------------------------------------------------------------------

struct TraceDistanceFacts {
  double epsilon;
  /// sum_k |p_k - q_k|
  double outcome_distance;
  /// sum_k p_k ||rho^k_X - sigma^k_X||_1, with 2 used where either conditional is undefined.
  double weighted_conditional_distance;
};

/// Outcome statistics of one POVM on E applied to two states of XE.
TraceDistanceFacts measurement_facts(const DensityMatrix& rho, const DensityMatrix& sigma, const Povm& povm);

/// |F(rho, M) - F(sigma, M)| <= (2K + M) eps log2 dX + O(eps) for one fixed POVM,
/// with the given per-outcome continuity spec and subextensivity constant.
BoundRecord measurement_swap_record(long trial, const DensityMatrix& rho, const DensityMatrix& sigma,
                                    const Povm& povm, const Functional& f, const ContinuitySpec& spec,
                                    double slack);

// ---------------------------------------------------------------------------

/// Row-stochastic matrix P(ebar | e).
class StochasticChannel {
 public:
  /// Row-major rows x cols table; rows nonnegative and summing to 1 within 1e-12.
  StochasticChannel(int rows, int cols, std::vector<double> p);

  static StochasticChannel identity(int n);
  /// Every input mapped to output 0.
  static StochasticChannel constant(int rows, int cols);
  /// Input e mapped to output map[e].
  static StochasticChannel deterministic(const std::vector<int>& map, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int e, int ebar) const { return p_[static_cast<std::size_t>(e) * cols_ + ebar]; }
  const std::vector<double>& table() const { return p_; }

 private:
  int rows_;
  int cols_;
  std::vector<double> p_;
};

/// Joint of (X, Y, Ebar) after passing E through the channel.
ClassicalJoint apply_channel(const ClassicalJoint& joint, const StochasticChannel& channel);

struct IntrinsicOptions {
  int restarts = 16;
  int max_iterations = 2000;
  double tolerance = 1e-10;
  std::uint64_t seed = 0;
};

struct IntrinsicResult {
  double value;
  StochasticChannel channel;
  bool converged;
};

/// inf over channels E -> Ebar with |Ebar| = |E| of I(X;Y|Ebar). Probes the identity and
/// constant channels, every deterministic channel when |E| <= 4, and projected-gradient
/// searches over the product of row simplices.
IntrinsicResult intrinsic_information(const ClassicalJoint& joint, const IntrinsicOptions& opts = {});

}  // namespace entrocheck
