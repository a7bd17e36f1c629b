#pragma once

// Continuity and robustness bounds: the correction families, the explicit Tales witness
// for a pair of states, per-trial bound records and the randomized campaigns that check
// a functional against a declared bound.

#include "entrocheck/functionals.hpp"
#include "entrocheck/qmat.hpp"
#include "entrocheck/random.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace entrocheck {

enum class CorrectionForm { Zero, Linear, BinaryEntropy, Eta, Sqrt };

/// O(x) = coefficient * g(argument_scale * x).
///
/// BinaryEntropy evaluates H at min(y, 1/2) so the correction stays nondecreasing past the
/// midpoint; Eta is the literal -y log2 y for y in [0, 1] (clamped at 1).
struct Correction {
  CorrectionForm form = CorrectionForm::Zero;
  double coefficient = 0.0;
  double argument_scale = 1.0;

  double operator()(double x) const;
  std::string describe() const;

  static Correction zero() { return {}; }
  static Correction linear(double c) { return {CorrectionForm::Linear, c, 1.0}; }
  static Correction binary_entropy(double c = 1.0) { return {CorrectionForm::BinaryEntropy, c, 1.0}; }
  static Correction eta(double c = 1.0) { return {CorrectionForm::Eta, c, 1.0}; }
  static Correction sqrt(double c = 1.0) { return {CorrectionForm::Sqrt, c, 1.0}; }
};

/// Right-hand side K x log2 d + O(x).
struct ContinuitySpec {
  double K = 0.0;
  Correction correction;

  double bound(double x, int d) const;
  /// K >= 0, O(0) = 0 and O nondecreasing on [0, 1/2]. For Eta the monotonicity check stops
  /// where y = 1/e, past which eta decreases. Throws std::invalid_argument.
  void validate() const;
};

enum class TransferDirection { RobustnessToContinuity, ContinuityToRobustness };

/// Constant bookkeeping when moving between the two predicates: K doubles either way;
/// robustness -> continuity doubles the correction (2 O(eps)), continuity -> robustness
/// doubles its argument (O(2 delta)).
ContinuitySpec transfer_constants(TransferDirection direction, const ContinuitySpec& spec);

// ---------------------------------------------------------------------------

/// sigma = (1 - eps) rho1 + eps gamma1 = (1 - eps) rho2 + eps gamma2, eps = ||rho1 - rho2||_1.
struct TalesWitness {
  DensityMatrix sigma;
  DensityMatrix gamma1;
  DensityMatrix gamma2;
  double epsilon;
};

/// Explicit witness built from the Jordan decomposition of rho2 - rho1 and the maximally
/// mixed filler. Requires eps <= 1 (throws std::domain_error otherwise).
TalesWitness tales_decompose(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// max of the two trace-norm reconstruction residuals of sigma.
double tales_residual(const TalesWitness& w, const DensityMatrix& rho1, const DensityMatrix& rho2);

// ---------------------------------------------------------------------------

inline constexpr double kBoundSlack = 1e-9;

struct BoundRecord {
  long trial = 0;
  int d = 0;
  double eps = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool violated = false;
  /// Out of domain, infinite functional value, or an optimizer that did not converge.
  bool skipped = false;
};

/// margin = rhs - lhs; violated iff margin < -slack.
BoundRecord make_record(long trial, int d, double eps, double lhs, double rhs, double slack);
BoundRecord skipped_record(long trial, int d, double eps);

struct BoundSummary {
  long trials = 0;
  long violations = 0;
  long skipped = 0;
  double min_margin = 0.0;
};

struct BoundReport {
  double slack = kBoundSlack;
  std::uint64_t seed = 0;
  std::vector<BoundRecord> records;

  /// Sorts by trial id.
  void finalize();
  BoundSummary summary() const;
  bool passed() const { return summary().violations == 0; }

  /// Columns trial,d,eps,lhs,rhs,margin,violated.
  void write_csv(std::ostream& os) const;
  /// {"trials","violations","skipped","min_margin","seed","slack"}.
  std::string summary_json() const;
};

struct CampaignOptions {
  long trials_per_dim = 1000;
  double slack = kBoundSlack;
  /// Pairs / admixture weights above this are outside the checked domain.
  double domain_limit = 0.5;
};

BoundRecord continuity_record(long trial, const Functional& f, const ContinuitySpec& spec,
                              const DensityMatrix& rho1, const DensityMatrix& rho2, double slack,
                              double domain_limit = 0.5);
BoundRecord robustness_record(long trial, const Functional& f, const ContinuitySpec& spec,
                              const DensityMatrix& rho1, const DensityMatrix& rho2, double delta,
                              double slack);

/// |f(rho1) - f(rho2)| <= K eps log2 d + O(eps) on pairs from `sampler`, one block of trials
/// per entry of `dims`. Trial k draws from make_rng(sampler.seed, k).
BoundReport check_asymptotic_continuity(const Functional& f, const ContinuitySpec& spec, const RngSpec& sampler,
                                        const std::vector<Dims>& dims, const CampaignOptions& opts = {});

/// |f((1-delta) rho1 + delta rho2) - f(rho1)| <= K delta log2 d + O(delta), delta uniform in
/// (0, domain_limit], rho1 and rho2 drawn independently.
BoundReport check_robustness(const Functional& f, const ContinuitySpec& spec, const RngSpec& sampler,
                             const std::vector<Dims>& dims, const CampaignOptions& opts = {});

}  // namespace entrocheck
