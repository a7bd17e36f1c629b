#pragma once

// Entropy family in bits and the functional handles the optimizers and bound checkers
// take as input.

#include "entrocheck/qmat.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace entrocheck {

/// A value in bits, or +infinity (relative entropy with a support mismatch).
struct FunctionalValue {
  double value = 0.0;
  bool is_infinite = false;

  static FunctionalValue finite(double v) { return {v, false}; }
  static FunctionalValue infinite() { return {0.0, true}; }
};

/// sigma-eigenvalues below this count as outside the support.
inline constexpr double kSupportThreshold = 1e-12;

/// -sum p log2 p over nonnegative entries; zero entries contribute nothing.
double shannon_entropy(std::span<const double> probs);
double shannon_entropy(const RealVector& probs);

/// -x log2 x, with eta(0) = 0. Throws std::domain_error outside [0, 1].
double eta(double x);
/// H(e) = eta(e) + eta(1 - e). Throws std::domain_error outside [0, 1].
double binary_entropy(double e);

double von_neumann_entropy(const DensityMatrix& rho);
/// Entropy of the normalized state m / Tr m for a PSD matrix; 0 for a zero matrix.
double entropy_of_psd(const Matrix& m);

FunctionalValue relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// S(rho_A) + S(rho_B) - S(rho_AB) for a two-factor state.
double mutual_information(const DensityMatrix& rho);
/// S(rho_AB) - S(rho_B) for a two-factor state.
double conditional_entropy(const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Classical distributions

/// p(x, y, e) stored flat with index (x * ny + y) * ne + e.
class ClassicalJoint {
 public:
  /// Entries nonnegative and summing to 1 within 1e-12.
  ClassicalJoint(int nx, int ny, int ne, std::vector<double> p);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int ne() const { return ne_; }
  double operator()(int x, int y, int e) const { return p_[(x * ny_ + y) * ne_ + e]; }
  const std::vector<double>& table() const { return p_; }

 private:
  int nx_, ny_, ne_;
  std::vector<double> p_;
};

/// I(X;Y|E) in bits.
double conditional_mutual_information(const ClassicalJoint& j);
/// I(X;Y) of the (x, y) marginal.
double mutual_information(const ClassicalJoint& j);

// ---------------------------------------------------------------------------
// Functional handles

/// coefficient * S(reduced state on `keep`); an empty `keep` means the whole system.
struct EntropicTerm {
  double coefficient = 1.0;
  std::vector<int> keep;
};

/// f(rho) = constant + sum_t c_t S(Tr_{not keep_t} rho). Carrying this structure lets the
/// measurement optimizers use analytic gradients.
struct EntropicForm {
  double constant = 0.0;
  std::vector<EntropicTerm> terms;

  double evaluate(const Matrix& rho, const Dims& dims) const;
};

class Functional {
 public:
  using Evaluator = std::function<FunctionalValue(const DensityMatrix&)>;

  /// `subextensivity` is the constant M with |f(rho)| <= M log2 d.
  Functional(std::string name, Evaluator eval, double subextensivity);
  static Functional entropic(std::string name, EntropicForm form, double subextensivity);

  FunctionalValue operator()(const DensityMatrix& rho) const { return eval_(rho); }
  const std::string& name() const { return name_; }
  double subextensivity() const { return subextensivity_; }
  const std::optional<EntropicForm>& entropic_form() const { return form_; }

 private:
  std::string name_;
  Evaluator eval_;
  double subextensivity_;
  std::optional<EntropicForm> form_;
};

namespace functionals {

/// S(rho) on the whole system.
Functional entropy();
/// S of the reduced state on one factor.
Functional reduced_entropy(int factor);
/// I_M for two-factor states.
Functional mutual_information();
/// S(A|B) for two-factor states.
Functional conditional_entropy();
Functional constant(double c);

/// Looks up a handle by id: "S", "S_A", "S_B", "I_M", "S_A|B", "zero".
std::optional<Functional> by_name(const std::string& id);

}  // namespace functionals

}  // namespace entrocheck
