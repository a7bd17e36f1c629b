#include "entrocheck/functionals.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace entrocheck {

double shannon_entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double shannon_entropy(const RealVector& probs) {
  return shannon_entropy(std::span<const double>(probs.data(), static_cast<std::size_t>(probs.size())));
}

double eta(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("eta: argument outside [0, 1]");
  return x > 0.0 ? -x * std::log2(x) : 0.0;
}

double binary_entropy(double e) {
  if (!(e >= 0.0 && e <= 1.0)) throw std::domain_error("binary_entropy: argument outside [0, 1]");
  return eta(e) + eta(1.0 - e);
}

double entropy_of_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues().cwiseMax(0.0);
  const double tr = ev.sum();
  if (tr <= 0.0) return 0.0;
  return shannon_entropy(RealVector(ev / tr));
}

double von_neumann_entropy(const DensityMatrix& rho) { return shannon_entropy(rho.eigenvalues()); }

FunctionalValue relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("relative_entropy: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma.matrix());
  const RealVector& mu = es.eigenvalues();
  const Matrix& u = es.eigenvectors();
  // Diagonal of rho in sigma's eigenbasis.
  const RealVector w = (u.adjoint() * rho.matrix() * u).diagonal().real();
  double cross = 0.0;  // Tr rho log2 sigma
  for (Eigen::Index a = 0; a < mu.size(); ++a) {
    if (mu(a) < kSupportThreshold) {
      if (w(a) > kSupportThreshold) return FunctionalValue::infinite();
      continue;
    }
    cross += w(a) * std::log2(mu(a));
  }
  const double value = -von_neumann_entropy(rho) - cross;
  return FunctionalValue::finite(std::max(value, 0.0));
}

double mutual_information(const DensityMatrix& rho) {
  if (rho.dims().size() != 2) throw std::invalid_argument("mutual_information: state must be bipartite");
  return von_neumann_entropy(partial_trace(rho, {0})) + von_neumann_entropy(partial_trace(rho, {1})) -
         von_neumann_entropy(rho);
}

double conditional_entropy(const DensityMatrix& rho) {
  if (rho.dims().size() != 2) throw std::invalid_argument("conditional_entropy: state must be bipartite");
  return von_neumann_entropy(rho) - von_neumann_entropy(partial_trace(rho, {1}));
}

// ---------------------------------------------------------------------------

ClassicalJoint::ClassicalJoint(int nx, int ny, int ne, std::vector<double> p)
    : nx_(nx), ny_(ny), ne_(ne), p_(std::move(p)) {
  if (nx < 1 || ny < 1 || ne < 1) throw std::invalid_argument("ClassicalJoint: alphabet sizes must be positive");
  if (p_.size() != static_cast<std::size_t>(nx) * ny * ne)
    throw std::invalid_argument("ClassicalJoint: table size does not match alphabets");
  double total = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw std::invalid_argument("ClassicalJoint: negative probability");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("ClassicalJoint: probabilities do not sum to 1");
}

double conditional_mutual_information(const ClassicalJoint& j) {
  // I(X;Y|E) = H(XE) + H(YE) - H(XYE) - H(E)
  std::vector<double> xe(j.nx() * j.ne(), 0.0), ye(j.ny() * j.ne(), 0.0), e(j.ne(), 0.0);
  for (int x = 0; x < j.nx(); ++x)
    for (int y = 0; y < j.ny(); ++y)
      for (int k = 0; k < j.ne(); ++k) {
        const double p = j(x, y, k);
        xe[x * j.ne() + k] += p;
        ye[y * j.ne() + k] += p;
        e[k] += p;
      }
  const double v = shannon_entropy(xe) + shannon_entropy(ye) - shannon_entropy(j.table()) - shannon_entropy(e);
  return std::max(v, 0.0);
}

double mutual_information(const ClassicalJoint& j) {
  std::vector<double> xy(j.nx() * j.ny(), 0.0), x(j.nx(), 0.0), y(j.ny(), 0.0);
  for (int a = 0; a < j.nx(); ++a)
    for (int b = 0; b < j.ny(); ++b)
      for (int k = 0; k < j.ne(); ++k) {
        const double p = j(a, b, k);
        xy[a * j.ny() + b] += p;
        x[a] += p;
        y[b] += p;
      }
  return std::max(shannon_entropy(x) + shannon_entropy(y) - shannon_entropy(xy), 0.0);
}

// ---------------------------------------------------------------------------

double EntropicForm::evaluate(const Matrix& rho, const Dims& dims) const {
  double v = constant;
  for (const auto& t : terms) {
    if (t.keep.empty()) {
      v += t.coefficient * entropy_of_psd(rho);
    } else {
      v += t.coefficient * entropy_of_psd(partial_trace(rho, dims, t.keep));
    }
  }
  return v;
}

Functional::Functional(std::string name, Evaluator eval, double subextensivity)
    : name_(std::move(name)), eval_(std::move(eval)), subextensivity_(subextensivity) {}

Functional Functional::entropic(std::string name, EntropicForm form, double subextensivity) {
  Functional f(
      std::move(name),
      [form](const DensityMatrix& rho) { return FunctionalValue::finite(form.evaluate(rho.matrix(), rho.dims())); },
      subextensivity);
  f.form_ = std::move(form);
  return f;
}

namespace functionals {

Functional entropy() { return Functional::entropic("S", EntropicForm{0.0, {{1.0, {}}}}, 1.0); }

Functional reduced_entropy(int factor) {
  return Functional::entropic(factor == 0 ? "S_A" : (factor == 1 ? "S_B" : "S_" + std::to_string(factor)),
                              EntropicForm{0.0, {{1.0, {factor}}}}, 1.0);
}

Functional mutual_information() {
  return Functional::entropic("I_M", EntropicForm{0.0, {{1.0, {0}}, {1.0, {1}}, {-1.0, {}}}}, 1.0);
}

Functional conditional_entropy() {
  return Functional::entropic("S_A|B", EntropicForm{0.0, {{1.0, {}}, {-1.0, {1}}}}, 1.0);
}

Functional constant(double c) {
  return Functional::entropic("const", EntropicForm{c, {}}, c == 0.0 ? 0.0 : std::abs(c));
}

std::optional<Functional> by_name(const std::string& id) {
  if (id == "S") return entropy();
  if (id == "S_A") return reduced_entropy(0);
  if (id == "S_B") return reduced_entropy(1);
  if (id == "I_M") return mutual_information();
  if (id == "S_A|B") return conditional_entropy();
  if (id == "zero") return constant(0.0);
  return std::nullopt;
}

}  // namespace functionals

}  // namespace entrocheck
