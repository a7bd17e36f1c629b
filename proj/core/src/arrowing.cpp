#include "entrocheck/arrowing.hpp"

#include "entrocheck/random.hpp"
#include "stiefel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace entrocheck {

namespace {

constexpr double kLogFloor = 1e-14;
constexpr double kFiniteDifferenceStep = 1e-6;

struct Split {
  Dims x_dims;
  std::vector<int> x_keep;
  int dx;
  int de;
};

Split split_last(const Dims& dims) {
  if (dims.size() < 2) throw std::invalid_argument("state must have an ancilla factor (at least two factors)");
  Split s;
  s.x_dims.assign(dims.begin(), dims.end() - 1);
  s.x_keep.resize(s.x_dims.size());
  std::iota(s.x_keep.begin(), s.x_keep.end(), 0);
  s.dx = total_dim(s.x_dims);
  s.de = dims.back();
  return s;
}

// Tr_E[(I (x) A) rho (I (x) A)^dagger]
Matrix unnormalized_conditional(const DensityMatrix& rho, const Matrix& a, const Split& s) {
  const Matrix k = kron(Matrix::Identity(s.dx, s.dx), a);
  return partial_trace(Matrix(k * rho.matrix() * k.adjoint()), rho.dims(), s.x_keep);
}

Matrix log2_normalized(const Matrix& omega, double p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(omega) / p);
  RealVector l = es.eigenvalues();
  for (Eigen::Index i = 0; i < l.size(); ++i) l(i) = std::log2(std::max(l(i), kLogFloor));
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

std::vector<MeasurementOutcome> measure_ancilla(const DensityMatrix& rho_xe, const Povm& povm) {
  const Split s = split_last(rho_xe.dims());
  if (povm.dim() != s.de) throw std::invalid_argument("measure_ancilla: POVM dimension does not match the ancilla");
  std::vector<MeasurementOutcome> out;
  for (const Matrix& a : povm.elements()) {
    const Matrix tau = unnormalized_conditional(rho_xe, a, s);
    const double p = tau.trace().real();
    if (p < kOutcomeThreshold) continue;
    out.push_back({p, DensityMatrix::normalized(tau, s.x_dims)});
  }
  return out;
}

double avg_under_measurement(const DensityMatrix& rho_xe, const Povm& povm, const Functional& f) {
  double total = 0.0;
  for (const auto& o : measure_ancilla(rho_xe, povm)) {
    const FunctionalValue v = f(o.conditional);
    if (v.is_infinite) return std::numeric_limits<double>::infinity();
    total += o.probability * v.value;
  }
  return total;
}

// ---------------------------------------------------------------------------

MeasurementObjective::MeasurementObjective(const DensityMatrix& rho_xe, Functional f, int outcomes, bool rank_one,
                                           double sign)
    : f_(std::move(f)), outcomes_(outcomes), sign_(sign) {
  const Split s = split_last(rho_xe.dims());
  x_dims_ = s.x_dims;
  dx_ = s.dx;
  de_ = s.de;
  if (outcomes < 1) throw std::invalid_argument("MeasurementObjective: need at least one outcome");
  if (rank_one && outcomes < de_)
    throw std::invalid_argument("MeasurementObjective: rank-one POVMs need at least dE outcomes");
  block_rows_ = rank_one ? 1 : de_;

  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_xe.matrix());
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    const double l = es.eigenvalues()(j);
    if (l < kOutcomeThreshold) continue;
    const Vector phi = std::sqrt(l) * es.eigenvectors().col(j);
    Matrix m(dx_, de_);
    for (int x = 0; x < dx_; ++x)
      for (int e = 0; e < de_; ++e) m(x, e) = phi(x * de_ + e);
    factors_.push_back(std::move(m));
  }
}

std::vector<MeasurementObjective::Conditional> MeasurementObjective::conditionals(const Matrix& v) const {
  if (v.rows() != rows() || v.cols() != cols())
    throw std::invalid_argument("MeasurementObjective: encoded POVM has the wrong shape");
  std::vector<Conditional> out(static_cast<std::size_t>(outcomes_));
  for (int k = 0; k < outcomes_; ++k) {
    const Matrix at = v.block(k * block_rows_, 0, block_rows_, de_).transpose();
    Matrix tau = Matrix::Zero(dx_, dx_);
    for (const Matrix& phi : factors_) {
      const Matrix m = phi * at;
      tau.noalias() += m * m.adjoint();
    }
    const double p = tau.trace().real();
    out[static_cast<std::size_t>(k)] = {std::move(tau), p};
  }
  return out;
}

double MeasurementObjective::outcome_value(const Conditional& c) const {
  if (const auto& form = f_.entropic_form()) return c.p * form->evaluate(c.tau / c.p, x_dims_);
  const FunctionalValue v = f_(DensityMatrix::normalized(c.tau, x_dims_));
  return v.is_infinite ? std::numeric_limits<double>::infinity() : c.p * v.value;
}

// d[p f(tau / p)] / d tau for entropic forms: c0 I + sum_t c_t Lambda_t^dagger(-log2(omega_t / p)).
Matrix MeasurementObjective::outcome_gradient(const Conditional& c) const {
  const EntropicForm& form = *f_.entropic_form();
  Matrix g = form.constant * Matrix::Identity(dx_, dx_);
  for (const auto& t : form.terms) {
    if (t.keep.empty()) {
      g -= t.coefficient * log2_normalized(c.tau, c.p);
    } else {
      const Matrix omega = partial_trace(c.tau, x_dims_, t.keep);
      g -= t.coefficient * embed_operator(log2_normalized(omega, c.p), x_dims_, t.keep);
    }
  }
  return g;
}

double MeasurementObjective::value(const Matrix& v) const {
  double total = 0.0;
  for (const auto& c : conditionals(v)) {
    if (c.p < kOutcomeThreshold) continue;
    total += outcome_value(c);
  }
  return sign_ * total;
}

double MeasurementObjective::value_and_gradient(const Matrix& v, Matrix& grad) const {
  if (!f_.entropic_form()) {
    grad = gradient(v);
    return value(v);
  }
  const auto conds = conditionals(v);
  grad = Matrix::Zero(rows(), cols());
  double total = 0.0;
  for (int k = 0; k < outcomes_; ++k) {
    const Conditional& c = conds[static_cast<std::size_t>(k)];
    if (c.p < kOutcomeThreshold) continue;
    total += outcome_value(c);
    const Matrix g = outcome_gradient(c);
    const Matrix at = v.block(k * block_rows_, 0, block_rows_, de_).transpose();
    Matrix acc = Matrix::Zero(block_rows_, de_);
    for (const Matrix& phi : factors_) acc.noalias() += (phi * at).adjoint() * g * phi;
    grad.block(k * block_rows_, 0, block_rows_, de_) = 2.0 * sign_ * acc.conjugate();
  }
  return sign_ * total;
}

Matrix MeasurementObjective::gradient(const Matrix& v) const {
  if (f_.entropic_form()) {
    Matrix g;
    value_and_gradient(v, g);
    return g;
  }
  const double h = kFiniteDifferenceStep;
  Matrix g(rows(), cols());
  Matrix w = v;
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      const Complex orig = v(i, j);
      w(i, j) = orig + h;
      const double fr_plus = value(w);
      w(i, j) = orig - h;
      const double fr_minus = value(w);
      w(i, j) = orig + Complex(0.0, h);
      const double fi_plus = value(w);
      w(i, j) = orig - Complex(0.0, h);
      const double fi_minus = value(w);
      w(i, j) = orig;
      g(i, j) = Complex((fr_plus - fr_minus) / (2.0 * h), (fi_plus - fi_minus) / (2.0 * h));
    }
  }
  return g;
}

Povm MeasurementObjective::povm(const Matrix& v) const {
  std::vector<Matrix> els;
  els.reserve(static_cast<std::size_t>(outcomes_));
  for (int k = 0; k < outcomes_; ++k) {
    if (block_rows_ == de_) {
      els.push_back(v.block(k * de_, 0, de_, de_));
    } else {
      Matrix a = Matrix::Zero(de_, de_);
      a.row(0) = v.row(k);
      els.push_back(std::move(a));
    }
  }
  return Povm(std::move(els));
}

Matrix MeasurementObjective::encode(const Povm& povm) const {
  if (povm.dim() != de_) throw std::invalid_argument("MeasurementObjective::encode: POVM dimension mismatch");
  if (povm.outcomes() > outcomes_) throw std::invalid_argument("MeasurementObjective::encode: too many outcomes");
  Matrix v = Matrix::Zero(rows(), cols());
  for (int k = 0; k < povm.outcomes(); ++k) {
    if (block_rows_ == de_) {
      v.block(k * de_, 0, de_, de_) = povm.elements()[static_cast<std::size_t>(k)];
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(povm.effect(k)));
      const RealVector& l = es.eigenvalues();
      if (de_ > 1 && l(de_ - 2) > 1e-10)
        throw std::invalid_argument("MeasurementObjective::encode: POVM element is not rank one");
      v.row(k) = std::sqrt(std::max(l(de_ - 1), 0.0)) * es.eigenvectors().col(de_ - 1).adjoint();
    }
  }
  return v;
}

// ---------------------------------------------------------------------------

int default_outcome_budget(const DensityMatrix& rho_xe) {
  const int de = split_last(rho_xe.dims()).de;
  return de * de + 1;
}

namespace {

ArrowResult search(const DensityMatrix& rho, const Functional& f, int m, bool rank_one, double sign,
                   const ArrowOptions& opts) {
  if (m <= 0) m = default_outcome_budget(rho);
  if (opts.restarts < 1 || opts.max_iterations < 0 || !(opts.tolerance > 0.0))
    throw std::invalid_argument("arrow: invalid optimizer options");
  const MeasurementObjective obj(rho, f, m, rank_one, sign);
  const int de = obj.cols();

  std::vector<Matrix> starts;
  if (!rank_one) starts.push_back(obj.encode(Povm::trivial(de)));
  if (m >= de) starts.push_back(obj.encode(Povm::computational(de)));
  for (const Povm& w : opts.warm_starts) starts.push_back(obj.encode(w));
  const int structured = static_cast<int>(starts.size());
  for (int r = structured; r < opts.restarts; ++r) {
    Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(r));
    starts.push_back(random_isometry(rng, obj.rows(), de));
  }

  const detail::StiefelProblem problem{
      [&obj](const Matrix& v) { return obj.value(v); },
      [&obj](const Matrix& v, Matrix& g) { return obj.value_and_gradient(v, g); }};
  const detail::StiefelOptions sopts{opts.max_iterations, opts.tolerance};

  Matrix best_v;
  double best = std::numeric_limits<double>::infinity();
  bool best_converged = false;
  for (const Matrix& v0 : starts) {
    detail::StiefelRun run = detail::minimize_on_stiefel(problem, v0, sopts);
    if (run.value < best) {
      best = run.value;
      best_v = std::move(run.v);
      best_converged = run.converged;
    }
  }

  Povm povm = obj.povm(best_v);
  const double value = avg_under_measurement(rho, povm, f);
  return {value, std::move(povm), m, best_converged, static_cast<int>(starts.size())};
}

}  // namespace

ArrowResult arrow_down(const DensityMatrix& rho_xe, const Functional& f, int m, const ArrowOptions& opts) {
  return search(rho_xe, f, m, false, 1.0, opts);
}

ArrowResult arrow_up(const DensityMatrix& rho_xe, const Functional& f, int m, const ArrowOptions& opts) {
  return search(rho_xe, f, m, false, -1.0, opts);
}

ArrowResult arrow_down_cpl(const DensityMatrix& rho_xe, const Functional& f, int m, const ArrowOptions& opts) {
  return search(rho_xe, f, m, true, 1.0, opts);
}

std::vector<ArrowResult> arrow_down_sweep(const DensityMatrix& rho_xe, const Functional& f, int m_max,
                                          const ArrowOptions& opts) {
  if (m_max < 1) throw std::invalid_argument("arrow_down_sweep: budget must be at least 1");
  std::vector<ArrowResult> out;
  for (int m = 1; m <= m_max; ++m) {
    ArrowOptions o = opts;
    if (!out.empty()) o.warm_starts.push_back(out.back().best_povm);
    ArrowResult r = arrow_down(rho_xe, f, m, o);
    if (!out.empty() && r.value > out.back().value) {
      r.value = out.back().value;
      r.best_povm = Povm(out.back().best_povm);
    }
    out.push_back(std::move(r));
  }
  return out;
}

ArrowResult classical_correlation_backward(const DensityMatrix& rho_ab, int m, const ArrowOptions& opts) {
  if (rho_ab.dims().size() != 2) throw std::invalid_argument("classical_correlation_backward: state must be bipartite");
  const double sa = von_neumann_entropy(partial_trace(rho_ab, {0}));
  const Functional f = Functional::entropic("S(rho_A)-S", EntropicForm{sa, {{-1.0, {}}}}, 1.0);
  return arrow_up(rho_ab, f, m, opts);
}

// ---------------------------------------------------------------------------

TraceDistanceFacts measurement_facts(const DensityMatrix& rho, const DensityMatrix& sigma, const Povm& povm) {
  if (rho.dims() != sigma.dims()) throw std::invalid_argument("measurement_facts: dims mismatch");
  const Split s = split_last(rho.dims());
  if (povm.dim() != s.de) throw std::invalid_argument("measurement_facts: POVM dimension does not match the ancilla");
  TraceDistanceFacts facts{trace_norm_distance(rho, sigma), 0.0, 0.0};
  for (const Matrix& a : povm.elements()) {
    const Matrix tr = unnormalized_conditional(rho, a, s);
    const Matrix ts = unnormalized_conditional(sigma, a, s);
    const double p = tr.trace().real();
    const double q = ts.trace().real();
    facts.outcome_distance += std::abs(p - q);
    if (p < kOutcomeThreshold) continue;
    double ek = 2.0;
    if (q >= kOutcomeThreshold) ek = trace_norm(HermitianOperator::from_hermitian_part(tr / p - ts / q));
    facts.weighted_conditional_distance += p * ek;
  }
  return facts;
}

BoundRecord measurement_swap_record(long trial, const DensityMatrix& rho, const DensityMatrix& sigma,
                                    const Povm& povm, const Functional& f, const ContinuitySpec& spec,
                                    double slack) {
  const Split s = split_last(rho.dims());
  const double eps = trace_norm_distance(rho, sigma);
  const double lhs = std::abs(avg_under_measurement(rho, povm, f) - avg_under_measurement(sigma, povm, f));
  const ContinuitySpec lifted{2.0 * spec.K + f.subextensivity(), spec.correction};
  return make_record(trial, s.dx, eps, lhs, lifted.bound(eps, s.dx), slack);
}

}  // namespace entrocheck
