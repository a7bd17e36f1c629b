#include "entrocheck/reldist.hpp"

#include "entrocheck/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace entrocheck {

ConvexSetSpec::ConvexSetSpec(std::vector<DensityMatrix> generators, bool append_maximally_mixed)
    : generators_(std::move(generators)) {
  if (generators_.empty()) throw std::invalid_argument("ConvexSetSpec: no generators");
  const Dims& dims = generators_.front().dims();
  for (const auto& g : generators_)
    if (g.dims() != dims) throw std::invalid_argument("ConvexSetSpec: generators differ in dims");
  const DensityMatrix omega = DensityMatrix::maximally_mixed(dims);
  const bool has_omega = std::any_of(generators_.begin(), generators_.end(), [&](const DensityMatrix& g) {
    return (g.matrix() - omega.matrix()).cwiseAbs().maxCoeff() <= 1e-10;
  });
  if (!has_omega) {
    if (!append_maximally_mixed)
      throw std::invalid_argument("ConvexSetSpec: maximally mixed state missing and appending disabled");
    generators_.push_back(omega);
    appended_ = true;
  }
}

Matrix ConvexSetSpec::point(const RealVector& weights) const {
  if (weights.size() != static_cast<Eigen::Index>(generators_.size()))
    throw std::invalid_argument("ConvexSetSpec::point: weight count mismatch");
  Matrix s = Matrix::Zero(dim(), dim());
  for (std::size_t j = 0; j < generators_.size(); ++j) s += weights(static_cast<Eigen::Index>(j)) * generators_[j].matrix();
  return s;
}

RealVector project_to_simplex(const RealVector& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += u[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

namespace {

constexpr double kEigenFloor = 1e-15;
constexpr double kDegenerateGap = 1e-8;

// Objective and gradient evaluator with the per-state pieces cached.
class Objective {
 public:
  Objective(const DensityMatrix& rho, const ConvexSetSpec& set)
      : rho_(rho.matrix()), set_(set), entropy_(von_neumann_entropy(rho)) {}

  std::size_t size() const { return set_.size(); }

  double value(const RealVector& w) const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(set_.point(w)));
    return value_from(es);
  }

  // Returns the value and writes the gradient; gradient is meaningful only when finite.
  double value_and_gradient(const RealVector& w, RealVector& grad) const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(set_.point(w)));
    const double v = value_from(es);
    grad.resize(static_cast<Eigen::Index>(size()));
    if (!std::isfinite(v)) {
      grad.setConstant(std::numeric_limits<double>::quiet_NaN());
      return v;
    }
    const RealVector& mu = es.eigenvalues();
    const Matrix& u = es.eigenvectors();
    const Eigen::Index d = mu.size();
    const Matrix rt = u.adjoint() * rho_ * u;
    Matrix lr(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      const double ma = std::max(mu(a), kEigenFloor);
      for (Eigen::Index b = 0; b < d; ++b) {
        const double mb = std::max(mu(b), kEigenFloor);
        double l;
        if (std::abs(ma - mb) < kDegenerateGap) {
          l = 2.0 / (ma + mb);
        } else {
          l = (std::log(ma) - std::log(mb)) / (ma - mb);
        }
        lr(a, b) = l * rt(a, b);
      }
    }
    // D log[sigma](rho), self-adjoint so it pairs directly with each generator.
    const Matrix k = u * lr * u.adjoint();
    for (std::size_t j = 0; j < size(); ++j) {
      const Matrix& s = set_.generators()[j].matrix();
      grad(static_cast<Eigen::Index>(j)) = -k.cwiseProduct(s.conjugate()).sum().real() / std::numbers::ln2;
    }
    return v;
  }

 private:
  double value_from(const Eigen::SelfAdjointEigenSolver<Matrix>& es) const {
    const RealVector& mu = es.eigenvalues();
    const Matrix& u = es.eigenvectors();
    const RealVector w = (u.adjoint() * rho_ * u).diagonal().real();
    double cross = 0.0;
    for (Eigen::Index a = 0; a < mu.size(); ++a) {
      if (mu(a) < kSupportThreshold) {
        if (w(a) > kSupportThreshold) return std::numeric_limits<double>::infinity();
        continue;
      }
      cross += w(a) * std::log2(mu(a));
    }
    return std::max(-entropy_ - cross, 0.0);
  }

  Matrix rho_;
  const ConvexSetSpec& set_;
  double entropy_;
};

struct Run {
  RealVector weights;
  double value;
  bool converged;
  long iterations;
};

Run projected_gradient(const Objective& obj, RealVector w, const RelDistOptions& opts) {
  constexpr double kArmijo = 1e-4;
  RealVector g;
  double f = obj.value_and_gradient(w, g);
  if (!std::isfinite(f)) return {w, f, false, 0};
  double step = 1.0;
  long it = 0;
  for (; it < opts.max_iterations; ++it) {
    const double pg = (project_to_simplex(w - g) - w).norm();
    if (pg < opts.tolerance) return {w, f, true, it};
    bool accepted = false;
    RealVector w_next;
    double f_next = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      w_next = project_to_simplex(w - step * g);
      f_next = obj.value(w_next);
      if (std::isfinite(f_next) && f_next <= f + kArmijo * g.dot(w_next - w)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return {w, f, false, it};
    RealVector g_next;
    f_next = obj.value_and_gradient(w_next, g_next);
    const RealVector s = w_next - w;
    const RealVector y = g_next - g;
    const double sy = s.dot(y);
    step = sy > 1e-300 ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : std::min(step * 2.0, 1e12);
    const bool stalled = s.norm() < 1e-15;
    w = std::move(w_next);
    g = std::move(g_next);
    f = f_next;
    if (stalled) return {w, f, false, it + 1};
  }
  return {w, f, false, it};
}

}  // namespace

FunctionalValue relative_entropy_objective(const DensityMatrix& rho, const ConvexSetSpec& set,
                                           const RealVector& weights) {
  if (rho.dims() != set.dims()) throw std::invalid_argument("relative_entropy_objective: dims mismatch");
  const double v = Objective(rho, set).value(weights);
  return std::isfinite(v) ? FunctionalValue::finite(v) : FunctionalValue::infinite();
}

RealVector objective_gradient(const DensityMatrix& rho, const RealVector& weights, const ConvexSetSpec& set) {
  if (rho.dims() != set.dims()) throw std::invalid_argument("objective_gradient: dims mismatch");
  RealVector g;
  const double v = Objective(rho, set).value_and_gradient(weights, g);
  if (!std::isfinite(v)) throw std::domain_error("objective_gradient: hull point does not cover the support of rho");
  return g;
}

RelDistResult rel_entropy_distance(const DensityMatrix& rho, const ConvexSetSpec& set, const RelDistOptions& opts) {
  if (rho.dims() != set.dims()) throw std::invalid_argument("rel_entropy_distance: dims mismatch");
  if (opts.restarts < 1 || opts.max_iterations < 1 || !(opts.tolerance > 0.0))
    throw std::invalid_argument("rel_entropy_distance: invalid optimizer options");
  const Objective obj(rho, set);
  const auto n = static_cast<Eigen::Index>(set.size());

  RealVector best_w = RealVector::Zero(n);
  double best = std::numeric_limits<double>::infinity();
  bool any_converged = n == 1;
  long iterations = 0;

  // Vertices give exact values and cover optima sitting on a face where the hull point
  // is singular.
  for (Eigen::Index j = 0; j < n; ++j) {
    RealVector e = RealVector::Zero(n);
    e(j) = 1.0;
    const double v = obj.value(e);
    if (v < best) {
      best = v;
      best_w = e;
    }
  }

  if (n > 1) {
    for (int r = 0; r < opts.restarts; ++r) {
      RealVector start;
      if (r == 0) {
        start = RealVector::Constant(n, 1.0 / static_cast<double>(n));
      } else {
        Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(r));
        start = random_simplex_point(rng, static_cast<int>(n));
      }
      const Run run = projected_gradient(obj, start, opts);
      iterations += run.iterations;
      any_converged = any_converged || run.converged;
      if (run.value < best) {
        best = run.value;
        best_w = run.weights;
      }
    }
  }

  return {best, best_w, DensityMatrix::normalized(set.point(best_w), set.dims()), any_converged, iterations};
}

// ---------------------------------------------------------------------------

BoundRecord check_donation_inequality(const Ensemble& ensemble, const ConvexSetSpec& set, const RelDistOptions& opts,
                                      double slack, long trial) {
  const DensityMatrix mean = ensemble.barycenter();
  bool reliable = true;
  double avg_e = 0.0;
  double avg_s = 0.0;
  for (const auto& m : ensemble.members()) {
    const RelDistResult r = rel_entropy_distance(m.state, set, opts);
    reliable = reliable && r.converged;
    avg_e += m.weight * r.value;
    avg_s += m.weight * von_neumann_entropy(m.state);
  }
  const RelDistResult rm = rel_entropy_distance(mean, set, opts);
  reliable = reliable && rm.converged;
  if (!reliable) return skipped_record(trial, mean.dim(), 0.0);
  return make_record(trial, mean.dim(), 0.0, avg_e - rm.value, von_neumann_entropy(mean) - avg_s, slack);
}

BoundRecord check_lemma1(const DensityMatrix& rho, const DensityMatrix& sigma, double delta,
                         const ConvexSetSpec& set, const RelDistOptions& opts, double slack, long trial) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::domain_error("check_lemma1: delta outside [0, 1]");
  const int d = rho.dim();
  const RelDistResult a = rel_entropy_distance(mix(rho, sigma, delta), set, opts);
  const RelDistResult b = rel_entropy_distance(rho, set, opts);
  if (!a.converged || !b.converged) return skipped_record(trial, d, delta);
  const double rhs = 2.0 * delta * std::log2(static_cast<double>(d)) + binary_entropy(delta);
  return make_record(trial, d, delta, std::abs(a.value - b.value), rhs, slack);
}

BoundRecord check_lemma2(const DensityMatrix& rho, const DensityMatrix& sigma, const ConvexSetSpec& set,
                         const RelDistOptions& opts, double slack, long trial) {
  const int d = rho.dim();
  const double eps = trace_norm_distance(rho, sigma);
  const RelDistResult a = rel_entropy_distance(rho, set, opts);
  const RelDistResult b = rel_entropy_distance(sigma, set, opts);
  if (!a.converged || !b.converged) return skipped_record(trial, d, eps);
  const ContinuitySpec spec{4.0, Correction::binary_entropy(2.0)};
  return make_record(trial, d, eps, std::abs(a.value - b.value), spec.bound(eps, d), slack);
}

}  // namespace entrocheck
