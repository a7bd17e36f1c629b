#include "entrocheck/roof.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace entrocheck {

namespace {

constexpr double kPureThreshold = 1e-12;

bool is_pure(const DensityMatrix& rho) { return rho.purity() > 1.0 - kPureThreshold; }

RoofResult trivial_roof(const DensityMatrix& rho, const Functional& f) {
  const FunctionalValue v = f(rho);
  return {v.is_infinite ? std::numeric_limits<double>::infinity() : v.value, Ensemble({{1.0, rho}}), true};
}

struct PureSearch {
  RoofResult roof;
  Povm povm;
};

PureSearch pure_search(const PureStateVector& purification, const Functional& f, int m, const ArrowOptions& opts) {
  if (purification.dims().size() < 2)
    throw std::invalid_argument("pure_convex_roof: purification needs a purifying factor");
  const DensityMatrix rho_xe = purification.projector();
  const int r = purification.dims().back();
  if (m <= 0) m = r * r;
  const ArrowResult a = arrow_down_cpl(rho_xe, f, m, opts);
  Ensemble ens = ensemble_from_measurement(rho_xe, a.best_povm);
  return {{a.value, std::move(ens), a.converged}, a.best_povm};
}

}  // namespace

PureStateVector minimal_purification(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = es.eigenvalues().size() - 1; j >= 0; --j)
    if (es.eigenvalues()(j) > 1e-14) kept.push_back(j);
  const int d = rho.dim();
  const int r = static_cast<int>(kept.size());
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(d) * r);
  for (int j = 0; j < r; ++j) {
    const Eigen::Index idx = kept[static_cast<std::size_t>(j)];
    const double amp = std::sqrt(es.eigenvalues()(idx));
    for (int x = 0; x < d; ++x) psi(x * r + j) = amp * es.eigenvectors()(x, idx);
  }
  Dims dims = rho.dims();
  dims.push_back(r);
  return PureStateVector::normalized(psi, std::move(dims));
}

double ensemble_average(const Ensemble& ensemble, const Functional& f) {
  double total = 0.0;
  for (const auto& m : ensemble.members()) {
    const FunctionalValue v = f(m.state);
    if (v.is_infinite) return std::numeric_limits<double>::infinity();
    total += m.weight * v.value;
  }
  return total;
}

Ensemble eigen_ensemble(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  std::vector<Ensemble::Member> members;
  double total = 0.0;
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    const double l = es.eigenvalues()(j);
    if (l <= 1e-14) continue;
    members.push_back({l, PureStateVector::normalized(es.eigenvectors().col(j), rho.dims()).projector()});
    total += l;
  }
  for (auto& m : members) m.weight /= total;
  return Ensemble(std::move(members));
}

Ensemble ensemble_from_measurement(const DensityMatrix& rho_xe, const Povm& povm) {
  std::vector<MeasurementOutcome> outcomes = measure_ancilla(rho_xe, povm);
  double total = 0.0;
  for (const auto& o : outcomes) total += o.probability;
  std::vector<Ensemble::Member> members;
  members.reserve(outcomes.size());
  for (auto& o : outcomes) members.push_back({o.probability / total, std::move(o.conditional)});
  return Ensemble(std::move(members));
}

RoofResult pure_convex_roof(const DensityMatrix& rho, const Functional& f, int m, const ArrowOptions& opts) {
  if (is_pure(rho)) return trivial_roof(rho, f);
  return pure_search(minimal_purification(rho), f, m, opts).roof;
}

RoofResult pure_convex_roof(const PureStateVector& purification, const Functional& f, int m,
                            const ArrowOptions& opts) {
  return pure_search(purification, f, m, opts).roof;
}

RoofResult mixed_convex_roof(const DensityMatrix& rho, const Functional& f, int m, const ArrowOptions& opts) {
  if (is_pure(rho)) return trivial_roof(rho, f);
  const PureStateVector purification = minimal_purification(rho);
  const int r = purification.dims().back();
  if (m <= 0) m = r * r + 1;
  ArrowOptions o = opts;
  if (m >= r) {
    const PureSearch pure = pure_search(purification, f, std::max(m - 1, r), opts);
    if (pure.povm.outcomes() <= m) o.warm_starts.push_back(pure.povm);
  }
  const DensityMatrix rho_xe = purification.projector();
  const ArrowResult a = arrow_down(rho_xe, f, m, o);
  return {a.value, ensemble_from_measurement(rho_xe, a.best_povm), a.converged};
}

RoofResult entanglement_of_formation(const DensityMatrix& rho_ab, int m, const ArrowOptions& opts) {
  if (rho_ab.dims().size() != 2) throw std::invalid_argument("entanglement_of_formation: state must be bipartite");
  return pure_convex_roof(rho_ab, functionals::reduced_entropy(0), m, opts);
}

// ---------------------------------------------------------------------------

double tripartite_E(const DensityMatrix& rho_abc, const ConvexSetSpec& set, const RelDistOptions& opts) {
  if (rho_abc.dims().size() != 3) throw std::invalid_argument("tripartite_E: state must have three factors");
  return rel_entropy_distance(partial_trace(rho_abc, {0, 1}), set, opts).value +
         von_neumann_entropy(partial_trace(rho_abc, {2}));
}

Functional tripartite_functional(const ConvexSetSpec& set, const RelDistOptions& opts) {
  return Functional(
      "E_ABC", [set, opts](const DensityMatrix& rho) { return FunctionalValue::finite(tripartite_E(rho, set, opts)); },
      1.0);
}

RoofResult tripartite_E_roof(const DensityMatrix& rho_abc, const ConvexSetSpec& set, int m,
                             const ArrowOptions& arrow_opts, const RelDistOptions& reldist_opts) {
  return pure_convex_roof(rho_abc, tripartite_functional(set, reldist_opts), m, arrow_opts);
}

// ---------------------------------------------------------------------------

RoofGapRecord roof_gap_antisymmetric(int d, const ArrowOptions& opts) {
  const DensityMatrix rho = antisymmetric_state(d);
  const Functional im = functionals::mutual_information();
  RoofGapRecord rec;
  rec.d = d;
  rec.pure_roof = pure_convex_roof(rho, im, 0, opts).value;
  rec.twice_formation = 2.0 * entanglement_of_formation(rho, 0, opts).value;
  rec.mixed_roof = mixed_convex_roof(rho, im, 0, opts).value;
  rec.mixed_upper_bound = std::log2(2.0 * d / (d - 1.0));
  rec.gap = rec.pure_roof - rec.mixed_roof;
  return rec;
}

BoundRecord roof_continuity_record(long trial, const DensityMatrix& rho1, const DensityMatrix& rho2,
                                   const ArrowOptions& opts, double slack) {
  const int d = rho1.dim();
  const double eps = trace_norm_distance(rho1, rho2);
  const RoofResult a = entanglement_of_formation(rho1, 0, opts);
  const RoofResult b = entanglement_of_formation(rho2, 0, opts);
  if (!a.converged || !b.converged) return skipped_record(trial, d, eps);
  const double t = std::sqrt(2.0 * eps);
  const ContinuitySpec spec{3.0, Correction::binary_entropy(1.0)};
  return make_record(trial, d, eps, std::abs(a.value - b.value), spec.bound(t, d), slack);
}

}  // namespace entrocheck
