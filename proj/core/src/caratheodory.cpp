#include "entrocheck/caratheodory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace entrocheck {

ValuedEnsemble::ValuedEnsemble(Ensemble ensemble, std::vector<double> values)
    : ensemble_(std::move(ensemble)), values_(std::move(values)) {
  if (values_.size() != ensemble_.size())
    throw std::invalid_argument("ValuedEnsemble: one value per member required");
}

double ValuedEnsemble::mean_value() const {
  double v = 0.0;
  for (std::size_t i = 0; i < size(); ++i) v += ensemble_[i].weight * values_[i];
  return v;
}

namespace {

constexpr double kNullTol = 1e-11;

// Real coordinates of a Hermitian matrix (diagonal, then real and imaginary parts of the
// upper triangle), followed by the value.
RealVector embed(const Matrix& m, double value) {
  const Eigen::Index d = m.rows();
  RealVector x(d * d + 1);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) x(k++) = m(i, i).real();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      x(k++) = m(i, j).real();
      x(k++) = m(i, j).imag();
    }
  x(k) = value;
  return x;
}

}  // namespace

ValuedEnsemble reduce_ensemble(const ValuedEnsemble& ve) {
  const Ensemble& ens = ve.ensemble();
  std::vector<std::size_t> active;
  std::vector<double> w;
  for (std::size_t i = 0; i < ve.size(); ++i) {
    if (ens[i].weight <= 0.0) continue;
    active.push_back(i);
    w.push_back(ens[i].weight);
  }

  std::vector<RealVector> pts;
  pts.reserve(ve.size());
  for (std::size_t i = 0; i < ve.size(); ++i) pts.push_back(embed(ens[i].state.matrix(), ve.values()[i]));
  const Eigen::Index dim = pts.front().size();

  while (active.size() > 1) {
    const auto n = static_cast<Eigen::Index>(active.size());
    // Affine dependency: columns [x_i; 1], a null vector c gives sum c_i x_i = 0, sum c_i = 0.
    RealMatrix a(dim + 1, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      a.col(c).head(dim) = pts[active[static_cast<std::size_t>(c)]];
      a(dim, c) = 1.0;
    }
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > kNullTol * scale) ++rank;
    if (rank >= n) break;
    const RealVector c = svd.matrixV().col(n - 1);

    // Shift weights along -t c until the first one with positive c reaches zero.
    double t = std::numeric_limits<double>::infinity();
    Eigen::Index hit = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (c(i) > 1e-15) {
        const double r = w[static_cast<std::size_t>(i)] / c(i);
        if (r < t) {
          t = r;
          hit = i;
        }
      }
    }
    if (hit < 0) break;
    for (Eigen::Index i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] -= t * c(i);
    w[static_cast<std::size_t>(hit)] = 0.0;

    std::vector<std::size_t> next_active;
    std::vector<double> next_w;
    for (std::size_t i = 0; i < active.size(); ++i) {
      if (w[i] <= 0.0) continue;
      next_active.push_back(active[i]);
      next_w.push_back(w[i]);
    }
    active = std::move(next_active);
    w = std::move(next_w);
  }

  double total = 0.0;
  for (double x : w) total += x;
  std::vector<Ensemble::Member> members;
  std::vector<double> values;
  for (std::size_t i = 0; i < active.size(); ++i) {
    members.push_back({w[i] / total, ens[active[i]].state});
    values.push_back(ve.values()[active[i]]);
  }
  return ValuedEnsemble(Ensemble(std::move(members)), std::move(values));
}

}  // namespace entrocheck
