#include "entrocheck/arrowing.hpp"

#include "entrocheck/random.hpp"
#include "entrocheck/reldist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace entrocheck {

StochasticChannel::StochasticChannel(int rows, int cols, std::vector<double> p)
    : rows_(rows), cols_(cols), p_(std::move(p)) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("StochasticChannel: sizes must be positive");
  if (p_.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("StochasticChannel: table size does not match shape");
  for (int e = 0; e < rows; ++e) {
    double total = 0.0;
    for (int b = 0; b < cols; ++b) {
      const double v = p_[static_cast<std::size_t>(e) * cols + b];
      if (!(v >= 0.0)) throw std::invalid_argument("StochasticChannel: negative entry");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("StochasticChannel: row does not sum to 1");
  }
}

StochasticChannel StochasticChannel::identity(int n) {
  std::vector<int> map(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) map[static_cast<std::size_t>(i)] = i;
  return deterministic(map, n);
}

StochasticChannel StochasticChannel::constant(int rows, int cols) {
  return deterministic(std::vector<int>(static_cast<std::size_t>(rows), 0), cols);
}

StochasticChannel StochasticChannel::deterministic(const std::vector<int>& map, int cols) {
  std::vector<double> p(map.size() * static_cast<std::size_t>(cols), 0.0);
  for (std::size_t e = 0; e < map.size(); ++e) {
    if (map[e] < 0 || map[e] >= cols) throw std::invalid_argument("StochasticChannel: output out of range");
    p[e * static_cast<std::size_t>(cols) + static_cast<std::size_t>(map[e])] = 1.0;
  }
  return StochasticChannel(static_cast<int>(map.size()), cols, std::move(p));
}

ClassicalJoint apply_channel(const ClassicalJoint& joint, const StochasticChannel& channel) {
  if (channel.rows() != joint.ne()) throw std::invalid_argument("apply_channel: channel input size mismatch");
  const int nb = channel.cols();
  std::vector<double> q(static_cast<std::size_t>(joint.nx()) * joint.ny() * nb, 0.0);
  for (int x = 0; x < joint.nx(); ++x)
    for (int y = 0; y < joint.ny(); ++y)
      for (int e = 0; e < joint.ne(); ++e) {
        const double p = joint(x, y, e);
        if (p == 0.0) continue;
        for (int b = 0; b < nb; ++b) q[(static_cast<std::size_t>(x) * joint.ny() + y) * nb + b] += p * channel(e, b);
      }
  // Re-normalize away summation rounding so the validating constructor accepts the table.
  double total = 0.0;
  for (double v : q) total += v;
  for (double& v : q) v /= total;
  return ClassicalJoint(joint.nx(), joint.ny(), nb, std::move(q));
}

namespace {

constexpr double kProbFloor = 1e-15;

// I(X;Y|Ebar) and its gradient in the channel entries, for a row-major |E| x |Ebar| table.
class ChannelObjective {
 public:
  explicit ChannelObjective(const ClassicalJoint& j) : j_(j), n_(j.ne()) {}

  int size() const { return n_; }

  double value(const RealVector& p) const { return conditional_mutual_information(apply(p)); }

  double value_and_gradient(const RealVector& p, RealVector& grad) const {
    const ClassicalJoint q = apply(p);
    const int nx = j_.nx(), ny = j_.ny(), nb = n_;
    std::vector<double> qxb(static_cast<std::size_t>(nx) * nb, 0.0), qyb(static_cast<std::size_t>(ny) * nb, 0.0),
        qb(static_cast<std::size_t>(nb), 0.0);
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y)
        for (int b = 0; b < nb; ++b) {
          const double v = q(x, y, b);
          qxb[static_cast<std::size_t>(x) * nb + b] += v;
          qyb[static_cast<std::size_t>(y) * nb + b] += v;
          qb[static_cast<std::size_t>(b)] += v;
        }
    auto lg = [](double v) { return std::log2(std::max(v, kProbFloor)); };
    grad = RealVector::Zero(static_cast<Eigen::Index>(n_) * nb);
    for (int e = 0; e < n_; ++e)
      for (int b = 0; b < nb; ++b) {
        double g = 0.0;
        for (int x = 0; x < nx; ++x)
          for (int y = 0; y < ny; ++y) {
            const double pe = j_(x, y, e);
            if (pe == 0.0) continue;
            g += pe * (-lg(qxb[static_cast<std::size_t>(x) * nb + b]) - lg(qyb[static_cast<std::size_t>(y) * nb + b]) +
                       lg(q(x, y, b)) + lg(qb[static_cast<std::size_t>(b)]));
          }
        grad(e * nb + b) = g;
      }
    return conditional_mutual_information(q);
  }

  StochasticChannel channel(const RealVector& p) const {
    std::vector<double> t(p.data(), p.data() + p.size());
    for (int e = 0; e < n_; ++e) {
      double total = 0.0;
      for (int b = 0; b < n_; ++b) total += t[static_cast<std::size_t>(e * n_ + b)];
      for (int b = 0; b < n_; ++b) t[static_cast<std::size_t>(e * n_ + b)] /= total;
    }
    return StochasticChannel(n_, n_, std::move(t));
  }

  RealVector project(const RealVector& p) const {
    RealVector out(p.size());
    for (int e = 0; e < n_; ++e) out.segment(e * n_, n_) = project_to_simplex(p.segment(e * n_, n_));
    return out;
  }

 private:
  ClassicalJoint apply(const RealVector& p) const { return apply_channel(j_, channel(p)); }

  const ClassicalJoint& j_;
  int n_;
};

struct Candidate {
  double value;
  RealVector table;
  bool converged;
};

Candidate descend(const ChannelObjective& obj, RealVector p, const IntrinsicOptions& opts) {
  constexpr double kArmijo = 1e-4;
  RealVector g;
  double f = obj.value_and_gradient(p, g);
  double step = 1.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    if ((obj.project(p - g) - p).norm() < opts.tolerance) return {f, p, true};
    bool accepted = false;
    RealVector next;
    double f_next = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      next = obj.project(p - step * g);
      f_next = obj.value(next);
      if (f_next <= f + kArmijo * g.dot(next - p)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return {f, p, false};
    RealVector g_next;
    f_next = obj.value_and_gradient(next, g_next);
    const RealVector s = next - p;
    const double sy = s.dot(g_next - g);
    step = sy > 1e-300 ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : std::min(step * 2.0, 1e12);
    p = std::move(next);
    g = std::move(g_next);
    f = f_next;
  }
  return {f, p, false};
}

RealVector table_of(const StochasticChannel& c) {
  return Eigen::Map<const RealVector>(c.table().data(), static_cast<Eigen::Index>(c.table().size()));
}

}  // namespace

IntrinsicResult intrinsic_information(const ClassicalJoint& joint, const IntrinsicOptions& opts) {
  if (opts.restarts < 0 || opts.max_iterations < 0) throw std::invalid_argument("intrinsic_information: invalid options");
  const int n = joint.ne();
  const ChannelObjective obj(joint);

  Candidate best{std::numeric_limits<double>::infinity(), RealVector(), false};
  auto consider = [&](const RealVector& table, bool exact) {
    const double v = obj.value(table);
    if (v < best.value) best = {v, table, exact};
  };

  consider(table_of(StochasticChannel::identity(n)), true);
  consider(table_of(StochasticChannel::constant(n, n)), true);
  if (n <= 4) {
    std::vector<int> map(static_cast<std::size_t>(n), 0);
    while (true) {
      consider(table_of(StochasticChannel::deterministic(map, n)), true);
      int i = 0;
      while (i < n && ++map[static_cast<std::size_t>(i)] == n) map[static_cast<std::size_t>(i++)] = 0;
      if (i == n) break;
    }
  }

  bool any_converged = false;
  for (int r = 0; r < opts.restarts; ++r) {
    RealVector start(static_cast<Eigen::Index>(n) * n);
    Rng rng = make_rng(opts.seed, static_cast<std::uint64_t>(r));
    for (int e = 0; e < n; ++e) start.segment(e * n, n) = random_simplex_point(rng, n);
    const Candidate c = descend(obj, start, opts);
    any_converged = any_converged || c.converged;
    if (c.value < best.value) best = c;
  }

  StochasticChannel channel = obj.channel(best.table);
  const double value = conditional_mutual_information(apply_channel(joint, channel));
  return {value, std::move(channel), any_converged || opts.restarts == 0 || best.converged};
}

}  // namespace entrocheck
