#pragma once

// Ensemble reduction that keeps both the average state and the average functional value.

#include "entrocheck/qmat.hpp"

#include <vector>

namespace entrocheck {

/// An ensemble with one real value per member (typically f of that member).
class ValuedEnsemble {
 public:
  /// Throws std::invalid_argument when the value count differs from the member count.
  ValuedEnsemble(Ensemble ensemble, std::vector<double> values);

  const Ensemble& ensemble() const { return ensemble_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  /// sum_i p_i values_i
  double mean_value() const;

 private:
  Ensemble ensemble_;
  std::vector<double> values_;
};

/// Subset of the members with new weights such that sum_i q_i rho_i and sum_i q_i f_i are
/// unchanged, with at most d^2 + 1 members. Points are embedded as (Hermitian coordinates,
/// value) and affine dependencies among them are eliminated one member at a time.
ValuedEnsemble reduce_ensemble(const ValuedEnsemble& ve);

}  // namespace entrocheck
