#pragma once

// Convex roofs over decompositions of a state, computed as measurement optimizations on a
// purification: measuring the purifying system with rank-one elements yields exactly the
// pure decompositions, general elements yield all decompositions.

#include "entrocheck/arrowing.hpp"
#include "entrocheck/continuity.hpp"
#include "entrocheck/functionals.hpp"
#include "entrocheck/qmat.hpp"
#include "entrocheck/reldist.hpp"

namespace entrocheck {

struct RoofResult {
  double value;
  Ensemble best_ensemble;
  bool converged;
};

/// Purification on dims + {r}, r = rank(rho): sum_j sqrt(l_j) |e_j>|j> over the nonzero
/// eigenvalues (those above 1e-14).
PureStateVector minimal_purification(const DensityMatrix& rho);

/// sum_k p_k f(rho_k) for an ensemble.
double ensemble_average(const Ensemble& ensemble, const Functional& f);

/// Spectral decomposition of rho as a pure-state ensemble (zero weights dropped).
Ensemble eigen_ensemble(const DensityMatrix& rho);

/// Ensemble induced by measuring the last factor of a pure state with `povm`.
Ensemble ensemble_from_measurement(const DensityMatrix& rho_xe, const Povm& povm);

/// inf over pure decompositions {p_k, psi_k} of sum_k p_k f(psi_k), searched over rank-one
/// measurements of a purification with at most m outcomes (m <= 0 selects r^2, at least r).
/// Pure inputs return f(rho) directly.
RoofResult pure_convex_roof(const DensityMatrix& rho, const Functional& f, int m = 0, const ArrowOptions& opts = {});

/// Same search on a caller-supplied purification (the last factor is the purifying system).
RoofResult pure_convex_roof(const PureStateVector& purification, const Functional& f, int m = 0,
                            const ArrowOptions& opts = {});

/// inf over all decompositions {p_k, rho_k} of sum_k p_k f(rho_k), searched over general
/// measurements of the minimal purification with at most m outcomes (m <= 0 selects
/// r^2 + 1). The trivial decomposition and the pure-roof optimum are both starting points,
/// so the value is at most min(f(rho), pure roof).
RoofResult mixed_convex_roof(const DensityMatrix& rho, const Functional& f, int m = 0,
                             const ArrowOptions& opts = {});

/// Pure convex roof of S_A.
RoofResult entanglement_of_formation(const DensityMatrix& rho_ab, int m = 0, const ArrowOptions& opts = {});

/// E(rho_ABC) = E_R^D(rho_AB) + S(rho_C), with D a convex set of AB states.
double tripartite_E(const DensityMatrix& rho_abc, const ConvexSetSpec& set, const RelDistOptions& opts = {});

/// tripartite_E as a functional handle (no entropic structure: roof searches use
/// finite-difference gradients).
Functional tripartite_functional(const ConvexSetSpec& set, const RelDistOptions& opts = {});

/// Pure convex roof of tripartite_E.
RoofResult tripartite_E_roof(const DensityMatrix& rho_abc, const ConvexSetSpec& set, int m = 0,
                             const ArrowOptions& arrow_opts = {}, const RelDistOptions& reldist_opts = {});

struct RoofGapRecord {
  int d;
  double pure_roof;
  /// 2 E_F, an independent route to the pure roof of I_M.
  double twice_formation;
  double mixed_roof;
  /// log2(2d / (d - 1)) = I_M of the antisymmetric state.
  double mixed_upper_bound;
  double gap;
};

/// Pure and mixed convex roofs of I_M on the antisymmetric state of C^d (x) C^d.
RoofGapRecord roof_gap_antisymmetric(int d, const ArrowOptions& opts = {});

/// |E_F(rho1) - E_F(rho2)| <= K1 t log2 dX + H(t), t = sqrt(2 eps), K1 = 3, dX = dA dB.
BoundRecord roof_continuity_record(long trial, const DensityMatrix& rho1, const DensityMatrix& rho2,
                                   const ArrowOptions& opts, double slack);

}  // namespace entrocheck
