#pragma once

// Seeded sampling of states, pairs, isometries and measurements. Every campaign trial
// gets its own generator derived from (campaign seed, trial index), so results do not
// depend on how trials are scheduled.

#include "entrocheck/qmat.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <variant>

namespace entrocheck {

using Rng = std::mt19937_64;

struct HilbertSchmidtMixed {};
struct HaarPure {};
/// Pairs (rho, (1-t) rho + t tau) with t uniform in (0, radius]; their trace-norm
/// distance is at most 2 * radius.
struct Perturbation {
  double radius = 0.25;
};

using SamplingMeasure = std::variant<HilbertSchmidtMixed, HaarPure, Perturbation>;

struct RngSpec {
  std::uint64_t seed = 0;
  SamplingMeasure measure = HilbertSchmidtMixed{};

  /// Throws std::invalid_argument unless radius is in (0, 1] for Perturbation.
  void validate() const;
};

/// splitmix64 finalizer over (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

Rng make_rng(std::uint64_t seed, std::uint64_t stream);

Matrix complex_gaussian(Rng& rng, int rows, int cols);

/// Normalized G G^dagger with complex standard-normal G (dim x dim).
DensityMatrix random_hs_state(Rng& rng, const Dims& dims);
/// Induced measure: normalized G G^dagger with G of size dim x rank (rank 1 gives pure states).
DensityMatrix random_induced_state(Rng& rng, const Dims& dims, int rank);
PureStateVector random_pure_state(Rng& rng, const Dims& dims);
/// rows x cols matrix with orthonormal columns (rows >= cols), Haar-distributed.
Matrix random_isometry(Rng& rng, int rows, int cols);
Matrix random_unitary(Rng& rng, int dim);
/// Random measurement with `outcomes` Kraus operators on C^dim. When rank_one is set, each
/// element has rank one (requires outcomes >= dim).
Povm random_povm(Rng& rng, int dim, int outcomes, bool rank_one = false);
/// Point drawn uniformly from the probability simplex of the given size.
RealVector random_simplex_point(Rng& rng, int size);

/// Deterministic for a fixed spec. Perturbation measure returns the pair's base state,
/// drawn from the induced measure with a uniformly random rank.
DensityMatrix sample_state(const RngSpec& spec, const Dims& dims);
std::pair<DensityMatrix, DensityMatrix> sample_pair(const RngSpec& spec, const Dims& dims);

/// Same, drawing from an existing generator.
DensityMatrix sample_state(Rng& rng, const SamplingMeasure& measure, const Dims& dims);
std::pair<DensityMatrix, DensityMatrix> sample_pair(Rng& rng, const SamplingMeasure& measure,
                                                    const Dims& dims);

}  // namespace entrocheck
