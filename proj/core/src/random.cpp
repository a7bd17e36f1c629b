#include "entrocheck/random.hpp"

#include <cmath>
#include <type_traits>
#include <stdexcept>

namespace entrocheck {

void RngSpec::validate() const {
  if (const auto* p = std::get_if<Perturbation>(&measure)) {
    if (!(p->radius > 0.0 && p->radius <= 1.0))
      throw std::invalid_argument("RngSpec: perturbation radius must lie in (0, 1]");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) { return Rng(derive_seed(seed, stream)); }

Matrix complex_gaussian(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

DensityMatrix random_induced_state(Rng& rng, const Dims& dims, int rank) {
  const int d = total_dim(dims);
  if (rank < 1) throw std::invalid_argument("random_induced_state: rank must be positive");
  const Matrix g = complex_gaussian(rng, d, rank);
  return DensityMatrix::normalized(g * g.adjoint(), dims);
}

DensityMatrix random_hs_state(Rng& rng, const Dims& dims) {
  return random_induced_state(rng, dims, total_dim(dims));
}

PureStateVector random_pure_state(Rng& rng, const Dims& dims) {
  const Matrix g = complex_gaussian(rng, total_dim(dims), 1);
  return PureStateVector::normalized(g.col(0), dims);
}

Matrix random_isometry(Rng& rng, int rows, int cols) {
  if (rows < cols) throw std::invalid_argument("random_isometry: rows must be >= cols");
  return orthonormal_factor(complex_gaussian(rng, rows, cols));
}

Matrix random_unitary(Rng& rng, int dim) { return random_isometry(rng, dim, dim); }

Povm random_povm(Rng& rng, int dim, int outcomes, bool rank_one) {
  if (outcomes < 1) throw std::invalid_argument("random_povm: need at least one outcome");
  std::vector<Matrix> els;
  if (rank_one) {
    if (outcomes < dim) throw std::invalid_argument("random_povm: rank-one POVM needs outcomes >= dim");
    const Matrix w = random_isometry(rng, outcomes, dim);
    for (int k = 0; k < outcomes; ++k) {
      Matrix a = Matrix::Zero(dim, dim);
      a.row(0) = w.row(k);
      els.push_back(std::move(a));
    }
  } else {
    const Matrix v = random_isometry(rng, outcomes * dim, dim);
    for (int k = 0; k < outcomes; ++k) els.push_back(v.block(k * dim, 0, dim, dim));
  }
  return Povm(std::move(els));
}

RealVector random_simplex_point(Rng& rng, int size) {
  std::exponential_distribution<double> e(1.0);
  RealVector p(size);
  for (int i = 0; i < size; ++i) p(i) = e(rng);
  return p / p.sum();
}

DensityMatrix sample_state(Rng& rng, const SamplingMeasure& measure, const Dims& dims) {
  return std::visit(
      [&](const auto& m) -> DensityMatrix {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, HilbertSchmidtMixed>) {
          return random_hs_state(rng, dims);
        } else if constexpr (std::is_same_v<T, HaarPure>) {
          return random_pure_state(rng, dims).projector();
        } else {
          std::uniform_int_distribution<int> rank(1, total_dim(dims));
          return random_induced_state(rng, dims, rank(rng));
        }
      },
      measure);
}

std::pair<DensityMatrix, DensityMatrix> sample_pair(Rng& rng, const SamplingMeasure& measure,
                                                    const Dims& dims) {
  if (const auto* p = std::get_if<Perturbation>(&measure)) {
    DensityMatrix base = sample_state(rng, measure, dims);
    const DensityMatrix tau = random_pure_state(rng, dims).projector();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double t = p->radius * (1.0 - u(rng));  // (0, radius]
    DensityMatrix moved = mix(base, tau, t);
    return {std::move(base), std::move(moved)};
  }
  DensityMatrix a = sample_state(rng, measure, dims);
  DensityMatrix b = sample_state(rng, measure, dims);
  return {std::move(a), std::move(b)};
}

DensityMatrix sample_state(const RngSpec& spec, const Dims& dims) {
  spec.validate();
  Rng rng(spec.seed);
  return sample_state(rng, spec.measure, dims);
}

std::pair<DensityMatrix, DensityMatrix> sample_pair(const RngSpec& spec, const Dims& dims) {
  spec.validate();
  Rng rng(spec.seed);
  return sample_pair(rng, spec.measure, dims);
}

}  // namespace entrocheck
