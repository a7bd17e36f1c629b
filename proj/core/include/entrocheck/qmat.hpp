#pragma once

// Dense Hermitian linear algebra on small matrices: states, measurements,
// ensembles and the handful of matrix functions everything else is built on.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace entrocheck {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Ordered tensor-factor dimensions; the total dimension is their product.
using Dims = std::vector<int>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPositivityTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kCompletenessTol = 1e-10;
inline constexpr double kEnsembleWeightTol = 1e-10;

int total_dim(const Dims& dims);

/// Largest entrywise |m - m^dagger|.
double hermiticity_error(const Matrix& m);

/// (m + m^dagger) / 2
Matrix hermitian_part(const Matrix& m);

class HermitianOperator {
 public:
  /// Throws std::invalid_argument unless `m` is square and Hermitian within kHermitianTol.
  explicit HermitianOperator(Matrix m);

  /// Hermitian part of an arbitrary square matrix; never throws on asymmetry.
  static HermitianOperator from_hermitian_part(const Matrix& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  /// Ascending eigenvalues.
  RealVector eigenvalues() const;

  HermitianOperator operator-(const HermitianOperator& other) const;
  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator*(double s) const;

 private:
  struct Trusted {};
  HermitianOperator(Matrix m, Trusted) : m_(std::move(m)) {}
  Matrix m_;
};

class DensityMatrix {
 public:
  /// Validates: Hermitian within 1e-12, min eigenvalue >= -1e-10, trace within 1e-10 of 1,
  /// and product(dims) == rows. Throws std::invalid_argument otherwise.
  DensityMatrix(Matrix m, Dims dims);

  /// Hermitian part of `m` rescaled to unit trace, then validated.
  static DensityMatrix normalized(const Matrix& m, Dims dims);

  /// For outputs of trace-preserving maps applied to valid states. Takes the Hermitian
  /// part and skips the spectral check.
  static DensityMatrix trusted(const Matrix& m, Dims dims);

  static DensityMatrix maximally_mixed(Dims dims);
  static DensityMatrix basis_state(int index, Dims dims);
  static DensityMatrix diagonal(const RealVector& probs, Dims dims);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Dims& dims() const { return dims_; }
  const Matrix& matrix() const { return m_; }
  HermitianOperator as_operator() const;

  /// Ascending eigenvalues with entries in [-1e-10, 0) clipped to 0.
  RealVector eigenvalues() const;
  double purity() const;

  HermitianOperator operator-(const DensityMatrix& other) const;

 private:
  struct Trusted {};
  DensityMatrix(Matrix m, Dims dims, Trusted) : m_(std::move(m)), dims_(std::move(dims)) {}
  Matrix m_;
  Dims dims_;
};

/// Convex combination (1 - t) a + t b.
DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double t);

class PureStateVector {
 public:
  /// Validates |amplitudes|^2 within 1e-12 of 1 and product(dims) == size.
  PureStateVector(Vector amplitudes, Dims dims);
  static PureStateVector normalized(const Vector& amplitudes, Dims dims);

  int dim() const { return static_cast<int>(amps_.size()); }
  const Dims& dims() const { return dims_; }
  const Vector& amplitudes() const { return amps_; }
  DensityMatrix projector() const;

 private:
  Vector amps_;
  Dims dims_;
};

/// Measurement operators {A_i} with sum_i A_i^dagger A_i = I.
class Povm {
 public:
  /// Throws std::invalid_argument when empty, non-square, mixed sizes, or incomplete
  /// beyond kCompletenessTol.
  explicit Povm(std::vector<Matrix> elements);

  static Povm trivial(int dim);
  static Povm computational(int dim);

  int dim() const { return static_cast<int>(elements_.front().rows()); }
  int outcomes() const { return static_cast<int>(elements_.size()); }
  const std::vector<Matrix>& elements() const { return elements_; }
  /// A_i^dagger A_i
  Matrix effect(int i) const;
  double completeness_error() const;

 private:
  std::vector<Matrix> elements_;
};

class Ensemble {
 public:
  struct Member {
    double weight;
    DensityMatrix state;
  };

  /// Weights nonnegative and summing to 1 within 1e-10; all members share dims.
  explicit Ensemble(std::vector<Member> members);

  std::size_t size() const { return members_.size(); }
  const std::vector<Member>& members() const { return members_; }
  const Member& operator[](std::size_t i) const { return members_[i]; }
  const Dims& dims() const { return members_.front().state.dims(); }

  /// sum_k p_k rho_k
  DensityMatrix barycenter() const;

 private:
  std::vector<Member> members_;
};

// ---------------------------------------------------------------------------
// Operations

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// Reduced state on the factors listed in `keep` (any order; kept factors stay in
/// their original relative order). Throws on duplicate or out-of-range indices.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep);
/// Same on a raw matrix; no validation of the operator itself.
Matrix partial_trace(const Matrix& m, const Dims& dims, std::span<const int> keep);
/// Adjoint of partial_trace: places `op` on the kept factors and identity elsewhere.
Matrix embed_operator(const Matrix& op, const Dims& dims, std::span<const int> keep);

double trace_norm(const HermitianOperator& a);
/// ||a - b||_1 (not halved).
double trace_norm_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Root fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)). Throws on dimension mismatch.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Spectral purification on dims + {dim}: sum_j sqrt(l_j) |e_j>|j>.
PureStateVector purify(const DensityMatrix& rho);

struct JordanDecomposition {
  HermitianOperator positive;
  HermitianOperator negative;
};
JordanDecomposition jordan_decompose(const HermitianOperator& delta);

/// Swap operator V|a>|b> = |b>|a> on C^d (x) C^d.
Matrix flip_operator(int d);
/// (I - V) / (d^2 - d); throws for d < 2.
DensityMatrix antisymmetric_state(int d);

// Matrix functions for PSD / Hermitian inputs.
Matrix sqrt_psd(const Matrix& m);
/// Same shape as `a` with orthonormal columns: Q factor of the thin QR of `a`,
/// with the diagonal of R made real positive.
Matrix orthonormal_factor(const Matrix& a);

}  // namespace entrocheck
