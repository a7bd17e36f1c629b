#include "entrocheck/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace entrocheck {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_dims(const Dims& dims, Eigen::Index n) {
  require(!dims.empty(), "dims must be nonempty");
  for (int d : dims) require(d >= 1, "factor dimensions must be positive");
  require(total_dim(dims) == n, "product of dims does not match matrix size");
}

// Full-space index for every (kept multi-index, traced multi-index) pair.
struct FactorSplit {
  int kept_dim = 1;
  int traced_dim = 1;
  std::vector<int> index;  // index[a * traced_dim + t]
};

FactorSplit split_factors(const Dims& dims, std::span<const int> keep_in) {
  const int n = static_cast<int>(dims.size());
  std::vector<int> keep(keep_in.begin(), keep_in.end());
  std::sort(keep.begin(), keep.end());
  require(std::adjacent_find(keep.begin(), keep.end()) == keep.end(),
          "partial trace: duplicate subsystem index");
  for (int k : keep) require(k >= 0 && k < n, "partial trace: subsystem index out of range");

  std::vector<bool> kept(n, false);
  for (int k : keep) kept[k] = true;

  // Row-major strides: factor 0 is the most significant digit.
  std::vector<int> stride(n, 1);
  for (int f = n - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

  std::vector<int> kept_f, traced_f;
  for (int f = 0; f < n; ++f) (kept[f] ? kept_f : traced_f).push_back(f);

  FactorSplit s;
  for (int f : kept_f) s.kept_dim *= dims[f];
  for (int f : traced_f) s.traced_dim *= dims[f];

  auto offset = [&](const std::vector<int>& factors, int multi) {
    int off = 0;
    for (int i = static_cast<int>(factors.size()) - 1; i >= 0; --i) {
      const int f = factors[i];
      off += (multi % dims[f]) * stride[f];
      multi /= dims[f];
    }
    return off;
  };

  std::vector<int> kept_off(s.kept_dim), traced_off(s.traced_dim);
  for (int a = 0; a < s.kept_dim; ++a) kept_off[a] = offset(kept_f, a);
  for (int t = 0; t < s.traced_dim; ++t) traced_off[t] = offset(traced_f, t);

  s.index.resize(static_cast<std::size_t>(s.kept_dim) * s.traced_dim);
  for (int a = 0; a < s.kept_dim; ++a)
    for (int t = 0; t < s.traced_dim; ++t) s.index[a * s.traced_dim + t] = kept_off[a] + traced_off[t];
  return s;
}

Dims kept_dims(const Dims& dims, std::span<const int> keep) {
  std::vector<int> k(keep.begin(), keep.end());
  std::sort(k.begin(), k.end());
  Dims out;
  for (int f : k) out.push_back(dims[f]);
  if (out.empty()) out.push_back(1);
  return out;
}

}  // namespace

int total_dim(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

double hermiticity_error(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

// ---------------------------------------------------------------------------

HermitianOperator::HermitianOperator(Matrix m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols() && m_.rows() > 0, "HermitianOperator: matrix must be square");
  require(hermiticity_error(m_) <= kHermitianTol, "HermitianOperator: matrix is not Hermitian");
}

HermitianOperator HermitianOperator::from_hermitian_part(const Matrix& m) {
  require(m.rows() == m.cols() && m.rows() > 0, "HermitianOperator: matrix must be square");
  return HermitianOperator(hermitian_part(m), Trusted{});
}

RealVector HermitianOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  require(dim() == o.dim(), "HermitianOperator: dimension mismatch");
  return HermitianOperator(m_ - o.m_, Trusted{});
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  require(dim() == o.dim(), "HermitianOperator: dimension mismatch");
  return HermitianOperator(m_ + o.m_, Trusted{});
}

HermitianOperator HermitianOperator::operator*(double s) const {
  return HermitianOperator(m_ * s, Trusted{});
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix m, Dims dims) : m_(std::move(m)), dims_(std::move(dims)) {
  require(m_.rows() == m_.cols() && m_.rows() > 0, "DensityMatrix: matrix must be square");
  check_dims(dims_, m_.rows());
  require(hermiticity_error(m_) <= kHermitianTol, "DensityMatrix: matrix is not Hermitian");
  require(std::abs(m_.trace() - Complex(1.0)) <= kTraceTol, "DensityMatrix: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -kPositivityTol, "DensityMatrix: matrix is not positive");
}

DensityMatrix DensityMatrix::normalized(const Matrix& m, Dims dims) {
  Matrix h = hermitian_part(m);
  const double tr = h.trace().real();
  require(tr > 0.0, "DensityMatrix::normalized: nonpositive trace");
  return DensityMatrix(h / tr, std::move(dims));
}

DensityMatrix DensityMatrix::trusted(const Matrix& m, Dims dims) {
  return DensityMatrix(hermitian_part(m), std::move(dims), Trusted{});
}

DensityMatrix DensityMatrix::maximally_mixed(Dims dims) {
  const int n = total_dim(dims);
  return DensityMatrix(Matrix::Identity(n, n) / static_cast<double>(n), std::move(dims), Trusted{});
}

DensityMatrix DensityMatrix::basis_state(int index, Dims dims) {
  const int n = total_dim(dims);
  require(index >= 0 && index < n, "basis_state: index out of range");
  Matrix m = Matrix::Zero(n, n);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m), std::move(dims), Trusted{});
}

DensityMatrix DensityMatrix::diagonal(const RealVector& probs, Dims dims) {
  Matrix m = probs.cast<Complex>().asDiagonal();
  return DensityMatrix(std::move(m), std::move(dims));
}

HermitianOperator DensityMatrix::as_operator() const { return HermitianOperator::from_hermitian_part(m_); }

RealVector DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues();
  for (auto& v : ev) {
    if (v < 0.0 && v >= -kPositivityTol) v = 0.0;
  }
  return ev;
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

HermitianOperator DensityMatrix::operator-(const DensityMatrix& other) const {
  require(dim() == other.dim(), "DensityMatrix: dimension mismatch");
  return HermitianOperator::from_hermitian_part(m_ - other.m_);
}

DensityMatrix mix(const DensityMatrix& a, const DensityMatrix& b, double t) {
  require(a.dim() == b.dim(), "mix: dimension mismatch");
  require(t >= 0.0 && t <= 1.0, "mix: weight outside [0, 1]");
  return DensityMatrix::trusted((1.0 - t) * a.matrix() + t * b.matrix(), a.dims());
}

// ---------------------------------------------------------------------------

PureStateVector::PureStateVector(Vector amplitudes, Dims dims)
    : amps_(std::move(amplitudes)), dims_(std::move(dims)) {
  require(amps_.size() > 0, "PureStateVector: empty");
  check_dims(dims_, amps_.size());
  require(std::abs(amps_.squaredNorm() - 1.0) <= kNormTol, "PureStateVector: not unit norm");
}

PureStateVector PureStateVector::normalized(const Vector& amplitudes, Dims dims) {
  const double n = amplitudes.norm();
  require(n > 0.0, "PureStateVector::normalized: zero vector");
  return PureStateVector(amplitudes / n, std::move(dims));
}

DensityMatrix PureStateVector::projector() const {
  return DensityMatrix::trusted(amps_ * amps_.adjoint(), dims_);
}

// ---------------------------------------------------------------------------

Povm::Povm(std::vector<Matrix> elements) : elements_(std::move(elements)) {
  require(!elements_.empty(), "Povm: no elements");
  const auto n = elements_.front().rows();
  for (const auto& a : elements_)
    require(a.rows() == n && a.cols() == n, "Povm: elements must be square and of equal size");
  require(completeness_error() <= kCompletenessTol, "Povm: sum of A_i^dagger A_i is not the identity");
}

Povm Povm::trivial(int dim) { return Povm({Matrix::Identity(dim, dim)}); }

Povm Povm::computational(int dim) {
  std::vector<Matrix> els;
  for (int i = 0; i < dim; ++i) {
    Matrix p = Matrix::Zero(dim, dim);
    p(i, i) = 1.0;
    els.push_back(std::move(p));
  }
  return Povm(std::move(els));
}

Matrix Povm::effect(int i) const { return elements_[i].adjoint() * elements_[i]; }

double Povm::completeness_error() const {
  const auto n = elements_.front().rows();
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& a : elements_) sum += a.adjoint() * a;
  return (sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

Ensemble::Ensemble(std::vector<Member> members) : members_(std::move(members)) {
  require(!members_.empty(), "Ensemble: no members");
  double total = 0.0;
  for (const auto& m : members_) {
    require(m.weight >= 0.0, "Ensemble: negative weight");
    require(m.state.dims() == members_.front().state.dims(), "Ensemble: member dims differ");
    total += m.weight;
  }
  require(std::abs(total - 1.0) <= kEnsembleWeightTol, "Ensemble: weights do not sum to 1");
}

DensityMatrix Ensemble::barycenter() const {
  Matrix acc = Matrix::Zero(members_.front().state.dim(), members_.front().state.dim());
  for (const auto& m : members_) acc += m.weight * m.state.matrix();
  return DensityMatrix::trusted(acc, dims());
}

// ---------------------------------------------------------------------------

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix::trusted(kron(a.matrix(), b.matrix()), std::move(dims));
}

Matrix partial_trace(const Matrix& m, const Dims& dims, std::span<const int> keep) {
  require(total_dim(dims) == m.rows() && m.rows() == m.cols(), "partial trace: dims do not match matrix");
  const FactorSplit s = split_factors(dims, keep);
  Matrix out = Matrix::Zero(s.kept_dim, s.kept_dim);
  for (int a = 0; a < s.kept_dim; ++a) {
    const int* ia = &s.index[a * s.traced_dim];
    for (int b = 0; b < s.kept_dim; ++b) {
      const int* ib = &s.index[b * s.traced_dim];
      Complex acc = 0.0;
      for (int t = 0; t < s.traced_dim; ++t) acc += m(ia[t], ib[t]);
      out(a, b) = acc;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  Matrix reduced = partial_trace(rho.matrix(), rho.dims(), keep);
  return DensityMatrix::trusted(reduced, kept_dims(rho.dims(), keep));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

Matrix embed_operator(const Matrix& op, const Dims& dims, std::span<const int> keep) {
  const FactorSplit s = split_factors(dims, keep);
  require(op.rows() == s.kept_dim && op.cols() == s.kept_dim, "embed_operator: operator size mismatch");
  const int n = total_dim(dims);
  Matrix out = Matrix::Zero(n, n);
  for (int a = 0; a < s.kept_dim; ++a)
    for (int b = 0; b < s.kept_dim; ++b) {
      const Complex v = op(a, b);
      if (v == Complex(0.0)) continue;
      for (int t = 0; t < s.traced_dim; ++t) out(s.index[a * s.traced_dim + t], s.index[b * s.traced_dim + t]) = v;
    }
  return out;
}

double trace_norm(const HermitianOperator& a) { return a.eigenvalues().cwiseAbs().sum(); }

double trace_norm_distance(const DensityMatrix& a, const DensityMatrix& b) { return trace_norm(a - b); }

Matrix sqrt_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  RealVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require(rho.dim() == sigma.dim(), "fidelity: dimension mismatch");
  const Matrix s = sqrt_psd(rho.matrix());
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(s * sigma.matrix() * s), Eigen::EigenvaluesOnly);
  const double f = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(f, 1.0);
}

PureStateVector purify(const DensityMatrix& rho) {
  const int d = rho.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int j = 0; j < d; ++j) {
    const double w = std::sqrt(std::max(es.eigenvalues()(j), 0.0));
    if (w == 0.0) continue;
    // |e_j> (x) |j>: amplitude at (x, j) is index x * d + j.
    for (int x = 0; x < d; ++x) psi(x * d + j) += w * es.eigenvectors()(x, j);
  }
  Dims dims = rho.dims();
  dims.push_back(d);
  return PureStateVector::normalized(psi, std::move(dims));
}

JordanDecomposition jordan_decompose(const HermitianOperator& delta) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(delta.matrix());
  const RealVector& ev = es.eigenvalues();
  const Matrix& u = es.eigenvectors();
  const RealVector pos = ev.cwiseMax(0.0);
  const RealVector neg = (-ev).cwiseMax(0.0);
  return {HermitianOperator::from_hermitian_part(u * pos.cast<Complex>().asDiagonal() * u.adjoint()),
          HermitianOperator::from_hermitian_part(u * neg.cast<Complex>().asDiagonal() * u.adjoint())};
}

Matrix flip_operator(int d) {
  Matrix v = Matrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) v(b * d + a, a * d + b) = 1.0;
  return v;
}

DensityMatrix antisymmetric_state(int d) {
  require(d >= 2, "antisymmetric_state: d must be at least 2");
  Matrix m = (Matrix::Identity(d * d, d * d) - flip_operator(d)) / static_cast<double>(d * d - d);
  return DensityMatrix(std::move(m), Dims{d, d});
}

Matrix orthonormal_factor(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

}  // namespace entrocheck
