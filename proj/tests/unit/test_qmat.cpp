#include "support.hpp"

#include "entrocheck/qmat.hpp"
#include "entrocheck/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace entrocheck {
namespace {

using testing::bell_phi_plus;
using testing::diag2;
using testing::max_abs;
using testing::random_hermitian;

TEST(DensityMatrix, RejectsInvalidInput) {
  Matrix m = Matrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix(m, {2}), std::invalid_argument);  // trace 2
  Matrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  EXPECT_THROW(DensityMatrix(neg, {2}), std::invalid_argument);
  Matrix nonherm(2, 2);
  nonherm << 0.5, 0.1, 0.0, 0.5;
  EXPECT_THROW(DensityMatrix(nonherm, {2}), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(0.25 * Matrix::Identity(4, 4), {3}), std::invalid_argument);
}

TEST(DensityMatrix, AcceptsTinyNegativeEigenvalues) {
  Matrix m(2, 2);
  m << 1.0 + 5e-11, 0, 0, -5e-11;
  EXPECT_NO_THROW(DensityMatrix(m, {2}));
}

TEST(Tensor, IdentityAndBasisCases) {
  const auto mm = tensor(DensityMatrix::maximally_mixed({2}), DensityMatrix::maximally_mixed({2}));
  EXPECT_EQ(mm.dims(), (Dims{2, 2}));
  EXPECT_LT(max_abs(mm.matrix() - 0.25 * Matrix::Identity(4, 4)), 1e-15);
  const auto s01 = tensor(DensityMatrix::basis_state(0, {2}), DensityMatrix::basis_state(1, {2}));
  EXPECT_LT(max_abs(s01.matrix() - DensityMatrix::basis_state(1, {2, 2}).matrix()), 1e-15);
}

TEST(Tensor, EigenvaluesAreProducts) {
  Rng rng = make_rng(11, 0);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_hs_state(rng, {2});
    const auto b = random_hs_state(rng, {2});
    std::vector<double> expected;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) expected.push_back(a.eigenvalues()(i) * b.eigenvalues()(j));
    std::sort(expected.begin(), expected.end());
    RealVector got = tensor(a, b).eigenvalues();
    std::sort(got.data(), got.data() + got.size());
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(got(i), expected[static_cast<std::size_t>(i)], 1e-12);
  }
}

TEST(PartialTrace, ProductAndBell) {
  Rng rng = make_rng(12, 0);
  const auto a = random_hs_state(rng, {2});
  const auto b = random_hs_state(rng, {3});
  EXPECT_LT(max_abs(partial_trace(tensor(a, b), {0}).matrix() - a.matrix()), 1e-13);
  EXPECT_LT(max_abs(partial_trace(tensor(a, b), {1}).matrix() - b.matrix()), 1e-13);
  const auto reduced = partial_trace(bell_phi_plus().projector(), {0});
  EXPECT_LT(max_abs(reduced.matrix() - 0.5 * Matrix::Identity(2, 2)), 1e-15);
}

// Direct index contraction, written independently of the library's reshaping.
Matrix trace_out_last_two(const Matrix& m, int da, int db, int dc) {
  Matrix out = Matrix::Zero(da, da);
  for (int a1 = 0; a1 < da; ++a1)
    for (int a2 = 0; a2 < da; ++a2)
      for (int b = 0; b < db; ++b)
        for (int c = 0; c < dc; ++c) out(a1, a2) += m((a1 * db + b) * dc + c, (a2 * db + b) * dc + c);
  return out;
}

TEST(PartialTrace, SequentialEqualsJointAndMatchesContraction) {
  Rng rng = make_rng(13, 0);
  for (int t = 0; t < 10; ++t) {
    const auto rho = random_hs_state(rng, {2, 3, 2});
    const auto once = partial_trace(rho, {0});
    const auto twice = partial_trace(partial_trace(rho, {0, 1}), {0});
    EXPECT_LT(max_abs(once.matrix() - twice.matrix()), 1e-13);
    EXPECT_LT(max_abs(once.matrix() - trace_out_last_two(rho.matrix(), 2, 3, 2)), 1e-13);
    const auto ac = partial_trace(rho, {0, 2});
    EXPECT_EQ(ac.dims(), (Dims{2, 2}));
    EXPECT_NEAR(ac.matrix().trace().real(), 1.0, 1e-12);
  }
}

TEST(PartialTrace, RejectsBadIndexSets) {
  const auto rho = DensityMatrix::maximally_mixed({2, 2});
  EXPECT_THROW(partial_trace(rho, {2}), std::invalid_argument);
  EXPECT_THROW(partial_trace(rho, {0, 0}), std::invalid_argument);
}

TEST(TraceNorm, Examples) {
  const auto r = DensityMatrix::basis_state(0, {2});
  EXPECT_NEAR(trace_norm(r - r), 0.0, 1e-15);
  EXPECT_NEAR(trace_norm_distance(DensityMatrix::basis_state(0, {2}), DensityMatrix::basis_state(1, {2})), 2.0,
              1e-14);
  EXPECT_NEAR(trace_norm_distance(diag2(0.75, 0.25), diag2(1.0, 0.0)), 0.5, 1e-15);
}

TEST(TraceNorm, TriangleAndHomogeneity) {
  Rng rng = make_rng(14, 0);
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + t % 4;
    const HermitianOperator a(random_hermitian(rng, d));
    const HermitianOperator b(random_hermitian(rng, d));
    EXPECT_LE(trace_norm(a + b), trace_norm(a) + trace_norm(b) + 1e-10);
    EXPECT_NEAR(trace_norm(a * -2.5), 2.5 * trace_norm(a), 1e-10);
    EXPECT_NEAR(trace_norm(a * -1.0), trace_norm(a), 1e-12);
  }
}

TEST(Fidelity, Examples) {
  Rng rng = make_rng(15, 0);
  const auto rho = random_hs_state(rng, {3});
  EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-7);
  EXPECT_NEAR(fidelity(DensityMatrix::basis_state(0, {2}), DensityMatrix::basis_state(1, {2})), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(DensityMatrix::basis_state(0, {2}), DensityMatrix::maximally_mixed({2})),
              1.0 / std::sqrt(2.0), 1e-12);
  const auto sigma = random_hs_state(rng, {3});
  EXPECT_NEAR(fidelity(rho, sigma), fidelity(sigma, rho), 1e-9);
  EXPECT_THROW(fidelity(rho, DensityMatrix::maximally_mixed({2})), std::invalid_argument);
}

TEST(Fidelity, FuchsVanDeGraafSandwich) {
  for (int d = 2; d <= 4; ++d) {
    Rng rng = make_rng(16, static_cast<std::uint64_t>(d));
    for (int t = 0; t < 1000; ++t) {
      const auto [rho, sigma] = sample_pair(rng, HilbertSchmidtMixed{}, {d});
      const double f = fidelity(rho, sigma);
      const double half = 0.5 * trace_norm_distance(rho, sigma);
      EXPECT_LE(1.0 - f, half + 1e-9);
      EXPECT_LE(half, std::sqrt(1.0 - f * f) + 1e-9);
    }
  }
}

// With the root fidelity used here the upper form 1/2||rho - sigma|| <= sqrt(1 - F) is false;
// pure states sit exactly on sqrt(1 - F^2).
TEST(Fidelity, SquareRootUpperFormFailsOnPureStates) {
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const auto p = DensityMatrix::basis_state(0, {2});
  const auto q = PureStateVector(plus, {2}).projector();
  const double f = fidelity(p, q);
  const double half = 0.5 * trace_norm_distance(p, q);
  EXPECT_NEAR(f, 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(half, std::sqrt(1.0 - f * f), 1e-12);
  EXPECT_GT(half, std::sqrt(1.0 - f) + 0.1);
}

TEST(Contractivity, PartialTraceAndDephasing) {
  Rng rng = make_rng(17, 0);
  for (int t = 0; t < 200; ++t) {
    const auto [rho, sigma] = sample_pair(rng, HilbertSchmidtMixed{}, {2, 3});
    const double full = trace_norm_distance(rho, sigma);
    EXPECT_LE(trace_norm_distance(partial_trace(rho, {0}), partial_trace(sigma, {0})), full + 1e-10);
    EXPECT_LE(trace_norm_distance(partial_trace(rho, {1}), partial_trace(sigma, {1})), full + 1e-10);
    const Povm povm = random_povm(rng, 6, 3);
    auto dephase = [&](const DensityMatrix& s) {
      Matrix out = Matrix::Zero(6, 6);
      for (const auto& a : povm.elements()) out += a * s.matrix() * a.adjoint();
      return DensityMatrix::normalized(out, {2, 3});
    };
    EXPECT_LE(trace_norm_distance(dephase(rho), dephase(sigma)), full + 1e-10);
  }
}

TEST(Purify, RoundTrip) {
  Rng rng = make_rng(18, 0);
  for (int t = 0; t < 50; ++t) {
    const auto rho = random_hs_state(rng, {3});
    const auto psi = purify(rho);
    EXPECT_EQ(psi.dims(), (Dims{3, 3}));
    EXPECT_LT(max_abs(partial_trace(psi.projector(), {0}).matrix() - rho.matrix()), 1e-10);
  }
  const auto pure = purify(DensityMatrix::basis_state(0, {2}));
  EXPECT_LT(max_abs(partial_trace(pure.projector(), {0}).matrix() - DensityMatrix::basis_state(0, {2}).matrix()),
            1e-12);
}

TEST(Purify, MaximallyMixedGivesMaximallyEntangled) {
  const auto psi = purify(DensityMatrix::maximally_mixed({2}));
  const auto reduced = partial_trace(psi.projector(), {1});
  EXPECT_LT(max_abs(reduced.matrix() - 0.5 * Matrix::Identity(2, 2)), 1e-12);
}

TEST(Jordan, DiagonalAndZero) {
  const auto zero = jordan_decompose(HermitianOperator(Matrix::Zero(2, 2)));
  EXPECT_LT(max_abs(zero.positive.matrix()), 1e-15);
  EXPECT_LT(max_abs(zero.negative.matrix()), 1e-15);
  Matrix d(2, 2);
  d << -0.25, 0, 0, 0.25;
  const auto j = jordan_decompose(HermitianOperator(d));
  Matrix pos = Matrix::Zero(2, 2), neg = Matrix::Zero(2, 2);
  pos(1, 1) = 0.25;
  neg(0, 0) = 0.25;
  EXPECT_LT(max_abs(j.positive.matrix() - pos), 1e-15);
  EXPECT_LT(max_abs(j.negative.matrix() - neg), 1e-15);
}

TEST(Jordan, TracelessBookkeeping) {
  Rng rng = make_rng(19, 0);
  for (int t = 0; t < 100; ++t) {
    const auto [a, b] = sample_pair(rng, HilbertSchmidtMixed{}, {4});
    const HermitianOperator delta = a - b;
    const auto j = jordan_decompose(delta);
    EXPECT_LT(max_abs(j.positive.matrix() - j.negative.matrix() - delta.matrix()), 1e-12);
    EXPECT_GE(j.positive.eigenvalues().minCoeff(), -1e-12);
    EXPECT_GE(j.negative.eigenvalues().minCoeff(), -1e-12);
    EXPECT_LT(max_abs(j.positive.matrix() * j.negative.matrix()), 1e-10);
    EXPECT_NEAR(j.positive.matrix().trace().real(), 0.5 * trace_norm(delta), 1e-12);
    EXPECT_NEAR(j.negative.matrix().trace().real(), 0.5 * trace_norm(delta), 1e-12);
  }
}

TEST(Antisymmetric, SingletAndSpectrum) {
  const auto s2 = antisymmetric_state(2);
  EXPECT_NEAR(s2.purity(), 1.0, 1e-12);
  Vector singlet = Vector::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  EXPECT_LT(max_abs(s2.matrix() - singlet * singlet.adjoint()), 1e-14);

  const auto s3 = antisymmetric_state(3);
  RealVector ev = s3.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size());
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(ev(i), 0.0, 1e-12);
  for (int i = 6; i < 9; ++i) EXPECT_NEAR(ev(i), 1.0 / 3.0, 1e-12);

  for (int d = 2; d <= 4; ++d) {
    const Matrix v = flip_operator(d);
    const auto as = antisymmetric_state(d);
    EXPECT_LT(max_abs(v * as.matrix() * v - as.matrix()), 1e-14);
  }
  EXPECT_THROW(antisymmetric_state(1), std::invalid_argument);
}

TEST(Povm, CompletenessEnforced) {
  EXPECT_NO_THROW(Povm::computational(3));
  EXPECT_LT(Povm::trivial(4).completeness_error(), 1e-15);
  std::vector<Matrix> bad = {Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  EXPECT_THROW(Povm{bad}, std::invalid_argument);
  Rng rng = make_rng(20, 0);
  EXPECT_LT(random_povm(rng, 3, 5).completeness_error(), 1e-12);
  const Povm r1 = random_povm(rng, 3, 5, true);
  for (const auto& a : r1.elements()) {
    Eigen::JacobiSVD<Matrix> svd(a);
    EXPECT_LT(svd.singularValues()(1), 1e-10);
  }
}

TEST(Ensemble, ValidatesWeightsAndDims) {
  const auto a = DensityMatrix::basis_state(0, {2});
  const auto b = DensityMatrix::basis_state(1, {2});
  EXPECT_NO_THROW(Ensemble({{0.5, a}, {0.5, b}}));
  EXPECT_THROW(Ensemble({{0.6, a}, {0.6, b}}), std::invalid_argument);
  EXPECT_THROW(Ensemble({{-0.1, a}, {1.1, b}}), std::invalid_argument);
  EXPECT_THROW(Ensemble({{0.5, a}, {0.5, DensityMatrix::maximally_mixed({3})}}), std::invalid_argument);
  const auto bary = Ensemble({{0.5, a}, {0.5, b}}).barycenter();
  EXPECT_LT(max_abs(bary.matrix() - 0.5 * Matrix::Identity(2, 2)), 1e-15);
}

TEST(Sampling, DeterministicPerSeed) {
  const RngSpec spec{42, HilbertSchmidtMixed{}};
  EXPECT_EQ(sample_state(spec, {3}).matrix(), sample_state(spec, {3}).matrix());
  const RngSpec haar{42, HaarPure{}};
  EXPECT_NEAR(sample_state(haar, {3}).purity(), 1.0, 1e-12);
}

TEST(Sampling, PerturbationRadius) {
  Rng rng = make_rng(21, 0);
  for (int t = 0; t < 500; ++t) {
    const auto [a, b] = sample_pair(rng, Perturbation{0.1}, {3});
    EXPECT_LE(trace_norm_distance(a, b), 0.2 + 1e-12);
  }
  EXPECT_THROW((RngSpec{1, Perturbation{0.0}}.validate()), std::invalid_argument);
  EXPECT_THROW((RngSpec{1, Perturbation{1.5}}.validate()), std::invalid_argument);
}

}  // namespace
}  // namespace entrocheck
