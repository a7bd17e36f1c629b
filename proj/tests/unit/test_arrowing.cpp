#include "support.hpp"

#include "../oracles/bloch_grid.hpp"

#include "entrocheck/arrowing.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace entrocheck {
namespace {

using testing::bell_phi_plus;
using testing::max_abs;

ArrowOptions fast(std::uint64_t seed, int restarts = 8) {
  ArrowOptions o;
  o.restarts = restarts;
  o.seed = seed;
  return o;
}

const Functional kS = functionals::entropy();

TEST(Measurement, ProductStateIgnoresMeasurement) {
  Rng rng = make_rng(81, 0);
  const auto x = random_hs_state(rng, {2});
  const auto rho = tensor(x, random_hs_state(rng, {3}));
  for (int t = 0; t < 5; ++t)
    EXPECT_NEAR(avg_under_measurement(rho, random_povm(rng, 3, 4), kS), von_neumann_entropy(x), 1e-10);
}

TEST(Measurement, TrivialPovmGivesReducedValue) {
  Rng rng = make_rng(82, 0);
  const auto rho = random_hs_state(rng, {2, 3});
  EXPECT_NEAR(avg_under_measurement(rho, Povm::trivial(3), kS), von_neumann_entropy(partial_trace(rho, {0})),
              1e-12);
}

TEST(Measurement, BellComputationalBasisGivesPureConditionals) {
  EXPECT_NEAR(avg_under_measurement(bell_phi_plus().projector(), Povm::computational(2), kS), 0.0, 1e-12);
  const auto outcomes = measure_ancilla(bell_phi_plus().projector(), Povm::computational(2));
  ASSERT_EQ(outcomes.size(), 2u);
  EXPECT_NEAR(outcomes[0].probability + outcomes[1].probability, 1.0, 1e-12);
}

TEST(Measurement, DropsZeroProbabilityOutcomes) {
  const auto rho = tensor(DensityMatrix::maximally_mixed({2}), DensityMatrix::basis_state(0, {2}));
  const auto outcomes = measure_ancilla(rho, Povm::computational(2));
  EXPECT_EQ(outcomes.size(), 1u);
  EXPECT_THROW(measure_ancilla(rho, Povm::computational(3)), std::invalid_argument);
}

TEST(ArrowDown, ProductState) {
  Rng rng = make_rng(83, 0);
  const auto x = random_hs_state(rng, {2});
  const auto rho = tensor(x, random_hs_state(rng, {2}));
  EXPECT_NEAR(arrow_down(rho, kS, 3, fast(1)).value, von_neumann_entropy(x), 1e-8);
  EXPECT_NEAR(arrow_down_cpl(rho, kS, 3, fast(1)).value, von_neumann_entropy(x), 1e-8);
}

TEST(ArrowDown, BellStateReachesZero) {
  const auto rho = bell_phi_plus().projector();
  EXPECT_NEAR(oracle::entropy_grid_min(rho.matrix()), 0.0, 1e-9);
  const auto r = arrow_down(rho, kS, 0, fast(2));
  EXPECT_NEAR(r.value, 0.0, 1e-6);
  EXPECT_NEAR(r.value, avg_under_measurement(rho, r.best_povm, kS), 1e-8);
  EXPECT_LT(r.best_povm.completeness_error(), 1e-10);
  EXPECT_EQ(r.outcomes, 5);
}

TEST(ArrowDown, SoundnessAndOrdering) {
  Rng rng = make_rng(84, 0);
  for (int t = 0; t < 5; ++t) {
    const auto rho = random_hs_state(rng, {2, 2});
    const auto down = arrow_down(rho, kS, 0, fast(3));
    const auto cpl = arrow_down_cpl(rho, kS, 0, fast(3));
    EXPECT_LE(down.value, von_neumann_entropy(partial_trace(rho, {0})) + 1e-8);
    EXPECT_LE(down.value, avg_under_measurement(rho, Povm::computational(2), kS) + 1e-8);
    EXPECT_LE(down.value, cpl.value + 1e-8);
    EXPECT_NEAR(cpl.value, avg_under_measurement(rho, cpl.best_povm, kS), 1e-8);
    for (const auto& a : cpl.best_povm.elements()) {
      Eigen::JacobiSVD<Matrix> svd(a);
      EXPECT_LT(svd.singularValues()(1), 1e-8);
    }
  }
}

TEST(ArrowDown, BudgetMonotone) {
  Rng rng = make_rng(85, 0);
  const auto rho = random_hs_state(rng, {2, 2});
  const auto sweep = arrow_down_sweep(rho, kS, 5, fast(4));
  ASSERT_EQ(sweep.size(), 5u);
  for (std::size_t m = 1; m < sweep.size(); ++m) EXPECT_LE(sweep[m].value, sweep[m - 1].value + 1e-8);
  EXPECT_NEAR(sweep[0].value, von_neumann_entropy(partial_trace(rho, {0})), 1e-10);
}

TEST(ArrowDown, TrivialAncilla) {
  Rng rng = make_rng(86, 0);
  const auto rho = random_hs_state(rng, {3, 1});
  EXPECT_NEAR(arrow_down_cpl(rho, kS, 2, fast(5)).value, von_neumann_entropy(partial_trace(rho, {0})), 1e-10);
}

TEST(ArrowDownCpl, MatchesProjectiveGrid) {
  Rng rng = make_rng(87, 0);
  for (int t = 0; t < 5; ++t) {
    const auto rho = random_hs_state(rng, {2, 2});
    const double grid = oracle::entropy_grid_min(rho.matrix());
    EXPECT_NEAR(arrow_down_cpl(rho, kS, 0, fast(6, 32)).value, grid, 1e-3);
  }
}

TEST(ArrowUp, BoundsAndValue) {
  Rng rng = make_rng(88, 0);
  const auto rho = random_hs_state(rng, {2, 2});
  const auto up = arrow_up(rho, kS, 0, fast(7));
  EXPECT_GE(up.value, von_neumann_entropy(partial_trace(rho, {0})) - 1e-8);
  EXPECT_NEAR(up.value, avg_under_measurement(rho, up.best_povm, kS), 1e-8);
}

TEST(ClassicalCorrelation, Examples) {
  Rng rng = make_rng(89, 0);
  const auto prod = tensor(random_hs_state(rng, {2}), random_hs_state(rng, {2}));
  EXPECT_NEAR(classical_correlation_backward(prod, 0, fast(8)).value, 0.0, 1e-8);
  EXPECT_NEAR(classical_correlation_backward(bell_phi_plus().projector(), 0, fast(8)).value, 1.0, 1e-6);
  const auto cc = DensityMatrix::diagonal((RealVector(4) << 0.5, 0, 0, 0.5).finished(), {2, 2});
  EXPECT_NEAR(classical_correlation_backward(cc, 0, fast(8)).value, 1.0, 1e-6);
  for (int t = 0; t < 5; ++t) {
    const auto rho = random_hs_state(rng, {2, 2});
    const double c = classical_correlation_backward(rho, 0, fast(9)).value;
    EXPECT_GE(c, -1e-10);
    EXPECT_LE(c, von_neumann_entropy(partial_trace(rho, {0})) + 1e-8);
  }
}

TEST(Facts, RandomTriples) {
  Rng rng = make_rng(90, 0);
  for (int t = 0; t < 300; ++t) {
    const int d = 2 + t % 2;
    const auto [rho, sigma] = sample_pair(rng, HilbertSchmidtMixed{}, {d, d});
    const Povm povm = random_povm(rng, d, 1 + t % 6);
    const auto f = measurement_facts(rho, sigma, povm);
    EXPECT_LE(f.outcome_distance, f.epsilon + 1e-10);
    EXPECT_LE(f.weighted_conditional_distance, 2.0 * f.epsilon + 1e-10);
  }
}

TEST(Facts, MeasurementSwapBound) {
  Rng rng = make_rng(91, 0);
  const ContinuitySpec spec{1.0, Correction::binary_entropy()};
  for (int t = 0; t < 200; ++t) {
    const auto [rho, sigma] = sample_pair(rng, Perturbation{0.25}, {2, 3});
    const Povm povm = random_povm(rng, 3, 1 + t % 5);
    EXPECT_FALSE(measurement_swap_record(t, rho, sigma, povm, kS, spec, 1e-6).violated);
  }
}

double directional_fd(const MeasurementObjective& obj, const Matrix& v, const Matrix& z, double h) {
  return (obj.value(v + h * z) - obj.value(v - h * z)) / (2 * h);
}

TEST(MeasurementObjective, GradientMatchesDirectionalDifferences) {
  Rng rng = make_rng(92, 0);
  for (int t = 0; t < 20; ++t) {
    const bool rank_one = t % 2 == 0;
    const bool bipartite_x = t % 3 == 0;
    const auto rho = random_hs_state(rng, bipartite_x ? Dims{2, 2, 2} : Dims{2, 2});
    const MeasurementObjective obj(rho, bipartite_x ? functionals::mutual_information() : kS, 3, rank_one);
    const Matrix v = random_isometry(rng, obj.rows(), obj.cols());
    const Matrix z = complex_gaussian(rng, obj.rows(), obj.cols());
    const Matrix g = obj.gradient(v);
    const double analytic = g.cwiseProduct(z.conjugate()).sum().real();
    const double fd = directional_fd(obj, v, z, 1e-5);
    EXPECT_LE(std::abs(analytic - fd), 1e-4 * std::max(1.0, std::abs(fd))) << "t=" << t;
  }
}

TEST(MeasurementObjective, EncodeRoundTrip) {
  Rng rng = make_rng(93, 0);
  const auto rho = random_hs_state(rng, {2, 2});
  const MeasurementObjective obj(rho, kS, 4, false);
  const Povm p = random_povm(rng, 2, 4);
  const Matrix v = obj.encode(p);
  EXPECT_NEAR(obj.value(v), avg_under_measurement(rho, p, kS), 1e-10);
  EXPECT_LT(max_abs(v.adjoint() * v - Matrix::Identity(2, 2)), 1e-10);
}

TEST(Channel, Construction) {
  EXPECT_NO_THROW(StochasticChannel::identity(3));
  EXPECT_THROW(StochasticChannel(2, 2, {0.5, 0.6, 0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(StochasticChannel(1, 2, {1.2, -0.2}), std::invalid_argument);
  const auto det = StochasticChannel::deterministic({1, 0, 1}, 2);
  EXPECT_EQ(det(0, 1), 1.0);
  EXPECT_EQ(det(1, 0), 1.0);
  const auto c = StochasticChannel::constant(3, 2);
  EXPECT_EQ(c(2, 0), 1.0);
}

ClassicalJoint joint8(auto fn) {
  std::vector<double> p(8);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int e = 0; e < 2; ++e) p[static_cast<std::size_t>((x * 2 + y) * 2 + e)] = fn(x, y, e);
  return ClassicalJoint(2, 2, 2, p);
}

TEST(Intrinsic, CanonicalTriples) {
  const auto copy = joint8([](int x, int y, int e) { return (x == y && e == x) ? 0.5 : 0.0; });
  EXPECT_LE(intrinsic_information(copy).value, 1e-6);
  const auto xor_joint = joint8([](int x, int y, int e) { return e == (x ^ y) ? 0.25 : 0.0; });
  const auto r = intrinsic_information(xor_joint);
  EXPECT_LE(r.value, 1e-6);
  EXPECT_NEAR(conditional_mutual_information(apply_channel(xor_joint, r.channel)), r.value, 1e-8);
  Rng rng = make_rng(94, 0);
  for (int t = 0; t < 5; ++t) {
    const RealVector pxy = random_simplex_point(rng, 4);
    const RealVector pe = random_simplex_point(rng, 2);
    const auto indep = joint8([&](int x, int y, int e) { return pxy(x * 2 + y) * pe(e); });
    EXPECT_NEAR(intrinsic_information(indep).value, mutual_information(indep), 1e-6);
  }
}

TEST(Intrinsic, UpperBoundsAndChannelReproduction) {
  Rng rng = make_rng(95, 0);
  for (int t = 0; t < 10; ++t) {
    const RealVector p = random_simplex_point(rng, 12);
    const ClassicalJoint j(2, 2, 3, {p.data(), p.data() + 12});
    const auto r = intrinsic_information(j);
    EXPECT_LE(r.value, conditional_mutual_information(j) + 1e-8);
    EXPECT_LE(r.value, mutual_information(j) + 1e-8);
    EXPECT_GE(r.value, -1e-12);
    EXPECT_NEAR(conditional_mutual_information(apply_channel(j, r.channel)), r.value, 1e-8);
  }
}

}  // namespace
}  // namespace entrocheck
