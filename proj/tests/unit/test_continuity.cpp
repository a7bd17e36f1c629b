#include "support.hpp"

#include "entrocheck/continuity.hpp"
#include "entrocheck/functionals.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

namespace entrocheck {
namespace {

using testing::diag2;
using testing::max_abs;

TEST(Correction, Forms) {
  EXPECT_DOUBLE_EQ(Correction::zero()(0.3), 0.0);
  EXPECT_DOUBLE_EQ(Correction::linear(2.0)(0.25), 0.5);
  EXPECT_NEAR(Correction::binary_entropy(2.0)(0.5), 2.0, 1e-15);
  EXPECT_NEAR(Correction::eta(1.0)(0.5), 0.5, 1e-15);
  EXPECT_NEAR(Correction::sqrt(3.0)(0.25), 1.5, 1e-15);
  for (const auto& c : {Correction::zero(), Correction::linear(1), Correction::binary_entropy(), Correction::eta(),
                        Correction::sqrt()})
    EXPECT_EQ(c(0.0), 0.0);
}

TEST(ContinuitySpec, BoundAndValidation) {
  const ContinuitySpec fannes{1.0, Correction::eta()};
  EXPECT_NEAR(fannes.bound(0.25, 4), 0.25 * 2.0 + 0.5, 1e-15);
  EXPECT_NO_THROW(fannes.validate());
  EXPECT_NO_THROW((ContinuitySpec{4.0, Correction::binary_entropy(2.0)}.validate()));
  EXPECT_THROW((ContinuitySpec{-1.0, Correction::zero()}.validate()), std::invalid_argument);
  EXPECT_THROW((ContinuitySpec{1.0, Correction::linear(-1.0)}.validate()), std::invalid_argument);
}

TEST(TransferConstants, BothDirections) {
  const ContinuitySpec lemma1{2.0, Correction::binary_entropy(1.0)};
  const auto cont = transfer_constants(TransferDirection::RobustnessToContinuity, lemma1);
  EXPECT_DOUBLE_EQ(cont.K, 4.0);
  for (double e : {0.05, 0.2, 0.5}) EXPECT_NEAR(cont.correction(e), 2.0 * binary_entropy(e), 1e-15);

  const ContinuitySpec zero{0.0, Correction::zero()};
  EXPECT_DOUBLE_EQ(transfer_constants(TransferDirection::RobustnessToContinuity, zero).K, 0.0);
  EXPECT_DOUBLE_EQ(transfer_constants(TransferDirection::ContinuityToRobustness, zero).K, 0.0);

  const ContinuitySpec fannes{1.0, Correction::eta()};
  const auto rob = transfer_constants(TransferDirection::ContinuityToRobustness, fannes);
  EXPECT_DOUBLE_EQ(rob.K, 2.0);
  for (double d : {0.05, 0.1, 0.25}) EXPECT_NEAR(rob.correction(d), eta(2.0 * d), 1e-15);
}

TEST(Tales, IdenticalStates) {
  const auto rho = diag2(0.3, 0.7);
  const auto w = tales_decompose(rho, rho);
  EXPECT_EQ(w.epsilon, 0.0);
  EXPECT_LT(max_abs(w.sigma.matrix() - rho.matrix()), 1e-15);
  EXPECT_LT(max_abs(w.gamma1.matrix() - 0.5 * Matrix::Identity(2, 2)), 1e-15);
  EXPECT_LT(max_abs(w.gamma2.matrix() - 0.5 * Matrix::Identity(2, 2)), 1e-15);
}

TEST(Tales, DiagonalExample) {
  const auto r1 = diag2(1.0, 0.0);
  const auto r2 = diag2(0.75, 0.25);
  const auto w = tales_decompose(r1, r2);
  EXPECT_NEAR(w.epsilon, 0.5, 1e-15);
  EXPECT_LT(max_abs(w.sigma.matrix() - diag2(11.0 / 16, 5.0 / 16).matrix()), 1e-15);
  EXPECT_LT(max_abs(w.gamma1.matrix() - diag2(3.0 / 8, 5.0 / 8).matrix()), 1e-15);
  EXPECT_LT(max_abs(w.gamma2.matrix() - diag2(5.0 / 8, 3.0 / 8).matrix()), 1e-15);
  const Matrix via1 = (1 - w.epsilon) * r1.matrix() + w.epsilon * w.gamma1.matrix();
  const Matrix via2 = (1 - w.epsilon) * r2.matrix() + w.epsilon * w.gamma2.matrix();
  EXPECT_LT(max_abs(via1 - via2), 1e-15);
  EXPECT_LE(tales_residual(w, r1, r2), 1e-15);
}

TEST(Tales, OrthogonalPureStatesRejected) {
  EXPECT_THROW(tales_decompose(DensityMatrix::basis_state(0, {2}), DensityMatrix::basis_state(1, {2})),
               std::domain_error);
}

TEST(Tales, RandomPairsReconstruct) {
  for (int d = 2; d <= 6; ++d) {
    Rng rng = make_rng(51, static_cast<std::uint64_t>(d));
    for (int t = 0; t < 200; ++t) {
      const auto [a, b] = sample_pair(rng, Perturbation{0.5}, {d});
      const auto w = tales_decompose(a, b);
      EXPECT_LE(w.epsilon, 1.0 + 1e-12);
      EXPECT_LE(tales_residual(w, a, b), 1e-10);
    }
  }
}

TEST(BoundRecord, MarginAndViolation) {
  const auto ok = make_record(0, 2, 0.1, 1.0, 1.0 - 5e-10, 1e-9);
  EXPECT_FALSE(ok.violated);
  const auto bad = make_record(1, 2, 0.1, 1.0, 1.0 - 2e-9, 1e-9);
  EXPECT_TRUE(bad.violated);
  EXPECT_NEAR(bad.margin, -2e-9, 1e-15);
  const auto skip = skipped_record(2, 2, 0.1);
  EXPECT_TRUE(skip.skipped);
  EXPECT_FALSE(skip.violated);
}

TEST(BoundReport, SummaryCsvJson) {
  BoundReport r;
  r.seed = 9;
  r.records = {make_record(1, 2, 0.1, 0.2, 0.5, 1e-9), make_record(0, 3, 0.2, 0.4, 0.3, 1e-9),
               skipped_record(2, 2, 0.3)};
  r.finalize();
  EXPECT_EQ(r.records.front().trial, 0);
  const auto s = r.summary();
  EXPECT_EQ(s.trials, 3);
  EXPECT_EQ(s.violations, 1);
  EXPECT_EQ(s.skipped, 1);
  EXPECT_NEAR(s.min_margin, -0.1, 1e-15);
  EXPECT_FALSE(r.passed());
  std::ostringstream csv;
  r.write_csv(csv);
  const std::string text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "trial,d,eps,lhs,rhs,margin,violated");
  EXPECT_NE(r.summary_json().find("\"violations\":1"), std::string::npos);
  EXPECT_NE(r.summary_json().find("\"seed\":9"), std::string::npos);
}

TEST(Campaign, FannesZeroViolations) {
  const auto report = check_asymptotic_continuity(functionals::entropy(), {1.0, Correction::eta()},
                                                  {7, Perturbation{0.25}}, {{2}, {3}, {5}, {8}}, {200});
  EXPECT_EQ(report.summary().trials, 800);
  EXPECT_EQ(report.summary().violations, 0);
}

TEST(Campaign, ConstantFunctionalWithZeroSpec) {
  const auto report = check_asymptotic_continuity(functionals::constant(1.5), {0.0, Correction::zero()},
                                                  {3, HilbertSchmidtMixed{}}, {{2}, {4}}, {100});
  EXPECT_EQ(report.summary().violations, 0);
  EXPECT_NEAR(report.summary().min_margin, 0.0, 0.0);
}

TEST(Campaign, ConditionalEntropyAlickiFannesForm) {
  const auto report = check_asymptotic_continuity(functionals::conditional_entropy(),
                                                  {4.0, Correction::binary_entropy(2.0)}, {8, Perturbation{0.25}},
                                                  {{2, 2}}, {500});
  EXPECT_EQ(report.summary().violations, 0);
}

TEST(Campaign, RobustnessOfEntropy) {
  const auto report = check_robustness(functionals::entropy(), {1.0, Correction::binary_entropy()},
                                       {10, HilbertSchmidtMixed{}}, {{2}, {3}, {4}}, {300});
  EXPECT_EQ(report.summary().violations, 0);
}

TEST(Campaign, RobustnessAtZeroAdmixtureIsExact) {
  Rng rng = make_rng(52, 0);
  const auto [a, b] = sample_pair(rng, HilbertSchmidtMixed{}, {3});
  const auto rec = robustness_record(0, functionals::entropy(), {1.0, Correction::binary_entropy()}, a, b, 0.0, 0.0);
  EXPECT_EQ(rec.lhs, 0.0);
}

TEST(Campaign, TransferredSpecsHold) {
  const Functional s = functionals::entropy();
  const ContinuitySpec robust{1.0, Correction::binary_entropy()};
  const ContinuitySpec fannes{1.0, Correction::eta()};
  const std::vector<Dims> dims{{2}, {3}, {4}};
  EXPECT_EQ(check_asymptotic_continuity(s, transfer_constants(TransferDirection::RobustnessToContinuity, robust),
                                        {21, Perturbation{0.25}}, dims, {300})
                .summary()
                .violations,
            0);
  EXPECT_EQ(check_robustness(s, transfer_constants(TransferDirection::ContinuityToRobustness, fannes),
                             {22, Perturbation{0.25}}, dims, {300})
                .summary()
                .violations,
            0);
}

TEST(Campaign, InfiniteValuesAreSkipped) {
  const Functional inf("inf", [](const DensityMatrix&) { return FunctionalValue::infinite(); }, 1.0);
  const auto report =
      check_asymptotic_continuity(inf, {1.0, Correction::eta()}, {3, Perturbation{0.25}}, {{2}}, {20});
  EXPECT_EQ(report.summary().skipped, 20);
  EXPECT_EQ(report.summary().violations, 0);
}

TEST(Campaign, ReportsAreByteIdenticalPerSeed) {
  auto run = [] {
    const auto r = check_asymptotic_continuity(functionals::entropy(), {1.0, Correction::eta()},
                                               {123, Perturbation{0.25}}, {{2}, {3}}, {50});
    std::ostringstream os;
    r.write_csv(os);
    return os.str() + r.summary_json();
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace entrocheck
