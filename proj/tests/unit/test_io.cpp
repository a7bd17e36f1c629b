#include "support.hpp"

#include "entrocheck/io.hpp"

#include <gtest/gtest.h>

namespace entrocheck {
namespace {

TEST(Io, StateRoundTrip) {
  Rng rng = make_rng(131, 0);
  const auto rho = random_hs_state(rng, {2, 3});
  const auto back = io::state_from_json(io::to_json(rho));
  EXPECT_EQ(back.dims(), rho.dims());
  EXPECT_LT(testing::max_abs(back.matrix() - rho.matrix()), 1e-15);
}

TEST(Io, StateValidation) {
  EXPECT_THROW(io::state_from_json("{\"re\": [[1, 0], [0, 1]]}"), std::invalid_argument);
  EXPECT_THROW(io::state_from_json("{\"im\": [[0]]}"), io::ParseError);
  EXPECT_THROW(io::state_from_json("not json"), io::ParseError);
  EXPECT_THROW(io::state_from_json("{\"re\": [[1, 0], [0]]}"), io::ParseError);
  EXPECT_NO_THROW(io::state_from_json("{\"re\": [[0.5, 0], [0, 0.5]]}"));
}

TEST(Io, JointAndConvexSet) {
  const auto j = io::joint_from_json("{\"nx\":1,\"ny\":1,\"ne\":2,\"p\":[0.25,0.75]}");
  EXPECT_EQ(j.ne(), 2);
  EXPECT_THROW(io::joint_from_json("{\"nx\":1,\"ny\":1,\"ne\":2,\"p\":[0.25,0.25]}"), std::invalid_argument);
  const auto set = io::convex_set_from_json(
      "{\"generators\":[{\"re\":[[1,0],[0,0]]}],\"append_maximally_mixed\":true}");
  EXPECT_EQ(set.size(), 2u);
}

TEST(Io, ValuedEnsembleRoundTrip) {
  const Ensemble e({{0.4, DensityMatrix::basis_state(0, {2})}, {0.6, DensityMatrix::maximally_mixed({2})}});
  const ValuedEnsemble ve(e, {0.0, 1.0});
  const auto back = io::valued_ensemble_from_json(io::to_json(ve));
  EXPECT_EQ(back.size(), 2u);
  EXPECT_NEAR(back.mean_value(), 0.6, 1e-15);
}

TEST(Io, PovmRoundTrip) {
  Rng rng = make_rng(132, 0);
  const Povm p = random_povm(rng, 2, 3);
  const Povm back = io::povm_from_json(io::to_json(p));
  ASSERT_EQ(back.outcomes(), 3);
  for (int i = 0; i < 3; ++i) EXPECT_LT(testing::max_abs(back.elements()[static_cast<std::size_t>(i)] - p.elements()[static_cast<std::size_t>(i)]), 1e-15);
}

}  // namespace
}  // namespace entrocheck
