#include "entrocheck/arrowing.hpp"
#include "entrocheck/caratheodory.hpp"
#include "entrocheck/random.hpp"
#include "entrocheck/reldist.hpp"
#include "entrocheck/roof.hpp"

#include <benchmark/benchmark.h>

using namespace entrocheck;

static void BM_RelEntropyDistance(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng = make_rng(11, 0);
  std::vector<DensityMatrix> gens;
  for (int i = 0; i < 20; ++i) gens.push_back(random_hs_state(rng, {d}));
  const ConvexSetSpec set(gens);
  const auto rho = random_hs_state(rng, {d});
  for (auto _ : state) benchmark::DoNotOptimize(rel_entropy_distance(rho, set).value);
}
BENCHMARK(BM_RelEntropyDistance)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_ArrowDownCpl(benchmark::State& state) {
  Rng rng = make_rng(12, 0);
  const auto rho = random_hs_state(rng, {2, 2});
  for (auto _ : state) benchmark::DoNotOptimize(arrow_down_cpl(rho, functionals::entropy()).value);
}
BENCHMARK(BM_ArrowDownCpl)->Unit(benchmark::kMillisecond);

static void BM_EntanglementOfFormation(benchmark::State& state) {
  const int rank = static_cast<int>(state.range(0));
  Rng rng = make_rng(13, 0);
  const auto rho = random_induced_state(rng, {2, 2}, rank);
  for (auto _ : state) benchmark::DoNotOptimize(entanglement_of_formation(rho).value);
}
BENCHMARK(BM_EntanglementOfFormation)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_IntrinsicInformation(benchmark::State& state) {
  Rng rng = make_rng(14, 0);
  const RealVector p = random_simplex_point(rng, 16);
  const ClassicalJoint j(2, 2, 4, {p.data(), p.data() + 16});
  for (auto _ : state) benchmark::DoNotOptimize(intrinsic_information(j).value);
}
BENCHMARK(BM_IntrinsicInformation)->Unit(benchmark::kMillisecond);

static void BM_ReduceEnsemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = make_rng(15, 0);
  const RealVector w = random_simplex_point(rng, n);
  std::vector<Ensemble::Member> members;
  std::vector<double> values;
  for (int i = 0; i < n; ++i) {
    members.push_back({w(i), random_hs_state(rng, {2})});
    values.push_back(von_neumann_entropy(members.back().state));
  }
  const ValuedEnsemble ve(Ensemble(members), values);
  for (auto _ : state) benchmark::DoNotOptimize(reduce_ensemble(ve).size());
}
BENCHMARK(BM_ReduceEnsemble)->Arg(20)->Arg(100);
