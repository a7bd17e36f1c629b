#include "entrocheck/continuity.hpp"
#include "entrocheck/functionals.hpp"
#include "entrocheck/random.hpp"

#include <benchmark/benchmark.h>

using namespace entrocheck;

static void BM_VonNeumannEntropy(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng = make_rng(1, 0);
  const auto rho = random_hs_state(rng, {d});
  for (auto _ : state) benchmark::DoNotOptimize(von_neumann_entropy(rho));
}
BENCHMARK(BM_VonNeumannEntropy)->Arg(2)->Arg(4)->Arg(9)->Arg(27);

static void BM_PartialTrace(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng = make_rng(2, 0);
  const auto rho = random_hs_state(rng, {d, d, d});
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho, {0, 2}));
}
BENCHMARK(BM_PartialTrace)->Arg(2)->Arg(3)->Arg(4);

static void BM_TraceNormDistance(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng = make_rng(3, 0);
  const auto [a, b] = sample_pair(rng, HilbertSchmidtMixed{}, {d});
  for (auto _ : state) benchmark::DoNotOptimize(trace_norm_distance(a, b));
}
BENCHMARK(BM_TraceNormDistance)->Arg(2)->Arg(8)->Arg(16);

static void BM_TalesDecompose(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng = make_rng(4, 0);
  const auto [a, b] = sample_pair(rng, Perturbation{0.5}, {d});
  for (auto _ : state) benchmark::DoNotOptimize(tales_decompose(a, b));
}
BENCHMARK(BM_TalesDecompose)->Arg(2)->Arg(6);

static void BM_FannesCampaign(benchmark::State& state) {
  for (auto _ : state) {
    auto r = check_asymptotic_continuity(functionals::entropy(), {1.0, Correction::eta()}, {5, Perturbation{0.25}},
                                         {{2}, {4}, {8}}, {200});
    benchmark::DoNotOptimize(r.records.data());
  }
}
BENCHMARK(BM_FannesCampaign)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
