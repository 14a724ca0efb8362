#include <benchmark/benchmark.h>

#include "ricbounds/covering_sim.hpp"
#include "ricbounds/empirical_ric.hpp"

using namespace ricb;

static void BM_GramEigs(benchmark::State& st) {
  const auto k = static_cast<int>(st.range(0));
  const MatrixSample s = sample_gaussian(100, k, 1);
  for (auto _ : st) benchmark::DoNotOptimize(gram_extreme_eigs(s.entries));
}
BENCHMARK(BM_GramEigs)->Arg(16)->Arg(64)->Arg(128);

static void BM_LocalSearchUpper(benchmark::State& st) {
  const MatrixSample s = sample_gaussian(100, 500, 2);
  LocalSearchOptions opt;
  opt.restarts = 2;
  for (auto _ : st)
    benchmark::DoNotOptimize(local_search(s, static_cast<int>(st.range(0)), SearchMode::kUpper, 3, opt));
}
BENCHMARK(BM_LocalSearchUpper)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_ExhaustiveRic(benchmark::State& st) {
  const MatrixSample s = sample_gaussian(8, 12, 4);
  for (auto _ : st) benchmark::DoNotOptimize(exhaustive_ric(s, 3));
}
BENCHMARK(BM_ExhaustiveRic)->Unit(benchmark::kMicrosecond);

static void BM_RandomCover(benchmark::State& st) {
  const CoveringPlan p = CoveringPlan::make(12, 3, 6, 5);
  for (auto _ : st) benchmark::DoNotOptimize(random_cover(p));
}
BENCHMARK(BM_RandomCover)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
