#include <benchmark/benchmark.h>

#include "ricbounds/asymptotic_bounds.hpp"
#include "ricbounds/finite_tails.hpp"
#include "ricbounds/rate_functions.hpp"

using namespace ricb;

static void BM_SolveLambdaMax(benchmark::State& st) {
  const ProblemShape s = ProblemShape::make(0.5, 0.2).with_gamma(0.35);
  for (auto _ : st) benchmark::DoNotOptimize(solve_lambda_max(s));
}
BENCHMARK(BM_SolveLambdaMax);

static void BM_SolveLogLambdaMin(benchmark::State& st) {
  const ProblemShape s = ProblemShape::make(0.5, 0.2).with_gamma(0.25);
  for (auto _ : st) benchmark::DoNotOptimize(solve_log_lambda_min(s));
}
BENCHMARK(BM_SolveLogLambdaMin);

static void BM_BtBounds(benchmark::State& st) {
  const ProblemShape s = ProblemShape::make(0.5, 0.2);
  for (auto _ : st) benchmark::DoNotOptimize(bt_bounds(s));
}
BENCHMARK(BM_BtBounds);

static void BM_BctBounds(benchmark::State& st) {
  const ProblemShape s = ProblemShape::make(0.5, 0.2);
  for (auto _ : st) benchmark::DoNotOptimize(bct_bounds(s));
}
BENCHMARK(BM_BctBounds);

static void BM_PhaseTransition(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(l1_phase_transition(0.5, BoundFamily::BT));
}
BENCHMARK(BM_PhaseTransition)->Unit(benchmark::kMillisecond);

static void BM_TailUpper(benchmark::State& st) {
  const FiniteInstance inst{200, 400, 4000, 1e-3};
  for (auto _ : st) benchmark::DoNotOptimize(tail_prob_upper(inst));
}
BENCHMARK(BM_TailUpper);
