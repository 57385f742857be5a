#include <benchmark/benchmark.h>

#include "treelearn/bench.hpp"
#include "treelearn/learners.hpp"
#include "treelearn/metrics.hpp"

using namespace treelearn;

namespace {

const Alphabet kAb("ab");

Dfa target_of_size(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return random_dfa(n, kAb, rng);
}

void BM_minimize(benchmark::State& state) {
  Dfa d = target_of_size(std::size_t(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(minimize(d));
}
BENCHMARK(BM_minimize)->Arg(10)->Arg(40)->Arg(160);

void BM_exact_counterexample(benchmark::State& state) {
  Dfa d1 = target_of_size(std::size_t(state.range(0)), 12);
  Dfa d2 = target_of_size(std::size_t(state.range(0)), 13);
  for (auto _ : state) benchmark::DoNotOptimize(exact_counterexample(d1, d2));
}
BENCHMARK(BM_exact_counterexample)->Arg(10)->Arg(40)->Arg(160);

void BM_classic_kv(benchmark::State& state) {
  Dfa target = target_of_size(std::size_t(state.range(0)), 14);
  for (auto _ : state) {
    DfaOracle mq(target);
    ExactEq eq(target);
    benchmark::DoNotOptimize(classic_kv(kAb, mq, eq));
  }
}
BENCHMARK(BM_classic_kv)->Arg(10)->Arg(40)->Arg(80);

void BM_incremental_reuse(benchmark::State& state) {
  Dfa t0 = target_of_size(std::size_t(state.range(0)), 15);
  Rng rng(16);
  Dfa t1 = apply_mutation_scenario(t0, rng);
  DfaOracle mq0(t0);
  ExactEq eq0(t0);
  LearnResult learned = classic_kv(kAb, mq0, eq0);
  for (auto _ : state) {
    DfaOracle mq(t1);
    ExactEq eq(t1);
    benchmark::DoNotOptimize(incremental_kv(kAb, learned.tree, mq, eq));
  }
}
BENCHMARK(BM_incremental_reuse)->Arg(10)->Arg(40)->Arg(80);

void BM_progress_fixed_point(benchmark::State& state) {
  Dfa t = target_of_size(20, 17);
  Dfa h = target_of_size(20, 18);
  const double alpha = double(state.range(0)) / 1000.0;
  for (auto _ : state) benchmark::DoNotOptimize(progress(t, h, alpha));
}
BENCHMARK(BM_progress_fixed_point)->Arg(900)->Arg(999);

void BM_progress_solved(benchmark::State& state) {
  Dfa t = target_of_size(std::size_t(state.range(0)), 17);
  Dfa h = target_of_size(std::size_t(state.range(0)), 18);
  for (auto _ : state) benchmark::DoNotOptimize(progress_solved(t, h, 0.999));
}
BENCHMARK(BM_progress_solved)->Arg(20)->Arg(80)->Arg(160);

void BM_run_session(benchmark::State& state) {
  Rng rng(19);
  auto [t0, t1] = make_pair_targets(Scenario::mutation,
                                    std::size_t(state.range(0)), kAb, rng);
  SessionConfig sc;
  sc.switch_point = 10000;
  sc.alpha = 0.999;
  sc.seed = 20;
  for (auto _ : state)
    benchmark::DoNotOptimize(run_session(LearnerKind::incremental, t0, t1, sc));
}
BENCHMARK(BM_run_session)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
