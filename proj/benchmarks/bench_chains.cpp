#include <benchmark/benchmark.h>

#include "eldp/chains.hpp"
#include "eldp/rng.hpp"

using namespace eldp;

static void bm_philox_u64(benchmark::State& state) {
  RngStream rng(1, 0);
  std::uint64_t sink = 0;
  for (auto _ : state) {
    sink ^= rng.next_u64();
  }
  benchmark::DoNotOptimize(sink);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_philox_u64);

static void bm_log_state_walk(benchmark::State& state) {
  RngStream rng(1, 1);
  LogStateWalker walker(ProcessKind::c_process(1));
  for (auto _ : state) {
    walker.reset();
    for (int k = 0; k < 80; ++k) walker.step(rng.uniform_open01());
    benchmark::DoNotOptimize(walker.log_state());
  }
  state.SetItemsProcessed(state.iterations() * 80);
}
BENCHMARK(bm_log_state_walk);

static void bm_exact_path(benchmark::State& state) {
  RngStream rng(1, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_path_transition(ProcessKind::a_process(2), 50, rng));
  }
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(bm_exact_path);

static void bm_coupled_path(benchmark::State& state) {
  RngStream rng(1, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_path_coupled(ProcessKind::c_process(1), 50, rng));
  }
  state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(bm_coupled_path);
