#include <benchmark/benchmark.h>

#include "eldp/dist.hpp"

using namespace eldp;

// One DP step should scale linearly in the cap.
static void bm_dp_step(benchmark::State& state) {
  const auto cap = static_cast<std::uint64_t>(state.range(0));
  ForwardDp dp(ProcessKind::a_process(2), cap);
  dp.advance(3);  // populate some support
  for (auto _ : state) {
    dp.step();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cap));
}
BENCHMARK(bm_dp_step)->Arg(100'000)->Arg(1'000'000)->Arg(10'000'000);

static void bm_tail_query(benchmark::State& state) {
  ForwardDp dp(ProcessKind::c_process(1), 1'000'000);
  dp.advance(10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dp.log_mass_leq(500'000));
  }
}
BENCHMARK(bm_tail_query);

static void bm_lemma_bracket(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(lemma1_bracket(10, -1.0, 1'000'000));
  }
}
BENCHMARK(bm_lemma_bracket);
