#include <benchmark/benchmark.h>

#include "eldp/digits.hpp"
#include "eldp/chains.hpp"
#include "eldp/rng.hpp"

using namespace eldp;

static void bm_engel_expand(benchmark::State& state) {
  RngStream rng(7, 0);
  for (auto _ : state) {
    const unsigned long q = 2 + rng.next_u64() % 999'999;
    const unsigned long p = 1 + rng.next_u64() % (q - 1);
    Rational x(p, q);
    x.canonicalize();
    benchmark::DoNotOptimize(engel_expand(x, 100'000));
  }
}
BENCHMARK(bm_engel_expand);

static void bm_certified_digits(benchmark::State& state) {
  const auto n_digits = static_cast<std::size_t>(state.range(0));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    RngStream rng(11, stream++);
    try {
      benchmark::DoNotOptimize(sample_digits_uniform(ExpansionKind::Engel, n_digits, rng));
    } catch (const budget_exhausted&) {
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n_digits));
}
BENCHMARK(bm_certified_digits)->Arg(2)->Arg(10)->Arg(30);
