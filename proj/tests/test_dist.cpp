#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cmath>
#include <map>
#include <vector>

#include "eldp/dist.hpp"

using namespace eldp;

namespace {

// Independent oracle: exact rational forward recursion by direct kernel
// sums (no prefix rewrite), tracking escaped mass exactly.
struct ExactDp {
  std::map<std::uint64_t, Rational> probs;
  Rational escaped = 0;

  static ExactDp run(ProcessKind kind, std::size_t n, std::uint64_t cap) {
    ExactDp dp;
    dp.probs[kind.initial] = 1;
    for (std::size_t s = 0; s < n; ++s) {
      std::map<std::uint64_t, Rational> next;
      for (const auto& [i, pi] : dp.probs) {
        const unsigned long w = kind.family == Family::C ? i : i - 1;
        const std::uint64_t j_lo = kind.family == Family::C ? i + 1 : i;
        for (std::uint64_t j = j_lo; j <= cap; ++j) {
          Rational kern(w, j * (j - 1));
          kern.canonicalize();
          next[j] += pi * kern;
        }
        Rational tail(w, cap);
        tail.canonicalize();
        dp.escaped += pi * tail;
      }
      for (auto& [j, pj] : next) pj.canonicalize();
      dp.escaped.canonicalize();
      dp.probs = std::move(next);
    }
    return dp;
  }
};

}  // namespace

TEST_CASE("one step from C_0 = 1 is the exact kernel row") {
  const auto dist = forward_dp(ProcessKind::c_process(1), 1, 10);
  for (std::uint64_t j = 2; j <= 10; ++j) {
    const double expect = 1.0 / (static_cast<double>(j) * (j - 1));
    CHECK(std::exp(dist.log_prob(j)) == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK(std::exp(dist.log_escaped) == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("DP matches the exact rational oracle for small n") {
  for (const auto kind : {ProcessKind::c_process(1), ProcessKind::a_process(2),
                          ProcessKind::a_process(3), ProcessKind::c_process(2)}) {
    for (std::size_t n = 1; n <= 3; ++n) {
      const std::uint64_t cap = 60;
      const auto oracle = ExactDp::run(kind, n, cap);
      const auto dist = forward_dp(kind, n, cap);
      for (const auto& [j, pj] : oracle.probs) {
        const double exact = pj.get_d();
        const double got = std::exp(dist.log_prob(j));
        CHECK(got == doctest::Approx(exact).epsilon(1e-12));
      }
      CHECK(std::exp(dist.log_escaped) ==
            doctest::Approx(oracle.escaped.get_d()).epsilon(1e-12));
    }
  }
}

TEST_CASE("mass is conserved and escape is monotone over 60 steps") {
  for (const auto kind : {ProcessKind::c_process(1), ProcessKind::a_process(2)}) {
    ForwardDp dp(kind, 1000);
    double prev_escaped = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < 60; ++s) {
      dp.step();
      CHECK(std::abs(dp.log_total_mass()) < 1e-12);
      CHECK(dp.log_escaped() >= prev_escaped);
      prev_escaped = dp.log_escaped();
    }
  }
}

TEST_CASE("the A-chain corner atom is exact to relative 1e-12") {
  ForwardDp dp(ProcessKind::a_process(2), 64);
  for (std::size_t n = 1; n <= 50; ++n) {
    dp.step();
    const double lp = dp.log_prob(2);
    CHECK(std::abs(std::expm1(lp + static_cast<double>(n) * M_LN2)) < 1e-12);
  }
}

TEST_CASE("lower tail probabilities at pinned thresholds") {
  // A family, threshold K = 2 at n = 30: exactly 2^-30.
  {
    const double x = std::log(2.0) / 30.0 - 1.0 + 1e-12;
    const auto res = tail_prob_lower(ProcessKind::a_process(2), 30, x);
    CHECK(res.threshold == 2);
    CHECK(res.log_prob == doctest::Approx(-30.0 * M_LN2).epsilon(1e-12));
  }
  // C family, n = 1, K = 2: P(C_1 = 2) = 1/2.
  {
    const double x = std::log(2.0) - 1.0 + 1e-12;
    const auto res = tail_prob_lower(ProcessKind::c_process(1), 1, x);
    CHECK(res.threshold == 2);
    CHECK(res.log_prob == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(tail_prob_lower(ProcessKind::c_process(1), 100, 0.0, 1'000'000),
                  resource_error);
}

TEST_CASE("truncated moments: exact values at n = 1") {
  // E(C_1^0) accounts for all tracked mass; the bracket covers 1 up to
  // double rounding of the bound arithmetic.
  {
    const auto res = log_mgf(ProcessKind::c_process(1), 1, 0.0, 1'000'000);
    CHECK(res.log_value > -2e-6);
    CHECK(res.log_value <= 0.0);
    CHECK(res.log_value + res.error_bound >= -1e-12);
  }
  // E(C_1^{-1}) = 2 - pi^2/6, high-precision summation oracle baked in.
  {
    const auto res = log_mgf(ProcessKind::c_process(1), 1, -1.0, 1'000'000);
    const double exact = 2.0 - M_PI * M_PI / 6.0;  // 0.35506593315177362
    CHECK(res.log_value == doctest::Approx(std::log(exact)).epsilon(1e-9));
    CHECK(res.error_bound < 1e-9);
  }
  CHECK_THROWS_AS(log_mgf(ProcessKind::c_process(1), 1, 0.5, 100), unsupported_error);
}

TEST_CASE("scaled moment stays inside the rigorous ratio envelope") {
  // E(C_n^theta) multiplies per step by a factor inside
  // [(1+1/(k+1))^{theta-1}, (1+1/(k+1))] / (1-theta) since C_k >= k+1.
  const double theta = -1.0;
  const std::size_t n = 14;
  const auto res = log_mgf(ProcessKind::c_process(1), n, theta, 1'000'000);
  double lo = std::log(2.0 - M_PI * M_PI / 6.0);
  double hi = lo;
  for (std::size_t k = 1; k < n; ++k) {
    const double r = 1.0 + 1.0 / static_cast<double>(k + 1);
    lo += (theta - 1.0) * std::log(r) - std::log1p(-theta);
    hi += std::log(r) - std::log1p(-theta);
  }
  // true value in [log_value, log_value + error_bound] must meet [lo, hi]
  CHECK(res.log_value <= hi);
  CHECK(res.log_value + res.error_bound >= lo);
}

TEST_CASE("series bracket: pinned values") {
  {
    const auto br = lemma1_bracket(1, 0.0);
    CHECK(br.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(br.lower == doctest::Approx(0.5));
    CHECK(br.upper == doctest::Approx(2.0));
    CHECK(br.holds());
  }
  {
    const auto br = lemma1_bracket(2, -1.0);
    // 4 * (1/2 - (pi^2/6 - 5/4)) = 7 - 2 pi^2 / 3
    const double exact = 7.0 - 2.0 * M_PI * M_PI / 3.0;
    CHECK(br.value == doctest::Approx(exact).epsilon(1e-8));
    CHECK(br.lower == doctest::Approx(2.0 / 9.0));
    CHECK(br.upper == doctest::Approx(0.75));
    CHECK(br.holds());
  }
  {
    const auto br = lemma1_bracket(10'000, 0.9);
    CHECK(br.holds());
    CHECK(br.value == doctest::Approx(10.0).epsilon(1e-3));
  }
  CHECK_THROWS_AS(lemma1_bracket(3, 1.0), std::domain_error);
}

TEST_CASE("corner tail at n = 40 matches pure rational arithmetic") {
  // P(C_40 <= 54): the support floor C_40 >= 41 leaves states 41..54 only.
  // The exact rational value pins the finite-n slope gap of that corner.
  const std::uint64_t cap = 54;
  std::map<std::uint64_t, Rational> probs;
  probs[1] = 1;
  for (int s = 0; s < 40; ++s) {
    std::map<std::uint64_t, Rational> next;
    for (const auto& [i, pi] : probs) {
      for (std::uint64_t j = i + 1; j <= cap; ++j) {
        Rational k(i, j * (j - 1));
        k.canonicalize();
        next[j] += pi * k;
      }
    }
    for (auto& [j, pj] : next) pj.canonicalize();
    probs = std::move(next);
  }
  Rational total = 0;
  for (const auto& [j, pj] : probs) total += pj;
  total.canonicalize();
  const double exact_log = log_bigint(total.get_num()) - log_bigint(total.get_den());

  ForwardDp dp(ProcessKind::c_process(1), cap);
  dp.advance(40);
  CHECK(dp.log_mass_leq(cap) == doctest::Approx(exact_log).epsilon(1e-12));
  CHECK(exact_log == doctest::Approx(-94.522497340645).epsilon(1e-9));
}

TEST_CASE("DP cost stays linear in the cap") {
  ForwardDp dp(ProcessKind::a_process(2), 10'000'000);
  const auto t0 = std::chrono::steady_clock::now();
  dp.advance(5);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  // ~5 * 10^7 fused ops; generous envelope for slow machines.
  CHECK(secs < 20.0);
  // mass conservation holds at large caps too
  CHECK(std::abs(dp.log_total_mass()) < 1e-11);
}

TEST_CASE("cap must hold the initial state") {
  CHECK_THROWS_AS(ForwardDp(ProcessKind::a_process(5), 5), std::domain_error);
}
