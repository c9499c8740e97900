#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "eldp/chains.hpp"
#include "eldp/dist.hpp"
#include "eldp/stats.hpp"

namespace eldp {

enum class TailSide { Lower, Upper };
enum class TailMethod { DpExact, MonteCarlo };

struct TailEstimate {
  ProcessKind kind;
  std::size_t n = 0;
  double x = 0.0;
  TailSide side = TailSide::Lower;
  double log_prob = 0.0;   // -inf on zero hits
  double std_error = 0.0;  // of log_prob; 0 for exact DP
  TailMethod method = TailMethod::MonteCarlo;
  std::uint64_t replicas = 0;
  // One-sided 95% bound for the zero-hit case (rule of three); equals
  // log_prob's usual meaning otherwise unused.
  double log_prob_upper95 = 0.0;
};

// Monte Carlo estimate of P((log X_n - n)/n <= x) (Lower) or >= x (Upper),
// simulating in log-state space. Deterministic given (seed, stream window);
// replicas fan out over stream indices in fixed chunks and counts are
// aggregated in index order, so the result is independent of thread count.
TailEstimate estimate_tail_mc(ProcessKind kind, std::size_t n, double x, TailSide side,
                              std::uint64_t replicas, std::uint64_t seed,
                              std::uint64_t stream_base = 0, int threads = 1);

// Exact lower-tail estimate through the truncated DP (std_error 0).
TailEstimate estimate_tail_dp(ProcessKind kind, std::size_t n, double x,
                              std::uint64_t state_budget = 100'000'000);

// Difference quotient (-log P(n2) + log P(n1)) / (n2 - n1); robust to
// polynomial prefactors.
double two_point_slope(const TailEstimate& at_n1, const TailEstimate& at_n2);

// Weighted least-squares fit of -log P against n over estimates sharing
// (kind, x, side). `slope` is the fitted rate. Two-point slopes are
// reported alongside: between the two largest n, and between the extreme n.
struct RateFit {
  std::vector<TailEstimate> estimates;
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double two_point_last = 0.0;
  double two_point_span = 0.0;
};
RateFit fit_rate(std::span<const TailEstimate> estimates);

// Pearson chi-square of one-step transition frequencies from a fixed state
// against the exact kernel. `cells` single-state bins (starting at the
// smallest reachable state) plus one tail bin; cells = 0 picks the widest
// binning with every expected count >= 5 (capped at 200).
GofResult gof_transition(ProcessKind kind, std::uint64_t from_state,
                         std::uint64_t samples, RngStream& rng, std::size_t cells = 0);

// Record-time transition test: extracts records from i.i.d. uniform
// streams and tests the observed (L_k = from -> L_{k+1}) frequencies
// against the family-C kernel row. Next records falling beyond the stream
// horizon land in the tail bin, which keeps the binning exact.
GofResult gof_record_transitions(std::uint64_t from_state, std::uint64_t n_streams,
                                 std::size_t stream_len, RngStream& rng,
                                 std::size_t cells = 0);

// Digit transition test: certified digit pairs of uniform randoms, d1 ->
// d2 conditioned on d1 = from_digit, against the matching kernel row
// (family C for modified-Engel digits, family A for Engel digits).
GofResult gof_digit_transitions(ExpansionKind kind, std::uint64_t from_digit,
                                std::uint64_t samples, RngStream& rng,
                                std::size_t cells = 0);

// Two-sample chi-square between the step-n marginals of the closed-form
// transition sampler and the exponential-increment coupling, on disjoint
// stream windows of the same seed.
GofResult cross_validate_samplers(ProcessKind kind, std::size_t n,
                                  std::uint64_t replicas, std::uint64_t seed,
                                  std::uint64_t stream_base = 0);

// Quantiles of the running coupling gaps sup_{k<=n}(log C_k - B*_k) and
// sup_{k<=n}(B*_k - log a_k) across sampled coupled paths. Both gaps are
// nonnegative path by path; their growth in n is reported, not bounded.
struct GapReportRow {
  std::size_t n = 0;
  double c_gap_q50 = 0.0, c_gap_q90 = 0.0, c_gap_q99 = 0.0;
  double a_gap_q50 = 0.0, a_gap_q90 = 0.0, a_gap_q99 = 0.0;
};
struct GapReport {
  std::vector<GapReportRow> rows;
  double min_c_gap = 0.0;  // min over paths/steps of log C_k - B*_k
  double min_a_gap = 0.0;  // min over paths/steps of B*_k - log a_k
  std::uint64_t paths = 0;
};
GapReport coupling_gap_report(std::span<const std::size_t> n_values,
                              std::uint64_t paths, RngStream& rng);

}  // namespace eldp
