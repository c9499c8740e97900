#pragma once

#include <cstdint>
#include <vector>

#include "eldp/chains.hpp"
#include "eldp/common.hpp"

namespace eldp {

// Exact forward dynamic programming for the marginal law of a chain,
// truncated at a state cap J. Both families are monotone and mass above J
// never returns, so the tracked probabilities are the true marginals up to
// floating-point rounding, and the escaped mass is exact as well.
//
// Storage is a scaled linear frame: values[j] = p_n(j) / 2^scale_exp2.
// Rescaling is by powers of two only, so it never introduces rounding;
// prefix sums are compensated. This keeps per-state relative accuracy even
// when absolute log-probabilities drift to -10^5 and below (the within-step
// spread fits double range for every workload the queries target).
class ForwardDp {
 public:
  // cap must be at least initial + 1.
  ForwardDp(ProcessKind kind, std::uint64_t cap);

  void step();
  void advance(std::size_t steps);

  ProcessKind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  std::uint64_t cap() const { return cap_; }

  // log P(X_n = j); -inf outside [support_min, cap].
  double log_prob(std::uint64_t j) const;
  // log P(X_n <= K) for K <= cap. Exact by monotonicity.
  double log_mass_leq(std::uint64_t K) const;
  // log of the total mass that has ever exceeded the cap.
  double log_escaped() const { return log_escaped_; }
  // log of total tracked+escaped mass; 0 up to rounding.
  double log_total_mass() const;

  std::uint64_t support_min() const { return support_min_; }

  // log sum_{j<=cap} p_n(j) j^theta for theta <= 0.
  double log_moment(double theta) const;

  // Rigorous bound on the escaped contribution sum_{j>cap} p_n(j) j^theta,
  // maintained per step for the theta registered ahead of the run:
  // mass escaping at step k contributes at most (its probability) * cap^theta,
  // and each further step multiplies an escaped state's theta-moment by at
  // most (1 + 1/cap)^(1-theta) / (1-theta)  (the bracketing-lemma envelope).
  void track_moment_error(double theta);
  double log_moment_error_bound() const;

 private:
  ProcessKind kind_;
  std::uint64_t cap_;
  std::uint64_t support_min_;
  std::size_t n_ = 0;
  std::vector<double> values_;
  long scale_exp2_ = 0;
  double log_escaped_;
  // moment-error tracker
  bool track_error_ = false;
  double error_theta_ = 0.0;
  double log_error_bound_;
};

struct TruncatedDistribution {
  ProcessKind kind;
  std::size_t n = 0;
  std::uint64_t cap = 0;
  std::vector<double> log_probs;  // index j - support_min
  std::uint64_t support_min = 0;
  double log_escaped = 0.0;

  double log_prob(std::uint64_t j) const;
};

// Runs the DP n steps at the given cap and materializes the marginal law.
TruncatedDistribution forward_dp(ProcessKind kind, std::size_t n, std::uint64_t cap);

// log P( (log X_n - n)/n <= x ) = log P(X_n <= floor(e^{n(1+x)})), computed
// exactly from the DP. Throws resource_error when the implied threshold
// exceeds state_budget.
struct TailProbResult {
  std::uint64_t threshold = 0;
  double log_prob = 0.0;
};
TailProbResult tail_prob_lower(ProcessKind kind, std::size_t n, double x,
                               std::uint64_t state_budget = 100'000'000);

// Truncated-DP moment log E(X_n^theta) for theta <= 0, with a rigorous
// one-sided truncation bracket: the true log-value lies in
// [log_value, log_value + error_bound]. theta > 0 is rejected
// (unsupported_error) since truncation error is unbounded there.
struct LogMgfResult {
  ProcessKind kind;
  std::size_t n = 0;
  double theta = 0.0;
  std::uint64_t cap = 0;
  double log_value = 0.0;
  double error_bound = 0.0;
};
LogMgfResult log_mgf(ProcessKind kind, std::size_t n, double theta, std::uint64_t cap);

// The elementary series bound: for theta < 1 and j >= 1,
//   (1+1/j)^{theta-1} / (1-theta)
//     <= sum_{k>j} (j/(k(k-1))) (k/j)^theta
//     <= (1+1/j) / (1-theta).
// `value` carries the partial sum to K plus the midpoint of a rigorous
// integral tail bracket; [value_lo, value_hi] encloses the true sum.
struct LemmaBracket {
  std::uint64_t j = 0;
  double theta = 0.0;
  double lower = 0.0;
  double value = 0.0;
  double upper = 0.0;
  double value_lo = 0.0;
  double value_hi = 0.0;

  bool holds() const { return lower <= value_lo && value_hi <= upper; }
};
LemmaBracket lemma1_bracket(std::uint64_t j, double theta, std::uint64_t truncation = 0);

}  // namespace eldp
