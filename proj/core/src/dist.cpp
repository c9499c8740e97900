#include "eldp/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eldp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

ForwardDp::ForwardDp(ProcessKind kind, std::uint64_t cap)
    : kind_(kind),
      cap_(cap),
      support_min_(kind.initial),
      log_escaped_(kNegInf),
      log_error_bound_(kNegInf) {
  if (cap < kind.initial + 1) {
    throw std::domain_error("DP cap too small to hold the initial state");
  }
  values_.assign(cap + 1, 0.0);
  values_[kind.initial] = 1.0;
}

void ForwardDp::track_moment_error(double theta) {
  if (theta > 0.0) throw unsupported_error("moment error tracking needs theta <= 0");
  track_error_ = true;
  error_theta_ = theta;
  log_error_bound_ = kNegInf;
}

void ForwardDp::step() {
  const bool family_c = kind_.family == Family::C;
  const double scale_log = static_cast<double>(scale_exp2_) * M_LN2;

  // One pass, in place. prefix accumulates sum_i v[i] * w(i) with
  // w(i) = i (family C, over i < j) or i-1 (family A, over i <= j).
  KahanSum prefix;
  double max_new = 0.0;
  const std::uint64_t lo = std::max<std::uint64_t>(2, support_min_);
  if (family_c) {
    // States below the loop start (only i = 1 when C starts at 1) still feed
    // every transition sum.
    for (std::uint64_t i = support_min_; i < lo; ++i) {
      prefix.add(values_[i] * static_cast<double>(i));
    }
  }
  for (std::uint64_t j = lo; j <= cap_; ++j) {
    const double vj = values_[j];
    const double dj = static_cast<double>(j);
    if (!family_c) prefix.add(vj * (dj - 1.0));
    const double next = prefix.sum / (dj * (dj - 1.0));
    if (family_c) prefix.add(vj * dj);
    values_[j] = next;
    if (next > max_new) max_new = next;
  }
  const double total_weight = prefix.sum;  // sum_i v[i] w(i), full range

  // Mass crossing the cap this step: sum_i p(i) w(i) / cap.
  const double log_cap = std::log(static_cast<double>(cap_));
  double log_inc = kNegInf;
  if (total_weight > 0.0) {
    log_inc = std::log(total_weight) + scale_log - log_cap;
    log_escaped_ = log_add(log_escaped_, log_inc);
  }

  if (track_error_) {
    // Escaped states evolve their theta-moment by at most mu per step.
    const double log_mu =
        (1.0 - error_theta_) * std::log1p(1.0 / static_cast<double>(cap_)) -
        std::log1p(-error_theta_);
    if (log_error_bound_ != kNegInf) log_error_bound_ += log_mu;
    if (log_inc != kNegInf) {
      log_error_bound_ = log_add(log_error_bound_, log_inc + error_theta_ * log_cap);
    }
  }

  ++n_;
  if (family_c) {
    if (support_min_ < cap_) values_[support_min_] = 0.0;
    ++support_min_;
  }

  // Exact power-of-two rescale keeps per-state values centered near 1.
  if (max_new > 0.0) {
    int e = 0;
    std::frexp(max_new, &e);
    if (e != 0) {
      const double f = std::ldexp(1.0, -e);
      for (std::uint64_t j = support_min_; j <= cap_; ++j) values_[j] *= f;
      scale_exp2_ += e;
    }
  }
}

void ForwardDp::advance(std::size_t steps) {
  for (std::size_t k = 0; k < steps; ++k) step();
}

double ForwardDp::log_prob(std::uint64_t j) const {
  if (j < support_min_ || j > cap_ || values_[j] <= 0.0) return kNegInf;
  return std::log(values_[j]) + static_cast<double>(scale_exp2_) * M_LN2;
}

double ForwardDp::log_mass_leq(std::uint64_t K) const {
  K = std::min(K, cap_);
  if (K < support_min_) return kNegInf;
  KahanSum s;
  for (std::uint64_t j = support_min_; j <= K; ++j) s.add(values_[j]);
  if (s.sum <= 0.0) return kNegInf;
  return std::log(s.sum) + static_cast<double>(scale_exp2_) * M_LN2;
}

double ForwardDp::log_total_mass() const {
  return log_add(log_mass_leq(cap_), log_escaped_);
}

double ForwardDp::log_moment(double theta) const {
  if (theta > 0.0) throw unsupported_error("log_moment needs theta <= 0");
  KahanSum s;
  for (std::uint64_t j = support_min_; j <= cap_; ++j) {
    if (values_[j] > 0.0) {
      s.add(values_[j] * std::exp(theta * std::log(static_cast<double>(j))));
    }
  }
  if (s.sum <= 0.0) return kNegInf;
  return std::log(s.sum) + static_cast<double>(scale_exp2_) * M_LN2;
}

double ForwardDp::log_moment_error_bound() const {
  if (!track_error_) throw std::logic_error("moment error tracking was not enabled");
  return log_error_bound_;
}

double TruncatedDistribution::log_prob(std::uint64_t j) const {
  if (j < support_min || j > cap) return kNegInf;
  return log_probs[j - support_min];
}

TruncatedDistribution forward_dp(ProcessKind kind, std::size_t n, std::uint64_t cap) {
  if (n < 1) throw std::domain_error("forward_dp needs n >= 1");
  ForwardDp dp(kind, cap);
  dp.advance(n);
  TruncatedDistribution out;
  out.kind = kind;
  out.n = n;
  out.cap = cap;
  out.support_min = dp.support_min();
  out.log_escaped = dp.log_escaped();
  out.log_probs.resize(cap - out.support_min + 1);
  for (std::uint64_t j = out.support_min; j <= cap; ++j) {
    out.log_probs[j - out.support_min] = dp.log_prob(j);
  }
  return out;
}

TailProbResult tail_prob_lower(ProcessKind kind, std::size_t n, double x,
                               std::uint64_t state_budget) {
  const double exponent = static_cast<double>(n) * (1.0 + x);
  const double k_real = std::floor(std::exp(exponent));
  if (!(k_real >= static_cast<double>(kind.initial))) {
    throw std::domain_error("threshold below the initial state; the event is empty");
  }
  if (k_real > static_cast<double>(state_budget)) {
    throw resource_error("tail threshold exceeds the state budget; lower n or x");
  }
  const std::uint64_t K = static_cast<std::uint64_t>(k_real);
  ForwardDp dp(kind, std::max<std::uint64_t>(K, kind.initial + 1));
  dp.advance(n);
  return {K, dp.log_mass_leq(K)};
}

LogMgfResult log_mgf(ProcessKind kind, std::size_t n, double theta, std::uint64_t cap) {
  if (theta > 0.0) {
    throw unsupported_error(
        "truncated-DP moments are unavailable for theta > 0 (no rigorous "
        "truncation bound); use Monte Carlo");
  }
  ForwardDp dp(kind, cap);
  dp.track_moment_error(theta);
  dp.advance(n);
  LogMgfResult res;
  res.kind = kind;
  res.n = n;
  res.theta = theta;
  res.cap = cap;
  res.log_value = dp.log_moment(theta);
  const double log_err = dp.log_moment_error_bound();
  res.error_bound =
      log_err == kNegInf ? 0.0 : std::log1p(std::exp(log_err - res.log_value));
  return res;
}

LemmaBracket lemma1_bracket(std::uint64_t j, double theta, std::uint64_t truncation) {
  if (j < 1) throw std::domain_error("lemma1_bracket needs j >= 1");
  if (theta >= 1.0) throw std::domain_error("the series diverges for theta >= 1");
  std::uint64_t K = truncation;
  if (K == 0) K = std::max<std::uint64_t>(4 * j, 10'000'000 / j);
  if (K <= j) throw std::domain_error("truncation point must exceed j");

  const double dj = static_cast<double>(j);
  const double log_j = std::log(dj);
  // Partial sum of (j/(k(k-1))) (k/j)^theta, k = j+1..K.
  KahanSum partial;
  for (std::uint64_t k = j + 1; k <= K; ++k) {
    const double dk = static_cast<double>(k);
    partial.add(dj / (dk * (dk - 1.0)) * std::exp(theta * (std::log(dk) - log_j)));
  }

  // Tail over k > K: terms equal j^{1-theta} k^{theta-2} (1 + 1/(k-1)), so
  //   j^{1-theta} * S <= tail <= j^{1-theta} * S * (1 + 1/K)
  // with S = sum_{k>K} k^{theta-2} bracketed by integral comparison:
  //   K^{theta-1}/(1-theta) - K^{theta-2} <= S <= K^{theta-1}/(1-theta).
  const double dK = static_cast<double>(K);
  const double s_hi = std::exp((theta - 1.0) * std::log(dK)) / (1.0 - theta);
  const double s_lo = std::max(0.0, s_hi - std::exp((theta - 2.0) * std::log(dK)));
  const double j_pow = std::exp((1.0 - theta) * log_j);
  const double tail_lo = j_pow * s_lo;
  const double tail_hi = j_pow * s_hi * (1.0 + 1.0 / dK);

  LemmaBracket br;
  br.j = j;
  br.theta = theta;
  br.value_lo = partial.sum + tail_lo;
  br.value_hi = partial.sum + tail_hi;
  br.value = partial.sum + 0.5 * (tail_lo + tail_hi);
  br.lower = std::exp((theta - 1.0) * std::log1p(1.0 / dj)) / (1.0 - theta);
  br.upper = (1.0 + 1.0 / dj) / (1.0 - theta);
  return br;
}

}  // namespace eldp
