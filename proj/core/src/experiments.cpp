#include "eldp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace eldp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kChunkReplicas = 1 << 16;

std::uint64_t count_hits_chunk(ProcessKind kind, std::size_t n, double log_threshold,
                               TailSide side, std::uint64_t replicas,
                               std::uint64_t seed, std::uint64_t stream) {
  RngStream rng(seed, stream);
  LogStateWalker walker(kind);
  std::uint64_t hits = 0;
  for (std::uint64_t r = 0; r < replicas; ++r) {
    walker.reset();
    for (std::size_t k = 0; k < n; ++k) walker.step(rng.uniform_open01());
    const double ls = walker.log_state();
    if (side == TailSide::Lower ? ls <= log_threshold : ls >= log_threshold) ++hits;
  }
  return hits;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

// Kernel row probabilities for `cells` single states starting at the
// smallest reachable state, plus the tail.
std::vector<double> kernel_row_probs(ProcessKind kind, std::uint64_t from,
                                     std::size_t cells) {
  const double w = kind.family == Family::C ? static_cast<double>(from)
                                            : static_cast<double>(from - 1);
  const std::uint64_t first = kind.family == Family::C ? from + 1 : from;
  std::vector<double> probs;
  probs.reserve(cells + 1);
  for (std::size_t c = 0; c < cells; ++c) {
    const double j = static_cast<double>(first + c);
    probs.push_back(w / (j * (j - 1.0)));
  }
  const double last = static_cast<double>(first + cells - 1);
  probs.push_back(w / last);  // tail: P(next > first+cells-1) = w / (first+cells-1)
  return probs;
}

std::size_t auto_cells(ProcessKind kind, std::uint64_t from, std::uint64_t samples) {
  const double w = kind.family == Family::C ? static_cast<double>(from)
                                            : static_cast<double>(from - 1);
  const std::uint64_t first = kind.family == Family::C ? from + 1 : from;
  std::size_t cells = 0;
  while (cells < 200) {
    const double j = static_cast<double>(first + cells);
    if (static_cast<double>(samples) * w / (j * (j + 1.0)) < 5.0) break;
    ++cells;
  }
  return std::max<std::size_t>(cells, 2);
}

GofResult chisq_against_row(ProcessKind kind, std::uint64_t from,
                            const std::vector<double>& observed,
                            std::uint64_t total) {
  const std::size_t cells = observed.size() - 1;
  std::vector<double> expected = kernel_row_probs(kind, from, cells);
  for (double& e : expected) e *= static_cast<double>(total);
  return pearson_chisq(observed, expected);
}

}  // namespace

TailEstimate estimate_tail_mc(ProcessKind kind, std::size_t n, double x, TailSide side,
                              std::uint64_t replicas, std::uint64_t seed,
                              std::uint64_t stream_base, int threads) {
  if (replicas < 1000) throw std::domain_error("estimate_tail_mc needs replicas >= 1000");
  const double log_threshold = static_cast<double>(n) * (1.0 + x);

  const std::uint64_t n_chunks = (replicas + kChunkReplicas - 1) / kChunkReplicas;
  std::vector<std::uint64_t> chunk_hits(n_chunks, 0);
  auto run_range = [&](std::uint64_t c0, std::uint64_t c1) {
    for (std::uint64_t c = c0; c < c1; ++c) {
      const std::uint64_t lo = c * kChunkReplicas;
      const std::uint64_t cnt = std::min<std::uint64_t>(kChunkReplicas, replicas - lo);
      chunk_hits[c] = count_hits_chunk(kind, n, log_threshold, side, cnt, seed,
                                       stream_base + c);
    }
  };
  if (threads <= 1 || n_chunks <= 1) {
    run_range(0, n_chunks);
  } else {
    const std::uint64_t width = std::min<std::uint64_t>(threads, n_chunks);
    std::vector<std::thread> pool;
    for (std::uint64_t t = 0; t < width; ++t) {
      const std::uint64_t c0 = n_chunks * t / width;
      const std::uint64_t c1 = n_chunks * (t + 1) / width;
      pool.emplace_back(run_range, c0, c1);
    }
    for (auto& th : pool) th.join();
  }
  std::uint64_t hits = 0;
  for (std::uint64_t c = 0; c < n_chunks; ++c) hits += chunk_hits[c];

  TailEstimate est;
  est.kind = kind;
  est.n = n;
  est.x = x;
  est.side = side;
  est.method = TailMethod::MonteCarlo;
  est.replicas = replicas;
  const double N = static_cast<double>(replicas);
  if (hits == 0) {
    est.log_prob = kNegInf;
    est.std_error = std::numeric_limits<double>::infinity();
    est.log_prob_upper95 = std::log(3.0 / N);
  } else {
    const double p = static_cast<double>(hits) / N;
    est.log_prob = std::log(p);
    est.std_error = std::sqrt((1.0 - p) / (N * p));  // delta method on log p
    est.log_prob_upper95 = est.log_prob + 1.96 * est.std_error;
  }
  return est;
}

TailEstimate estimate_tail_dp(ProcessKind kind, std::size_t n, double x,
                              std::uint64_t state_budget) {
  const TailProbResult tail = tail_prob_lower(kind, n, x, state_budget);
  TailEstimate est;
  est.kind = kind;
  est.n = n;
  est.x = x;
  est.side = TailSide::Lower;
  est.method = TailMethod::DpExact;
  est.replicas = 0;
  est.log_prob = tail.log_prob;
  est.std_error = 0.0;
  est.log_prob_upper95 = tail.log_prob;
  return est;
}

double two_point_slope(const TailEstimate& at_n1, const TailEstimate& at_n2) {
  if (at_n1.n == at_n2.n) throw std::domain_error("two_point_slope needs distinct n");
  return (-at_n2.log_prob + at_n1.log_prob) /
         (static_cast<double>(at_n2.n) - static_cast<double>(at_n1.n));
}

RateFit fit_rate(std::span<const TailEstimate> estimates) {
  std::vector<TailEstimate> finite;
  for (const auto& e : estimates) {
    if (std::isfinite(e.log_prob)) finite.push_back(e);
  }
  if (finite.size() < 2) {
    throw std::domain_error("fit_rate needs at least two finite estimates");
  }
  for (const auto& e : finite) {
    if (e.kind.family != finite.front().kind.family || e.x != finite.front().x ||
        e.side != finite.front().side) {
      throw std::domain_error("fit_rate estimates must share (kind, x, side)");
    }
  }
  std::sort(finite.begin(), finite.end(),
            [](const TailEstimate& a, const TailEstimate& b) { return a.n < b.n; });

  const bool exact = std::all_of(finite.begin(), finite.end(),
                                 [](const TailEstimate& e) { return e.std_error == 0.0; });
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (const auto& e : finite) {
    const double w = exact ? 1.0 : 1.0 / (e.std_error * e.std_error);
    const double nx = static_cast<double>(e.n);
    const double y = -e.log_prob;
    sw += w;
    swx += w * nx;
    swy += w * y;
    swxx += w * nx * nx;
    swxy += w * nx * y;
  }
  const double det = sw * swxx - swx * swx;
  RateFit fit;
  fit.estimates = finite;
  fit.slope = (sw * swxy - swx * swy) / det;
  fit.intercept = (swxx * swy - swx * swxy) / det;
  fit.stderr_slope = std::sqrt(sw / det);
  fit.two_point_last = two_point_slope(finite[finite.size() - 2], finite.back());
  fit.two_point_span = two_point_slope(finite.front(), finite.back());
  return fit;
}

GofResult gof_transition(ProcessKind kind, std::uint64_t from_state,
                         std::uint64_t samples, RngStream& rng, std::size_t cells) {
  if (samples < 10'000) throw std::domain_error("gof_transition needs samples >= 10^4");
  if (cells == 0) cells = auto_cells(kind, from_state, samples);
  const std::uint64_t first = kind.family == Family::C ? from_state + 1 : from_state;
  std::vector<double> observed(cells + 1, 0.0);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double u = rng.uniform_open01();
    const std::uint64_t j = kind.family == Family::C ? step_c(from_state, u)
                                                     : step_a(from_state, u);
    const std::uint64_t off = j - first;
    ++observed[off < cells ? off : cells];
  }
  return chisq_against_row(kind, from_state, observed, samples);
}

GofResult gof_record_transitions(std::uint64_t from_state, std::uint64_t n_streams,
                                 std::size_t stream_len, RngStream& rng,
                                 std::size_t cells) {
  if (from_state < 2) throw std::domain_error("records from state 1 are the trivial first record");
  const ProcessKind kind = ProcessKind::c_process(1);
  std::uint64_t transitions = 0;
  if (cells == 0) cells = 27;  // j in [from+1, from+cells], tail holds the rest
  const std::uint64_t first = from_state + 1;
  if (stream_len < first + cells) {
    throw std::domain_error("stream horizon too short for the requested binning");
  }
  std::vector<double> observed(cells + 1, 0.0);
  std::vector<double> stream(stream_len);
  for (std::uint64_t s = 0; s < n_streams; ++s) {
    for (auto& v : stream) v = rng.uniform_open01();
    // Walk records; when a record lands exactly on from_state, classify the
    // next record. No record by the horizon falls in the tail bin, which is
    // exact: "next > horizon" is a subset of "next > from + cells".
    double best = stream[0];
    bool from_seen = false;
    for (std::size_t j = 1; j < stream_len; ++j) {
      if (stream[j] > best) {
        best = stream[j];
        const std::uint64_t idx = j + 1;
        if (from_seen) {
          const std::uint64_t off = idx - first;
          ++observed[off < cells ? off : cells];
          ++transitions;
          from_seen = false;
        }
        if (idx == from_state) from_seen = true;
      }
    }
    if (from_seen) {
      ++observed[cells];
      ++transitions;
    }
  }
  return chisq_against_row(kind, from_state, observed, transitions);
}

GofResult gof_digit_transitions(ExpansionKind kind, std::uint64_t from_digit,
                                std::uint64_t samples, RngStream& rng,
                                std::size_t cells) {
  const ProcessKind row_kind = kind == ExpansionKind::ModifiedEngel
                                   ? ProcessKind::c_process(1)
                                   : ProcessKind::a_process(2);
  const std::uint64_t first = row_kind.family == Family::C ? from_digit + 1 : from_digit;
  if (cells == 0) cells = 40;
  std::vector<double> observed(cells + 1, 0.0);
  std::uint64_t transitions = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const DigitSequence seq = sample_digits_uniform(kind, 2, rng);
    if (seq.digits[0] != from_digit) continue;
    if (!seq.digits[1].fits_ulong_p()) {
      ++observed[cells];
      ++transitions;
      continue;
    }
    const std::uint64_t d2 = seq.digits[1].get_ui();
    const std::uint64_t off = d2 - first;
    ++observed[off < cells ? off : cells];
    ++transitions;
  }
  return chisq_against_row(row_kind, from_digit, observed, transitions);
}

GofResult cross_validate_samplers(ProcessKind kind, std::size_t n,
                                  std::uint64_t replicas, std::uint64_t seed,
                                  std::uint64_t stream_base) {
  if (n > 5) throw std::domain_error("cross-validation marginals need n <= 5 for populated bins");
  const std::uint64_t min_state =
      kind.family == Family::C ? kind.initial + n : kind.initial;
  const std::size_t cells = 150;
  std::vector<double> counts_a(cells + 1, 0.0), counts_b(cells + 1, 0.0);

  RngStream rng_a(seed, stream_base);
  RngStream rng_b(seed, stream_base + (1ull << 32));
  for (std::uint64_t r = 0; r < replicas; ++r) {
    const ProcessPath p = sample_path_transition(kind, n, rng_a);
    const CoupledPath q = sample_path_coupled(kind, n, rng_b);
    const auto classify = [&](const BigInt& state, std::vector<double>& counts) {
      if (!state.fits_ulong_p()) {
        ++counts[cells];
        return;
      }
      const std::uint64_t j = state.get_ui();
      const std::uint64_t off = j - min_state;
      ++counts[off < cells ? off : cells];
    };
    classify(p.states.back(), counts_a);
    classify(q.states.back(), counts_b);
  }
  return two_sample_chisq(counts_a, counts_b);
}

GapReport coupling_gap_report(std::span<const std::size_t> n_values,
                              std::uint64_t paths, RngStream& rng) {
  std::vector<std::size_t> ns(n_values.begin(), n_values.end());
  std::sort(ns.begin(), ns.end());
  if (ns.empty() || ns.front() < 1) throw std::domain_error("need positive n values");
  const std::size_t n_max = ns.back();

  std::vector<std::vector<double>> c_sups(ns.size()), a_sups(ns.size());
  for (auto& v : c_sups) v.reserve(paths);
  for (auto& v : a_sups) v.reserve(paths);
  GapReport report;
  report.paths = paths;
  report.min_c_gap = std::numeric_limits<double>::infinity();
  report.min_a_gap = std::numeric_limits<double>::infinity();

  for (std::uint64_t p = 0; p < paths; ++p) {
    double bsum = 0.0;
    BigInt c_state = 1;
    BigInt a_state = 1;
    double c_sup = 0.0, a_sup = 0.0;
    std::size_t next_checkpoint = 0;
    for (std::size_t k = 1; k <= n_max; ++k) {
      const double u = rng.uniform_open01();
      bsum += -std::log(u);
      c_state = floor_div_dyadic(c_state, u) + 1;
      a_state = floor_div_dyadic(a_state, u);
      const double c_gap = log_bigint(c_state) - bsum;
      const double a_gap = bsum - log_bigint(a_state);
      report.min_c_gap = std::min(report.min_c_gap, c_gap);
      report.min_a_gap = std::min(report.min_a_gap, a_gap);
      c_sup = std::max(c_sup, c_gap);
      a_sup = std::max(a_sup, a_gap);
      while (next_checkpoint < ns.size() && k == ns[next_checkpoint]) {
        c_sups[next_checkpoint].push_back(c_sup);
        a_sups[next_checkpoint].push_back(a_sup);
        ++next_checkpoint;
      }
    }
  }

  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::sort(c_sups[i].begin(), c_sups[i].end());
    std::sort(a_sups[i].begin(), a_sups[i].end());
    GapReportRow row;
    row.n = ns[i];
    row.c_gap_q50 = quantile_sorted(c_sups[i], 0.50);
    row.c_gap_q90 = quantile_sorted(c_sups[i], 0.90);
    row.c_gap_q99 = quantile_sorted(c_sups[i], 0.99);
    row.a_gap_q50 = quantile_sorted(a_sups[i], 0.50);
    row.a_gap_q90 = quantile_sorted(a_sups[i], 0.90);
    row.a_gap_q99 = quantile_sorted(a_sups[i], 0.99);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace eldp
