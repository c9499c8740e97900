// eldp: digit expansions, monotone-chain samplers, exact tail DP, rate
// functions, and the verification experiment battery, behind one CLI.
//
// Exit codes: 0 success, 1 check failure, 2 usage/domain error, 3 resource
// limit. All outputs carry the schema version and an echo of the run
// configuration; identical invocations produce byte-identical output.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eldp/acceptance.hpp"
#include "eldp/chains.hpp"
#include "eldp/common.hpp"
#include "eldp/digits.hpp"
#include "eldp/dist.hpp"
#include "eldp/experiments.hpp"
#include "eldp/ldp.hpp"
#include "eldp/stats.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace eldp;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct Output {
  std::string path;  // empty: stdout

  void write(const std::string& content) const {
    if (path.empty()) {
      std::cout << content;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::domain_error("cannot open output file: " + path);
    out << content;
  }
};

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json json_base(const std::string& command, const json& config) {
  json j;
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["config"] = config;
  return j;
}

std::string csv_header(const std::string& command, const json& config) {
  return std::string("# ") + kSchemaVersion + " " + command + " " + config.dump() + "\n";
}

ProcessKind make_kind(const std::string& family, std::uint64_t initial) {
  if (family == "C" || family == "c") {
    return ProcessKind::c_process(initial == 0 ? 1 : initial);
  }
  if (family == "A" || family == "a") {
    return ProcessKind::a_process(initial == 0 ? 2 : initial);
  }
  throw std::domain_error("family must be C or A");
}

ExpansionKind make_expansion_kind(const std::string& kind) {
  if (kind == "engel") return ExpansionKind::Engel;
  if (kind == "modified") return ExpansionKind::ModifiedEngel;
  throw std::domain_error("kind must be 'engel' or 'modified'");
}

std::vector<double> parse_grid(const std::string& spec) {
  // "lo:hi:step" inclusive of hi up to rounding slack.
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw std::domain_error("grid must be lo:hi:step");
  }
  const double lo = std::stod(spec.substr(0, c1));
  const double hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(spec.substr(c2 + 1));
  if (step <= 0 || hi < lo) throw std::domain_error("grid must satisfy lo <= hi, step > 0");
  std::vector<double> xs;
  for (double x = lo; x <= hi + 1e-12; x += step) xs.push_back(x);
  return xs;
}

std::vector<std::size_t> parse_size_list(const std::string& spec) {
  std::vector<std::size_t> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoull(tok));
  }
  if (out.empty()) throw std::domain_error("expected a comma-separated list");
  return out;
}

// --- subcommand bodies ----------------------------------------------------

int cmd_expand(const std::string& kind_name, const std::string& x_text,
               const std::string& interval_text, std::size_t max_digits,
               const Output& out) {
  const ExpansionKind kind = make_expansion_kind(kind_name);
  json config = {{"kind", kind_name}, {"max_digits", max_digits}};
  DigitSequence seq;
  if (!interval_text.empty()) {
    const auto colon = interval_text.find(':');
    if (colon == std::string::npos) {
      throw std::domain_error("interval must be mantissa:bits");
    }
    BigInt m(interval_text.substr(0, colon));
    const unsigned long bits = std::stoul(interval_text.substr(colon + 1));
    config["interval"] = interval_text;
    seq = expand_certified(make_dyadic(m, bits), kind, max_digits);
  } else {
    const Rational x = parse_rational(x_text);
    config["x"] = x_text;
    seq = kind == ExpansionKind::Engel ? engel_expand(x, max_digits)
                                       : modified_engel_expand(x, max_digits);
  }
  json j = json_base("expand", config);
  json digits = json::array();
  for (const auto& d : seq.digits) digits.push_back(d.get_str());
  j["digits"] = digits;
  j["terminated"] = seq.terminated;
  out.write(j.dump() + "\n");
  return kExitOk;
}

int cmd_sample(const std::string& family, std::uint64_t initial, std::size_t n,
               std::uint64_t paths, std::uint64_t seed, std::uint64_t stream,
               const std::string& method, std::size_t digits,
               const std::string& kind_name, unsigned long budget, const Output& out) {
  std::ostringstream body;
  if (digits > 0) {
    const ExpansionKind kind = make_expansion_kind(kind_name);
    const json config = {{"kind", kind_name},   {"digits", digits}, {"paths", paths},
                         {"seed", seed},        {"stream", stream}, {"budget", budget}};
    for (std::uint64_t p = 0; p < paths; ++p) {
      RngStream rng(seed, stream + p);
      const DigitSequence seq = sample_digits_uniform(kind, digits, rng, budget);
      json j = json_base("sample", config);
      j["stream"] = stream + p;
      json ds = json::array();
      for (const auto& d : seq.digits) ds.push_back(d.get_str());
      j["digits"] = ds;
      j["terminated"] = seq.terminated;
      body << j.dump() << "\n";
    }
    out.write(body.str());
    return kExitOk;
  }

  const ProcessKind kind = make_kind(family, initial);
  const json config = {{"family", family}, {"initial", kind.initial}, {"n", n},
                       {"paths", paths},   {"seed", seed},            {"stream", stream},
                       {"method", method}};
  for (std::uint64_t p = 0; p < paths; ++p) {
    RngStream rng(seed, stream + p);
    json j = json_base("sample", config);
    j["stream"] = stream + p;
    json states = json::array();
    json logs = json::array();
    if (method == "coupled") {
      const CoupledPath path = sample_path_coupled(kind, n, rng);
      for (const auto& s : path.states) {
        states.push_back(s.get_str());
        logs.push_back(log_bigint(s));
      }
      j["states"] = states;
      j["log_state"] = logs;
      j["increments"] = path.increments;
      j["b_star"] = path.partial_sums;
    } else if (method == "transition") {
      const ProcessPath path = sample_path_transition(kind, n, rng);
      for (const auto& s : path.states) {
        states.push_back(s.get_str());
        logs.push_back(log_bigint(s));
      }
      j["states"] = states;
      j["log_state"] = logs;
    } else {
      throw std::domain_error("method must be transition or coupled");
    }
    body << j.dump() << "\n";
  }
  out.write(body.str());
  return kExitOk;
}

int cmd_records(const std::string& in_path, const Output& out) {
  std::vector<double> stream;
  const auto read_all = [&](std::istream& is) {
    double v = 0;
    while (is >> v) stream.push_back(v);
  };
  if (in_path.empty() || in_path == "-") {
    read_all(std::cin);
  } else {
    std::ifstream in(in_path);
    if (!in) throw std::domain_error("cannot open input file: " + in_path);
    read_all(in);
  }
  const ProcessPath path = record_times(stream);
  json j = json_base("records", {{"in", in_path.empty() ? "-" : in_path},
                                 {"count", stream.size()}});
  json states = json::array();
  for (const auto& s : path.states) states.push_back(s.get_str());
  j["record_times"] = states;
  out.write(j.dump() + "\n");
  return kExitOk;
}

int cmd_dp(const std::string& family, std::uint64_t initial, std::size_t n,
           std::uint64_t cap, std::uint64_t buckets, const Output& out) {
  const ProcessKind kind = make_kind(family, initial);
  const json config = {{"family", family}, {"initial", kind.initial}, {"n", n},
                       {"cap", cap},       {"buckets", buckets}};
  const TruncatedDistribution dist = forward_dp(kind, n, cap);
  std::ostringstream csv;
  csv << csv_header("dp", config);
  csv << "kind,n,state_or_bucket,log_prob\n";
  const char fam = kind.family == Family::C ? 'C' : 'A';
  const std::uint64_t span = cap - dist.support_min + 1;
  if (buckets == 0 || span <= buckets) {
    for (std::uint64_t j = dist.support_min; j <= cap; ++j) {
      const double lp = dist.log_prob(j);
      if (std::isinf(lp)) continue;
      csv << fam << ',' << n << ',' << j << ',' << fmt(lp) << '\n';
    }
  } else {
    // log-spaced buckets [lo, hi]
    const double ratio = std::pow(static_cast<double>(cap) /
                                      static_cast<double>(dist.support_min),
                                  1.0 / static_cast<double>(buckets));
    std::uint64_t lo = dist.support_min;
    for (std::uint64_t b = 0; b < buckets && lo <= cap; ++b) {
      const auto hi_f = static_cast<std::uint64_t>(
          std::floor(static_cast<double>(dist.support_min) * std::pow(ratio, b + 1)));
      const std::uint64_t hi = b + 1 == buckets ? cap : std::min(std::max(hi_f, lo), cap);
      double sum = 0.0;
      double max_lp = -std::numeric_limits<double>::infinity();
      for (std::uint64_t j = lo; j <= hi; ++j) {
        max_lp = std::max(max_lp, dist.log_prob(j));
      }
      if (std::isfinite(max_lp)) {
        for (std::uint64_t j = lo; j <= hi; ++j) {
          const double lp = dist.log_prob(j);
          if (std::isfinite(lp)) sum += std::exp(lp - max_lp);
        }
        csv << fam << ',' << n << ',' << lo << '-' << hi << ','
            << fmt(max_lp + std::log(sum)) << '\n';
      }
      lo = hi + 1;
    }
  }
  csv << fam << ',' << n << ",escaped," << fmt(dist.log_escaped) << '\n';
  out.write(csv.str());
  return kExitOk;
}

int cmd_tail(const std::string& family, std::uint64_t initial, std::size_t n, double x,
             std::uint64_t budget, const Output& out) {
  const ProcessKind kind = make_kind(family, initial);
  const auto res = tail_prob_lower(kind, n, x, budget);
  json j = json_base("tail", {{"family", family}, {"initial", kind.initial}, {"n", n},
                              {"x", x},           {"budget", budget}});
  j["threshold"] = res.threshold;
  j["log_prob"] = res.log_prob;
  j["rate_estimate"] = -res.log_prob / static_cast<double>(n);
  out.write(j.dump() + "\n");
  return kExitOk;
}

int cmd_mgf(const std::string& family, std::uint64_t initial, std::size_t n, double theta,
            std::uint64_t cap, const Output& out) {
  const ProcessKind kind = make_kind(family, initial);
  const LogMgfResult res = log_mgf(kind, n, theta, cap);
  json j = json_base("mgf", {{"family", family}, {"initial", kind.initial}, {"n", n},
                             {"theta", theta},   {"cap", cap}});
  j["log_value"] = res.log_value;
  j["per_n"] = res.log_value / static_cast<double>(n);
  j["error_bound"] = res.error_bound;
  out.write(j.dump() + "\n");
  return kExitOk;
}

int cmd_lemma1(std::uint64_t jj, double theta, std::uint64_t truncation, const Output& out) {
  const LemmaBracket br = lemma1_bracket(jj, theta, truncation);
  json j = json_base("lemma1", {{"j", jj}, {"theta", theta}, {"truncation", truncation}});
  j["lower"] = br.lower;
  j["value"] = br.value;
  j["upper"] = br.upper;
  j["value_lo"] = br.value_lo;
  j["value_hi"] = br.value_hi;
  j["holds"] = br.holds();
  out.write(j.dump() + "\n");
  return br.holds() ? kExitOk : kExitCheckFailed;
}

RateFamily make_rate_family(const std::string& family, std::uint64_t a) {
  if (family == "C" || family == "c") return RateFamily::c();
  if (family == "A" || family == "a") {
    return a == 0 || a == 2 ? RateFamily::a2() : RateFamily::a_from(a);
  }
  throw std::domain_error("family must be C or A");
}

int cmd_rate(const std::string& family, std::uint64_t a, const std::string& grid_spec,
             double x, bool has_x, const Output& out) {
  const RateFamily fam = make_rate_family(family, a);
  const json config = {{"family", family}, {"a", a},
                       {"grid", grid_spec}, {"x", has_x ? fmt(x) : "none"}};
  std::ostringstream csv;
  csv << csv_header("rate", config) << "x,value\n";
  const auto xs = has_x ? std::vector<double>{x} : parse_grid(grid_spec);
  for (const double xv : xs) csv << fmt(xv) << ',' << fmt(rate(fam, xv)) << '\n';
  out.write(csv.str());
  return kExitOk;
}

int cmd_mgf_closed(const std::string& family, const std::string& grid_spec, double theta,
                   bool has_theta, const Output& out) {
  const Family fam = family == "C" || family == "c" ? Family::C : Family::A;
  const json config = {{"family", family}, {"grid", grid_spec},
                       {"theta", has_theta ? fmt(theta) : "none"}};
  std::ostringstream csv;
  csv << csv_header("mgf-closed", config) << "theta,value\n";
  const auto ts = has_theta ? std::vector<double>{theta} : parse_grid(grid_spec);
  for (const double t : ts) csv << fmt(t) << ',' << fmt(log_mgf_closed(fam, t)) << '\n';
  out.write(csv.str());
  return kExitOk;
}

int cmd_legendre(const std::string& family, double x, double theta_lo, double theta_hi,
                 const Output& out) {
  const Family fam = family == "C" || family == "c" ? Family::C : Family::A;
  const auto res = legendre_numeric([fam](double t) { return log_mgf_closed(fam, t); },
                                    x, theta_lo, theta_hi);
  json j = json_base("legendre", {{"family", family}, {"x", x},
                                  {"theta_lo", theta_lo}, {"theta_hi", theta_hi}});
  j["supremum"] = res.supremum;
  j["argmax_theta"] = res.argmax_theta;
  j["iterations"] = res.iterations;
  json cert = json::array();
  for (const auto& [theta, g] : res.certificate) {
    cert.push_back({{"theta", theta}, {"objective", std::isinf(g) ? -1e308 : g}});
  }
  j["certificate"] = cert;
  out.write(j.dump() + "\n");
  return kExitOk;
}

int cmd_compare(const std::string& grid_spec, const Output& out) {
  const auto xs = parse_grid(grid_spec);
  const auto rows = compare_rates(xs);
  std::ostringstream csv;
  csv << csv_header("compare", {{"grid", grid_spec}}) << "x,rate_c,rate_a,gap\n";
  for (const auto& row : rows) {
    csv << fmt(row.x) << ',' << fmt(row.rate_c) << ',' << fmt(row.rate_a) << ','
        << fmt(row.gap) << '\n';
  }
  out.write(csv.str());
  return kExitOk;
}

int cmd_estimate(const std::string& family, std::uint64_t initial, std::size_t n, double x,
                 const std::string& side_name, std::uint64_t replicas, std::uint64_t seed,
                 std::uint64_t stream, int threads, const Output& out) {
  const ProcessKind kind = make_kind(family, initial);
  const TailSide side = side_name == "upper" ? TailSide::Upper : TailSide::Lower;
  if (side_name != "upper" && side_name != "lower") {
    throw std::domain_error("side must be lower or upper");
  }
  const auto est = estimate_tail_mc(kind, n, x, side, replicas, seed, stream, threads);
  json j = json_base("estimate", {{"family", family}, {"initial", kind.initial}, {"n", n},
                                  {"x", x},           {"side", side_name},
                                  {"replicas", replicas}, {"seed", seed},
                                  {"stream", stream}});
  j["log_prob"] = std::isinf(est.log_prob) ? json("-inf") : json(est.log_prob);
  j["std_error"] = std::isinf(est.std_error) ? json("inf") : json(est.std_error);
  j["log_prob_upper95"] = est.log_prob_upper95;
  j["rate_estimate"] = std::isinf(est.log_prob)
                           ? json("inf")
                           : json(-est.log_prob / static_cast<double>(n));
  out.write(j.dump() + "\n");
  return kExitOk;
}

int cmd_fit(const std::string& family, std::uint64_t initial, double x,
            const std::string& side_name, const std::string& n_list,
            const std::string& method, std::uint64_t replicas, std::uint64_t seed,
            std::uint64_t budget, int threads, const Output& out) {
  const ProcessKind kind = make_kind(family, initial);
  const auto ns = parse_size_list(n_list);
  const TailSide side = side_name == "upper" ? TailSide::Upper : TailSide::Lower;
  std::vector<TailEstimate> estimates;
  std::uint64_t stream = 0;
  for (const std::size_t n : ns) {
    if (method == "dp") {
      if (side == TailSide::Upper) {
        throw unsupported_error("exact DP covers lower tails only; use --method mc");
      }
      estimates.push_back(estimate_tail_dp(kind, n, x, budget));
    } else if (method == "mc") {
      estimates.push_back(
          estimate_tail_mc(kind, n, x, side, replicas, seed, stream << 40, threads));
      ++stream;
    } else {
      throw std::domain_error("method must be dp or mc");
    }
  }
  const RateFit fit = fit_rate(estimates);
  json j = json_base("fit", {{"family", family}, {"initial", kind.initial}, {"x", x},
                             {"side", side_name}, {"n_list", n_list},
                             {"method", method},  {"replicas", replicas},
                             {"seed", seed}});
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["stderr_slope"] = fit.stderr_slope;
  j["two_point_last"] = fit.two_point_last;
  j["two_point_span"] = fit.two_point_span;
  json pts = json::array();
  for (const auto& e : fit.estimates) {
    pts.push_back({{"n", e.n}, {"log_prob", e.log_prob}, {"std_error", e.std_error}});
  }
  j["points"] = pts;
  out.write(j.dump() + "\n");
  return kExitOk;
}

int cmd_gof(const std::string& via, const std::string& family, std::uint64_t initial,
            std::uint64_t from, std::uint64_t samples, std::uint64_t streams,
            std::size_t stream_len, const std::string& kind_name, std::uint64_t seed,
            std::uint64_t stream, std::size_t cells, const Output& out) {
  RngStream rng(seed, stream);
  GofResult res;
  json config = {{"via", via},   {"from", from}, {"seed", seed}, {"stream", stream},
                 {"cells", cells}};
  if (via == "step") {
    config["family"] = family;
    config["samples"] = samples;
    res = gof_transition(make_kind(family, initial), from, samples, rng, cells);
  } else if (via == "records") {
    config["streams"] = streams;
    config["stream_len"] = stream_len;
    res = gof_record_transitions(from, streams, stream_len, rng, cells);
  } else if (via == "digits") {
    config["kind"] = kind_name;
    config["samples"] = samples;
    res = gof_digit_transitions(make_expansion_kind(kind_name), from, samples, rng, cells);
  } else {
    throw std::domain_error("via must be step, records, or digits");
  }
  json j = json_base("gof", config);
  j["statistic"] = res.statistic;
  j["dof"] = res.dof;
  j["p_value"] = res.p_value;
  j["pass"] = res.p_value > 0.001;
  out.write(j.dump() + "\n");
  return res.p_value > 0.001 ? kExitOk : kExitCheckFailed;
}

int cmd_xval(const std::string& family, std::uint64_t initial, std::size_t n,
             std::uint64_t replicas, std::uint64_t seed, std::uint64_t stream,
             const Output& out) {
  const auto res = cross_validate_samplers(make_kind(family, initial), n, replicas, seed,
                                           stream);
  json j = json_base("xval", {{"family", family}, {"initial", initial}, {"n", n},
                              {"replicas", replicas}, {"seed", seed},
                              {"stream", stream}});
  j["statistic"] = res.statistic;
  j["dof"] = res.dof;
  j["p_value"] = res.p_value;
  j["pass"] = res.p_value > 0.001;
  out.write(j.dump() + "\n");
  return res.p_value > 0.001 ? kExitOk : kExitCheckFailed;
}

int cmd_gap(const std::string& n_list, std::uint64_t paths, std::uint64_t seed,
            std::uint64_t stream, const Output& out) {
  const auto ns = parse_size_list(n_list);
  RngStream rng(seed, stream);
  const GapReport report = coupling_gap_report(ns, paths, rng);
  std::ostringstream csv;
  csv << csv_header("gap", {{"n_list", n_list}, {"paths", paths}, {"seed", seed},
                            {"stream", stream}});
  csv << "n,c_gap_q50,c_gap_q90,c_gap_q99,a_gap_q50,a_gap_q90,a_gap_q99\n";
  for (const auto& row : report.rows) {
    csv << row.n << ',' << fmt(row.c_gap_q50) << ',' << fmt(row.c_gap_q90) << ','
        << fmt(row.c_gap_q99) << ',' << fmt(row.a_gap_q50) << ',' << fmt(row.a_gap_q90)
        << ',' << fmt(row.a_gap_q99) << '\n';
  }
  csv << "# min_c_gap=" << fmt(report.min_c_gap) << " min_a_gap=" << fmt(report.min_a_gap)
      << '\n';
  out.write(csv.str());
  return report.min_c_gap > 0.0 && report.min_a_gap >= 0.0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Engel-series digit expansions, monotone Markov chains, and "
               "large-deviation verification tools"};
  app.require_subcommand(1);

  Output out;
  app.add_option("--out", out.path, "write output to a file instead of stdout");

  // expand
  auto* expand = app.add_subcommand("expand", "digit expansion of a rational or interval");
  std::string ex_kind = "engel", ex_x, ex_interval;
  std::size_t ex_max = 64;
  expand->add_option("--kind", ex_kind, "engel | modified")->required();
  expand->add_option("--x", ex_x, "rational as p/q");
  expand->add_option("--interval", ex_interval, "dyadic interval as mantissa:bits");
  expand->add_option("--max-digits", ex_max, "digit cap");

  // sample
  auto* sample = app.add_subcommand("sample", "sample chain paths or digit sequences");
  std::string sm_family = "C", sm_method = "transition", sm_kind = "engel";
  std::uint64_t sm_initial = 0, sm_paths = 1, sm_seed = 0, sm_stream = 0;
  std::size_t sm_n = 10, sm_digits = 0;
  unsigned long sm_budget = 4096;
  sample->add_option("--family", sm_family, "C | A");
  sample->add_option("--initial", sm_initial, "initial state (default 1 for C, 2 for A)");
  sample->add_option("--n", sm_n, "steps per path");
  sample->add_option("--paths", sm_paths, "number of paths (one JSON line each)");
  sample->add_option("--seed", sm_seed, "rng seed")->required();
  sample->add_option("--stream", sm_stream, "base stream index");
  sample->add_option("--method", sm_method, "transition | coupled");
  sample->add_option("--digits", sm_digits, "sample digit sequences of this length instead");
  sample->add_option("--kind", sm_kind, "expansion kind for --digits");
  sample->add_option("--budget", sm_budget, "bit budget for --digits");

  // records
  auto* records = app.add_subcommand("records", "record times of a number stream");
  std::string rc_in;
  records->add_option("--in", rc_in, "input file (default stdin)");

  // dp
  auto* dp = app.add_subcommand("dp", "exact truncated marginal law");
  std::string dp_family = "C";
  std::uint64_t dp_initial = 0, dp_cap = 1000, dp_buckets = 10'000;
  std::size_t dp_n = 1;
  dp->add_option("--family", dp_family, "C | A")->required();
  dp->add_option("--initial", dp_initial, "initial state");
  dp->add_option("--n", dp_n, "steps")->required();
  dp->add_option("--cap", dp_cap, "state cap")->required();
  dp->add_option("--buckets", dp_buckets, "max CSV rows (log-spaced buckets when exceeded)");

  // tail
  auto* tail = app.add_subcommand("tail", "exact lower-tail probability");
  std::string tl_family = "C";
  std::uint64_t tl_initial = 0, tl_budget = 100'000'000;
  std::size_t tl_n = 1;
  double tl_x = 0.0;
  tail->add_option("--family", tl_family)->required();
  tail->add_option("--initial", tl_initial);
  tail->add_option("--n", tl_n)->required();
  tail->add_option("--x", tl_x, "deviation level")->required();
  tail->add_option("--budget", tl_budget, "state budget");

  // mgf
  auto* mgf = app.add_subcommand("mgf", "truncated-DP moment log E(X_n^theta), theta <= 0");
  std::string mg_family = "C";
  std::uint64_t mg_initial = 0, mg_cap = 1'000'000;
  std::size_t mg_n = 1;
  double mg_theta = -1.0;
  mgf->add_option("--family", mg_family)->required();
  mgf->add_option("--initial", mg_initial);
  mgf->add_option("--n", mg_n)->required();
  mgf->add_option("--theta", mg_theta)->required();
  mgf->add_option("--cap", mg_cap);

  // lemma1
  auto* lemma = app.add_subcommand("lemma1", "series bracketing inequality check");
  std::uint64_t lm_j = 1, lm_trunc = 0;
  double lm_theta = 0.0;
  lemma->add_option("--j", lm_j)->required();
  lemma->add_option("--theta", lm_theta)->required();
  lemma->add_option("--truncation", lm_trunc, "partial-sum cutoff (0 = auto)");

  // rate
  auto* rate_cmd = app.add_subcommand("rate", "closed-form rate function values");
  std::string rt_family = "C", rt_grid;
  std::uint64_t rt_a = 0;
  double rt_x = 0.0;
  rate_cmd->add_option("--family", rt_family, "C | A")->required();
  rate_cmd->add_option("--a", rt_a, "initial state for family A variants");
  auto* rt_x_opt = rate_cmd->add_option("--x", rt_x, "single evaluation point");
  rate_cmd->add_option("--grid", rt_grid, "lo:hi:step");

  // mgf-closed
  auto* mgfc = app.add_subcommand("mgf-closed", "closed-form scaled log-MGF values");
  std::string mc_family = "C", mc_grid;
  double mc_theta = 0.0;
  mgfc->add_option("--family", mc_family)->required();
  auto* mc_theta_opt = mgfc->add_option("--theta", mc_theta);
  mgfc->add_option("--grid", mc_grid, "lo:hi:step");

  // legendre
  auto* leg = app.add_subcommand("legendre", "numerical Legendre transform of a closed-form log-MGF");
  std::string lg_family = "C";
  double lg_x = 0.0, lg_lo = -200.0, lg_hi = 1.0;
  leg->add_option("--family", lg_family)->required();
  leg->add_option("--x", lg_x)->required();
  leg->add_option("--theta-lo", lg_lo);
  leg->add_option("--theta-hi", lg_hi);

  // compare
  auto* compare = app.add_subcommand("compare", "rate-gap table I_C vs I_A");
  std::string cp_grid = "-1.5:4:0.01";
  compare->add_option("--grid", cp_grid, "lo:hi:step");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo tail estimate");
  std::string es_family = "C", es_side = "upper";
  std::uint64_t es_initial = 0, es_replicas = 1'000'000, es_seed = 0, es_stream = 0;
  std::size_t es_n = 40;
  double es_x = 0.0;
  int es_threads = 1;
  estimate->add_option("--family", es_family)->required();
  estimate->add_option("--initial", es_initial);
  estimate->add_option("--n", es_n)->required();
  estimate->add_option("--x", es_x)->required();
  estimate->add_option("--side", es_side, "lower | upper");
  estimate->add_option("--replicas", es_replicas);
  estimate->add_option("--seed", es_seed)->required();
  estimate->add_option("--stream", es_stream);
  estimate->add_option("--threads", es_threads);

  // fit
  auto* fit = app.add_subcommand("fit", "empirical rate fit across n");
  std::string ft_family = "C", ft_side = "lower", ft_nlist, ft_method = "dp";
  std::uint64_t ft_initial = 0, ft_replicas = 1'000'000, ft_seed = 0,
                ft_budget = 100'000'000;
  double ft_x = 0.0;
  int ft_threads = 1;
  fit->add_option("--family", ft_family)->required();
  fit->add_option("--initial", ft_initial);
  fit->add_option("--x", ft_x)->required();
  fit->add_option("--side", ft_side, "lower | upper");
  fit->add_option("--n", ft_nlist, "comma-separated n values")->required();
  fit->add_option("--method", ft_method, "dp | mc");
  fit->add_option("--replicas", ft_replicas);
  fit->add_option("--seed", ft_seed);
  fit->add_option("--budget", ft_budget);
  fit->add_option("--threads", ft_threads);

  // gof
  auto* gof = app.add_subcommand("gof", "one-step law chi-square tests");
  std::string gf_via = "step", gf_family = "C", gf_kind = "modified";
  std::uint64_t gf_initial = 0, gf_from = 5, gf_samples = 1'000'000, gf_streams = 100'000,
                gf_seed = 0, gf_stream = 0;
  std::size_t gf_stream_len = 1000, gf_cells = 0;
  gof->add_option("--via", gf_via, "step | records | digits");
  gof->add_option("--family", gf_family);
  gof->add_option("--initial", gf_initial);
  gof->add_option("--from", gf_from, "conditioning state/digit");
  gof->add_option("--samples", gf_samples);
  gof->add_option("--streams", gf_streams, "streams for --via records");
  gof->add_option("--stream-len", gf_stream_len);
  gof->add_option("--kind", gf_kind, "expansion kind for --via digits");
  gof->add_option("--seed", gf_seed)->required();
  gof->add_option("--stream", gf_stream);
  gof->add_option("--cells", gf_cells, "single-state bins (0 = auto)");

  // xval
  auto* xval = app.add_subcommand("xval", "two-sample sampler cross-validation");
  std::string xv_family = "C";
  std::uint64_t xv_initial = 0, xv_replicas = 1'000'000, xv_seed = 0, xv_stream = 0;
  std::size_t xv_n = 2;
  xval->add_option("--family", xv_family)->required();
  xval->add_option("--initial", xv_initial);
  xval->add_option("--n", xv_n);
  xval->add_option("--replicas", xv_replicas);
  xval->add_option("--seed", xv_seed)->required();
  xval->add_option("--stream", xv_stream);

  // gap
  auto* gap = app.add_subcommand("gap", "coupling-gap quantile diagnostic");
  std::string gp_nlist = "100,1000";
  std::uint64_t gp_paths = 10'000, gp_seed = 0, gp_stream = 0;
  gap->add_option("--n", gp_nlist, "comma-separated horizons");
  gap->add_option("--paths", gp_paths);
  gap->add_option("--seed", gp_seed)->required();
  gap->add_option("--stream", gp_stream);

  // acceptance
  auto* acc = app.add_subcommand("acceptance", "run the full verification suite");
  std::uint64_t ac_seed = 42;
  std::string ac_out_dir = "acceptance_out", ac_only;
  int ac_threads = 1;
  acc->add_option("--seed", ac_seed);
  acc->add_option("--out-dir", ac_out_dir, "artifact directory");
  acc->add_option("--only", ac_only, "comma-separated criterion ids");
  acc->add_option("--threads", ac_threads);

  // let --out appear after the subcommand as well
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (expand->parsed()) {
      if (ex_x.empty() == ex_interval.empty()) {
        throw std::domain_error("expand needs exactly one of --x or --interval");
      }
      return cmd_expand(ex_kind, ex_x, ex_interval, ex_max, out);
    }
    if (sample->parsed()) {
      return cmd_sample(sm_family, sm_initial, sm_n, sm_paths, sm_seed, sm_stream,
                        sm_method, sm_digits, sm_kind, sm_budget, out);
    }
    if (records->parsed()) return cmd_records(rc_in, out);
    if (dp->parsed()) return cmd_dp(dp_family, dp_initial, dp_n, dp_cap, dp_buckets, out);
    if (tail->parsed()) return cmd_tail(tl_family, tl_initial, tl_n, tl_x, tl_budget, out);
    if (mgf->parsed()) return cmd_mgf(mg_family, mg_initial, mg_n, mg_theta, mg_cap, out);
    if (lemma->parsed()) return cmd_lemma1(lm_j, lm_theta, lm_trunc, out);
    if (rate_cmd->parsed()) {
      if (rt_x_opt->count() == 0 && rt_grid.empty()) {
        throw std::domain_error("rate needs --x or --grid");
      }
      return cmd_rate(rt_family, rt_a, rt_grid, rt_x, rt_x_opt->count() > 0, out);
    }
    if (mgfc->parsed()) {
      if (mc_theta_opt->count() == 0 && mc_grid.empty()) {
        throw std::domain_error("mgf-closed needs --theta or --grid");
      }
      return cmd_mgf_closed(mc_family, mc_grid, mc_theta, mc_theta_opt->count() > 0, out);
    }
    if (leg->parsed()) return cmd_legendre(lg_family, lg_x, lg_lo, lg_hi, out);
    if (compare->parsed()) return cmd_compare(cp_grid, out);
    if (estimate->parsed()) {
      return cmd_estimate(es_family, es_initial, es_n, es_x, es_side, es_replicas,
                          es_seed, es_stream, es_threads, out);
    }
    if (fit->parsed()) {
      return cmd_fit(ft_family, ft_initial, ft_x, ft_side, ft_nlist, ft_method,
                     ft_replicas, ft_seed, ft_budget, ft_threads, out);
    }
    if (gof->parsed()) {
      return cmd_gof(gf_via, gf_family, gf_initial, gf_from, gf_samples, gf_streams,
                     gf_stream_len, gf_kind, gf_seed, gf_stream, gf_cells, out);
    }
    if (xval->parsed()) {
      return cmd_xval(xv_family, xv_initial, xv_n, xv_replicas, xv_seed, xv_stream, out);
    }
    if (gap->parsed()) return cmd_gap(gp_nlist, gp_paths, gp_seed, gp_stream, out);
    if (acc->parsed()) {
      eldp::acceptance::Config config;
      config.seed = ac_seed;
      config.out_dir = ac_out_dir;
      config.threads = ac_threads;
      if (!ac_only.empty()) {
        for (const auto v : parse_size_list(ac_only)) config.only.push_back(static_cast<int>(v));
      }
      const auto results = eldp::acceptance::run_all(config, std::cout);
      return eldp::acceptance::all_passed(results) ? kExitOk : kExitCheckFailed;
    }
  } catch (const resource_error& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
