#include "eldp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include "eldp/chains.hpp"
#include "eldp/digits.hpp"
#include "eldp/dist.hpp"
#include "eldp/experiments.hpp"
#include "eldp/ldp.hpp"
#include "eldp/stats.hpp"

namespace eldp::acceptance {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

class Runner {
 public:
  Runner(const Config& config, std::ostream& log) : config_(config), log_(log) {}

  std::vector<CriterionResult> run() {
    run_criterion(1, "Legendre conjugates match the closed-form rate functions",
                  [this](CriterionResult& r) { criterion1(r); });
    run_criterion(2, "Exact lower-corner atom P(A_n = 2) = 2^-n", [this](CriterionResult& r) { criterion2(r); });
    run_criterion(3, "Lower-tail rates by exact DP (two-point slopes)", [this](CriterionResult& r) { criterion3(r); });
    run_criterion(4, "Upper-tail rates by Monte Carlo", [this](CriterionResult& r) { criterion4(r); });
    run_criterion(5, "Scaled-moment limits at n = 200 by truncated DP", [this](CriterionResult& r) { criterion5(r); });
    run_criterion(6, "Series bracketing inequality on the (j, theta) grid", [this](CriterionResult& r) { criterion6(r); });
    run_criterion(7, "Kernel and construction consistency (chi-square battery)", [this](CriterionResult& r) { criterion7(r); });
    run_criterion(8, "Digit expansion exactness and certified extraction", [this](CriterionResult& r) { criterion8(r); });
    run_criterion(9, "Rate-gap reproduction and coupling inequalities", [this](CriterionResult& r) { criterion9(r); });
    run_criterion(10, "Bitwise determinism of stochastic items", [this](CriterionResult& r) { criterion10(r); });
    write_summary();
    return results_;
  }

 private:
  using Body = std::function<void(CriterionResult&)>;

  bool selected(int id) const {
    return config_.only.empty() ||
           std::find(config_.only.begin(), config_.only.end(), id) != config_.only.end();
  }

  void run_criterion(int id, const std::string& title, const Body& body) {
    if (!selected(id)) return;
    CriterionResult res;
    res.id = id;
    res.title = title;
    const auto t0 = std::chrono::steady_clock::now();
    body(res);
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.pass = std::all_of(res.lines.begin(), res.lines.end(),
                           [](const CheckLine& l) { return l.pass; });
    log_ << "criterion " << id << ": " << (res.pass ? "PASS" : "FAIL") << "  ["
         << fmt6(res.seconds) << " s]  " << title << '\n';
    for (const auto& line : res.lines) {
      log_ << "    " << (line.pass ? "ok  " : "FAIL") << "  " << line.label;
      if (!line.detail.empty()) log_ << "  (" << line.detail << ")";
      log_ << '\n';
    }
    log_.flush();
    results_.push_back(std::move(res));
  }

  void check(CriterionResult& res, const std::string& label, bool pass,
             const std::string& detail = "") {
    res.lines.push_back({label, pass, detail});
  }

  void write_artifact(const std::string& name, const std::string& content) {
    if (config_.out_dir.empty()) return;
    std::filesystem::create_directories(config_.out_dir);
    std::ofstream out(std::filesystem::path(config_.out_dir) / name, std::ios::binary);
    out << content;
  }

  void write_summary() {
    std::ostringstream csv;
    csv << "criterion,pass,seconds\n";
    for (const auto& r : results_) {
      csv << r.id << ',' << (r.pass ? 1 : 0) << ',' << fmt6(r.seconds) << '\n';
    }
    write_artifact("summary.csv", csv.str());
  }

  // --- criterion bodies -----------------------------------------------

  void criterion1(CriterionResult& res) {
    std::ostringstream csv;
    csv << "family,x,closed,numeric,abs_diff\n";
    const auto sup_diff = [&](Family fam, double lo, double hi) {
      const RateFamily rf = fam == Family::C ? RateFamily::c() : RateFamily::a2();
      double worst = 0.0;
      for (double x = lo; x <= hi + 1e-12; x += 0.01) {
        const auto conj = legendre_numeric(
            [fam](double t) { return log_mgf_closed(fam, t); }, x, -200.0, 1.0);
        const double closed = rate(rf, x);
        const double diff = std::abs(conj.supremum - closed);
        worst = std::max(worst, diff);
        csv << (fam == Family::C ? 'C' : 'A') << ',' << fmt(x) << ',' << fmt(closed)
            << ',' << fmt(conj.supremum) << ',' << fmt(diff) << '\n';
      }
      return worst;
    };
    const double worst_c = sup_diff(Family::C, -0.95, 4.0);
    const double worst_a = sup_diff(Family::A, -0.99, 4.0);
    check(res, "sup |conjugate(Lambda_C) - I_C| < 1e-8 on [-0.95,4]", worst_c < 1e-8,
          "sup diff " + fmt6(worst_c));
    check(res, "sup |conjugate(Lambda_A) - I_A| < 1e-8 on [-0.99,4]", worst_a < 1e-8,
          "sup diff " + fmt6(worst_a));
    write_artifact("c1_conjugates.csv", csv.str());
  }

  void criterion2(CriterionResult& res) {
    ForwardDp dp(ProcessKind::a_process(2), 64);
    double worst = 0.0;
    std::ostringstream csv;
    csv << "n,log_prob,exact\n";
    for (std::size_t n = 1; n <= 50; ++n) {
      dp.step();
      const double lp = dp.log_prob(2);
      const double exact = -static_cast<double>(n) * M_LN2;
      worst = std::max(worst, std::abs(std::expm1(lp - exact)));
      csv << n << ',' << fmt(lp) << ',' << fmt(exact) << '\n';
    }
    check(res, "P(A_n = 2) matches 2^-n to relative 1e-12 for n <= 50", worst < 1e-12,
          "worst relative " + fmt6(worst));
    write_artifact("c2_atom.csv", csv.str());
  }

  struct DpSlopeRun {
    double slope = 0.0;
    std::string csv;
  };

  DpSlopeRun dp_slope(ProcessKind kind, double x, const std::vector<std::size_t>& ns) {
    const std::size_t n_max = *std::max_element(ns.begin(), ns.end());
    const double k_top = std::floor(std::exp(static_cast<double>(n_max) * (1.0 + x)));
    const auto cap = static_cast<std::uint64_t>(k_top);
    ForwardDp dp(kind, std::max<std::uint64_t>(cap, kind.initial + 1));
    std::vector<TailEstimate> estimates;
    std::ostringstream csv;
    csv << "family,initial,x,n,threshold,log_prob\n";
    for (std::size_t n = 1; n <= n_max; ++n) {
      dp.step();
      if (std::find(ns.begin(), ns.end(), n) == ns.end()) continue;
      const auto K = static_cast<std::uint64_t>(
          std::floor(std::exp(static_cast<double>(n) * (1.0 + x))));
      TailEstimate est;
      est.kind = kind;
      est.n = n;
      est.x = x;
      est.side = TailSide::Lower;
      est.method = TailMethod::DpExact;
      est.log_prob = dp.log_mass_leq(K);
      est.std_error = 0.0;
      estimates.push_back(est);
      csv << (kind.family == Family::C ? 'C' : 'A') << ',' << kind.initial << ','
          << fmt(x) << ',' << n << ',' << K << ',' << fmt(est.log_prob) << '\n';
    }
    const RateFit fit = fit_rate(estimates);
    return {fit.two_point_span, csv.str()};
  }

  void criterion3(CriterionResult& res) {
    const std::vector<std::size_t> ns = {40, 50, 60, 70, 80};
    std::string csv = "family,initial,x,n,threshold,log_prob\n";
    const auto strip_header = [](const std::string& s) {
      return s.substr(s.find('\n') + 1);
    };

    const DpSlopeRun a2 = dp_slope(ProcessKind::a_process(2), -0.8, ns);
    const double target_a2 = rate(RateFamily::a2(), -0.8);
    check(res, "A(a=2) lower tail at x=-0.8: slope within 10% of 0.493147",
          std::abs(a2.slope - target_a2) <= 0.10 * target_a2,
          "slope " + fmt6(a2.slope) + " vs " + fmt6(target_a2));
    csv += strip_header(a2.csv);

    const DpSlopeRun c1 = dp_slope(ProcessKind::c_process(1), -0.9, ns);
    const double target_c = rate(RateFamily::c(), -0.9);
    check(res, "C lower tail at x=-0.9: slope within 10% of 1.402585",
          std::abs(c1.slope - target_c) <= 0.10 * target_c,
          "slope " + fmt6(c1.slope) + " vs " + fmt6(target_c));
    check(res,
          "note: the C slope over this n-range is exact (cross-checked in pure "
          "rational arithmetic); the support floor C_n >= n+1 squeezes the "
          "x=-0.9 event at n<=80, and the slope first enters the 10% band near "
          "n in {60..100}",
          true);
    csv += strip_header(c1.csv);

    const DpSlopeRun a3 = dp_slope(ProcessKind::a_process(3), -0.9, ns);
    const double target_a3 = rate(RateFamily::a_from(3), -0.9);
    check(res, "A(a=3) lower tail at x=-0.9: slope within 10% of 0.898612",
          std::abs(a3.slope - target_a3) <= 0.10 * target_a3,
          "slope " + fmt6(a3.slope) + " vs " + fmt6(target_a3));
    csv += strip_header(a3.csv);

    write_artifact("c3_dp_tails.csv", csv);
  }

  void criterion4(CriterionResult& res) {
    std::ostringstream csv;
    csv << "x,n,log_prob,std_error\n";
    int run = 0;
    for (const double x : {0.3, 0.5}) {
      TailEstimate e40, e80;
      for (auto* est : {&e40, &e80}) {
        const std::size_t n = est == &e40 ? 40 : 80;
        *est = estimate_tail_mc(ProcessKind::c_process(1), n, x, TailSide::Upper,
                                1'000'000, config_.seed,
                                static_cast<std::uint64_t>(run) << 40, config_.threads);
        csv << fmt(x) << ',' << n << ',' << fmt(est->log_prob) << ','
            << fmt(est->std_error) << '\n';
        ++run;
      }
      const double slope = two_point_slope(e40, e80);
      const double target = rate(RateFamily::c(), x);
      check(res,
            "C upper tail at x=" + fmt6(x) + ": two-point slope within 0.02 of " + fmt6(target),
            std::abs(slope - target) <= 0.02,
            "slope " + fmt6(slope));
    }
    write_artifact("c4_mc_tails.csv", csv.str());
  }

  void criterion5(CriterionResult& res) {
    std::ostringstream csv;
    csv << "family,n,theta,cap,log_value,per_n,target,error_bound\n";
    const double rel_tol = std::log1p(1e-6);

    const LogMgfResult a = log_mgf(ProcessKind::a_process(2), 200, -2.0, 30'000'000);
    const double a_per_n = a.log_value / 200.0;
    csv << "A,200,-2," << a.cap << ',' << fmt(a.log_value) << ',' << fmt(a_per_n) << ','
        << fmt(-M_LN2) << ',' << fmt(a.error_bound) << '\n';
    check(res, "(1/n) log E(A_n^-2) within 0.02 of -log 2 at n=200",
          std::abs(a_per_n - (-M_LN2)) < 0.02, "got " + fmt6(a_per_n));
    check(res, "family A truncation bracket below 1e-6 of the value",
          a.error_bound < rel_tol, "error_bound " + fmt6(a.error_bound));

    // The same computation for family C cannot succeed at n = 200: the
    // moment mass sits near states e^{n/2}, far beyond any enumerable cap,
    // so the truncated value and its bracket are both reported honestly.
    const LogMgfResult c = log_mgf(ProcessKind::c_process(1), 200, -1.0, 8'886'110);
    const double c_per_n = c.log_value / 200.0;
    csv << "C,200,-1," << c.cap << ',' << fmt(c.log_value) << ',' << fmt(c_per_n) << ','
        << fmt(-M_LN2) << ',' << fmt(c.error_bound) << '\n';
    check(res, "(1/n) log E(C_n^-1) within 0.02 of log(1/2) at n=200",
          std::abs(c_per_n - (-M_LN2)) < 0.02, "got " + fmt6(c_per_n));
    check(res, "family C truncation bracket below 1e-6 of the value",
          c.error_bound < rel_tol, "error_bound " + fmt6(c.error_bound));
    check(res,
          "note: E(C_200^-1) concentrates on states near e^100, beyond any "
          "enumerable cap, so no truncated DP can reach this target; the "
          "family-A target works because its value is carried by the atom at 2",
          true);

    write_artifact("c5_mgf.csv", csv.str());
  }

  void criterion6(CriterionResult& res) {
    const std::uint64_t js[] = {1, 2, 5, 10, 100, 10'000};
    const double thetas[] = {-5.0, -1.0, 0.0, 0.5, 0.9, 0.99};
    std::ostringstream csv;
    csv << "j,theta,lower,value,upper,holds\n";
    bool all_hold = true;
    for (const auto j : js) {
      for (const double theta : thetas) {
        const LemmaBracket br = lemma1_bracket(j, theta);
        all_hold = all_hold && br.holds();
        csv << j << ',' << fmt(theta) << ',' << fmt(br.lower) << ',' << fmt(br.value)
            << ',' << fmt(br.upper) << ',' << (br.holds() ? 1 : 0) << '\n';
      }
    }
    check(res, "lower <= value <= upper on the full 6x6 grid with rigorous tails",
          all_hold);
    write_artifact("c6_lemma.csv", csv.str());
  }

  void criterion7(CriterionResult& res) {
    std::ostringstream csv;
    csv << "test,statistic,dof,p_value\n";
    const auto record = [&](const std::string& name, const GofResult& g) {
      csv << name << ',' << fmt(g.statistic) << ',' << g.dof << ',' << fmt(g.p_value) << '\n';
      check(res, name + ": p > 0.001", g.p_value > 0.001, "p " + fmt6(g.p_value));
    };

    {
      RngStream rng(config_.seed, 701);
      record("one-step kernel, family C from 5, 1e6",
             gof_transition(ProcessKind::c_process(1), 5, 1'000'000, rng));
    }
    {
      RngStream rng(config_.seed, 702);
      record("one-step kernel, family A from 5, 1e6",
             gof_transition(ProcessKind::a_process(2), 5, 1'000'000, rng));
    }
    {
      RngStream rng(config_.seed, 703);
      record("one-step kernel, family C from 1 (exact first-step law), 1e6",
             gof_transition(ProcessKind::c_process(1), 1, 1'000'000, rng));
    }
    record("two-sample marginals at n=2, family C, transition vs coupling",
           cross_validate_samplers(ProcessKind::c_process(1), 2, 1'000'000,
                                   config_.seed, 704));
    record("two-sample marginals at n=2, family A, transition vs coupling",
           cross_validate_samplers(ProcessKind::a_process(2), 2, 1'000'000,
                                   config_.seed, 706));
    {
      RngStream rng(config_.seed, 708);
      record("record-time transitions from L = 3 vs family C kernel",
             gof_record_transitions(3, 100'000, 1'000, rng));
    }
    {
      RngStream rng(config_.seed, 709);
      record("modified-Engel digit transitions from d1 = 2 vs family C kernel",
             gof_digit_transitions(ExpansionKind::ModifiedEngel, 2, 1'000'000, rng));
    }
    write_artifact("c7_gof.csv", csv.str());
  }

  void criterion8(CriterionResult& res) {
    RngStream rng(config_.seed, 801);
    const int trials = 1000;
    int engel_ok = 0;
    int modified_identity_ok = 0;
    int modified_terminated = 0;
    int modified_roundtrip_ok = 0;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t q = 2 + rng.next_u64() % 999'999;
      const std::uint64_t p = 1 + rng.next_u64() % (q - 1);
      Rational x(static_cast<unsigned long>(p), static_cast<unsigned long>(q));
      x.canonicalize();

      const DigitSequence eng = engel_expand(x, 100'000);
      if (eng.terminated && reconstruct(eng, eng.digits.size()) == x) ++engel_ok;

      const DigitSequence mod = modified_engel_expand(x, 24);
      if (mod.terminated) {
        ++modified_terminated;
        if (reconstruct(mod, mod.digits.size()) == x) ++modified_roundtrip_ok;
      }
      // Exact prefix identity: 0 <= x - S_k < 1/(d_k * prod_{i<=k}(d_i - 1)).
      const std::size_t k = mod.digits.size();
      const Rational remainder = x - reconstruct(mod, k);
      BigInt denom = mod.digits.back();
      for (const BigInt& d : mod.digits) denom *= d - 1;
      Rational bound(1, denom);
      bound.canonicalize();
      const bool identity =
          sgn(remainder) >= 0 && (mod.terminated ? is_zero(remainder) : remainder < bound);
      if (identity) ++modified_identity_ok;
    }
    check(res, "Engel expansions of 1000 random rationals terminate and round-trip exactly",
          engel_ok == trials, std::to_string(engel_ok) + "/1000");
    check(res,
          "modified expansions: exact remainder identity for all 1000; "
          "terminating inputs round-trip exactly",
          modified_identity_ok == trials && modified_roundtrip_ok == modified_terminated,
          std::to_string(modified_identity_ok) + "/1000 identities, " +
              std::to_string(modified_roundtrip_ok) + "/" +
              std::to_string(modified_terminated) + " terminating round trips");

    // e - 2 through a rigorous dyadic enclosure of the factorial series.
    Rational s = 0;
    BigInt fact = 1;
    for (unsigned k = 2; k <= 40; ++k) {
      fact *= k;
      Rational term(1, fact);
      term.canonicalize();
      s += term;
    }
    Rational hi = s + Rational(2, fact * 41);
    hi.canonicalize();
    const DyadicInterval iv = dyadic_cover(s, hi, 200);
    const DigitSequence cert = expand_certified(iv, ExpansionKind::Engel, 5);
    const bool e2_ok = cert.digits.size() == 5 && cert.digits[0] == 2 &&
                       cert.digits[1] == 3 && cert.digits[2] == 4 &&
                       cert.digits[3] == 5 && cert.digits[4] == 6;
    std::string got;
    for (const auto& d : cert.digits) got += d.get_str() + " ";
    check(res, "certified Engel digits of e-2 begin [2,3,4,5,6]", e2_ok, "got " + got);

    std::ostringstream csv;
    csv << "check,count\n"
        << "engel_roundtrip," << engel_ok << '\n'
        << "modified_identity," << modified_identity_ok << '\n'
        << "modified_terminated," << modified_terminated << '\n'
        << "modified_roundtrip," << modified_roundtrip_ok << '\n';
    write_artifact("c8_roundtrip.csv", csv.str());
  }

  void criterion9(CriterionResult& res) {
    // Exact gap values from the closed forms.
    const double grid[] = {-1.0, -0.75, -0.5, -0.25, 0.0, 0.3, 1.0, 3.0};
    const auto rows = compare_rates(grid);
    bool zero_right = true;
    for (const auto& row : rows) {
      if (row.x >= -0.5 && row.gap != 0.0) zero_right = false;
    }
    check(res, "gap I_C - I_A is exactly 0 for x >= -1/2", zero_right);
    const double gap75 = rows[1].gap;
    check(res, "gap at x=-0.75 equals 0.193147 within 1e-9",
          std::abs(gap75 - (M_LN2 - 0.5)) < 1e-9, "gap " + fmt6(gap75));
    check(res, "gap at x=-1 is +infinity", rows[0].gap == kInf);

    // Fitted DP rates reproduce the same gap at desk scale.
    const std::vector<std::size_t> ns = {40, 48, 56, 64};
    const DpSlopeRun c_run = dp_slope(ProcessKind::c_process(1), -0.75, ns);
    const DpSlopeRun a_run = dp_slope(ProcessKind::a_process(2), -0.75, ns);
    const double fitted_gap = c_run.slope - a_run.slope;
    check(res, "fitted C-vs-A rate gap at x=-0.75 within 20% of 0.193147",
          std::abs(fitted_gap - 0.193147) <= 0.2 * 0.193147,
          "C " + fmt6(c_run.slope) + ", A " + fmt6(a_run.slope) + ", gap " + fmt6(fitted_gap));

    // Coupling inequalities across 1e5 exact paths.
    RngStream rng(config_.seed, 901);
    const std::size_t ns_gap[] = {100};
    const GapReport gap = coupling_gap_report(ns_gap, 100'000, rng);
    check(res, "log C_k > B*_k on every step of 1e5 coupled paths", gap.min_c_gap > 0.0,
          "min gap " + fmt6(gap.min_c_gap));
    check(res, "log a_k <= B*_k on every step of 1e5 coupled paths", gap.min_a_gap >= 0.0,
          "min gap " + fmt6(gap.min_a_gap));

    std::ostringstream csv;
    csv << "x,rate_c,rate_a,gap\n";
    for (const auto& row : rows) {
      csv << fmt(row.x) << ',' << fmt(row.rate_c) << ',' << fmt(row.rate_a) << ','
          << fmt(row.gap) << '\n';
    }
    csv << c_run.csv << a_run.csv;
    write_artifact("c9_rate_gap.csv", csv.str());
  }

  std::string mc_fingerprint() {
    const TailEstimate est = estimate_tail_mc(ProcessKind::c_process(1), 40, 0.3,
                                              TailSide::Upper, 1'000'000, config_.seed,
                                              0, config_.threads);
    return fmt(est.log_prob) + "|" + fmt(est.std_error);
  }

  std::string gof_fingerprint() {
    RngStream rng(config_.seed, 701);
    const GofResult g = gof_transition(ProcessKind::c_process(1), 5, 1'000'000, rng);
    return fmt(g.statistic) + "|" + fmt(g.p_value);
  }

  std::string gap_fingerprint() {
    RngStream rng(config_.seed, 901);
    const std::size_t ns[] = {100};
    const GapReport gap = coupling_gap_report(ns, 10'000, rng);
    std::string s;
    for (const auto& row : gap.rows) {
      s += fmt(row.c_gap_q50) + "|" + fmt(row.c_gap_q99) + "|" + fmt(row.a_gap_q50) + ";";
    }
    return s;
  }

  void criterion10(CriterionResult& res) {
    std::ostringstream csv;
    csv << "item,identical\n";
    const auto rerun = [&](const std::string& name, const std::function<std::string()>& f) {
      const std::string first = f();
      const std::string second = f();
      const bool same = first == second;
      csv << name << ',' << (same ? 1 : 0) << '\n';
      check(res, name + " reruns byte-identical", same);
    };
    rerun("monte-carlo tail estimate", [this] { return mc_fingerprint(); });
    rerun("one-step chi-square", [this] { return gof_fingerprint(); });
    rerun("coupling gap quantiles", [this] { return gap_fingerprint(); });
    write_artifact("c10_determinism.csv", csv.str());
  }

  Config config_;
  std::ostream& log_;
  std::vector<CriterionResult> results_;
};

}  // namespace

std::vector<CriterionResult> run_all(const Config& config, std::ostream& log) {
  Runner runner(config, log);
  return runner.run();
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.pass; });
}

}  // namespace eldp::acceptance
