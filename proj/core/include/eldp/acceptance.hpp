#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace eldp::acceptance {

struct Config {
  std::uint64_t seed = 42;
  std::string out_dir;  // empty: no artifact files
  int threads = 1;
  std::vector<int> only;  // empty: run all criteria
};

struct CheckLine {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  std::vector<CheckLine> lines;
};

// Runs the verification criteria (all, or config.only), printing one
// PASS/FAIL line per criterion to `log` plus one indented line per
// sub-check. Artifact CSVs are written under config.out_dir when set.
std::vector<CriterionResult> run_all(const Config& config, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace eldp::acceptance
