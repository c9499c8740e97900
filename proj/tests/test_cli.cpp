#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd;
  if (stdin_text.empty()) {
    cmd = std::string(ELDP_CLI_PATH) + " " + args + " 2>/dev/null";
  } else {
    cmd = "printf '%s' \"" + stdin_text + "\" | " + std::string(ELDP_CLI_PATH) + " " +
          args + " 2>/dev/null";
  }
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) {
    res.output.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace

TEST_CASE("expand emits the frozen digit sequence for 7/10") {
  const auto res = run("expand --kind engel --x 7/10");
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.output);
  CHECK(j["schema"] == "eldp.v1");
  CHECK(j["digits"] == nlohmann::json({"2", "3", "5"}));
  CHECK(j["terminated"] == true);
}

TEST_CASE("rate at the pinned point") {
  const auto res = run("rate --family C --x 0.5");
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.find("0.094534891891835") != std::string::npos);
  CHECK(res.output.find("# eldp.v1") != std::string::npos);
}

TEST_CASE("rate emits the inf sentinel") {
  const auto res = run("rate --family C --x -1.5");
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.find(",inf") != std::string::npos);
}

TEST_CASE("records reads stdin") {
  const auto res = run("records", "0.3 0.1 0.5 0.4 0.9");
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.output);
  CHECK(j["record_times"] == nlohmann::json({"1", "3", "5"}));
}

TEST_CASE("sampling is byte-identical across reruns") {
  const std::string args = "sample --family A --n 12 --paths 3 --seed 99 --stream 4";
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  // one JSON object per line
  const auto first_line = a.output.substr(0, a.output.find('\n'));
  const auto j = nlohmann::json::parse(first_line);
  CHECK(j["states"].size() == 13);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("expand --kind engel").exit_code == 2);           // missing --x
  CHECK(run("expand --kind engel --x 9/4").exit_code == 2);   // outside (0,1)
  CHECK(run("no-such-command").exit_code == 2);
  CHECK(run("mgf --family C --n 5 --theta 0.5").exit_code == 2);  // theta > 0
}

TEST_CASE("resource overruns exit 3") {
  CHECK(run("tail --family C --n 200 --x 0 --budget 1000000").exit_code == 3);
}

TEST_CASE("dp emits parseable CSV with the escaped row") {
  const auto res = run("dp --family A --n 10 --cap 50");
  REQUIRE(res.exit_code == 0);
  CHECK(res.output.find("kind,n,state_or_bucket,log_prob") != std::string::npos);
  CHECK(res.output.find("A,10,escaped,") != std::string::npos);
  CHECK(res.output.find("A,10,2,") != std::string::npos);
}

TEST_CASE("tail at the exact atom") {
  // K = 2 at n = 20 for family A: log prob = -20 log 2 = -13.8629...
  const auto res = run("tail --family A --n 20 --x -0.96534");
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.output);
  CHECK(j["threshold"] == 2);
  CHECK(std::abs(j["log_prob"].get<double>() + 13.862943611198906) < 1e-9);
}

TEST_CASE("legendre reports supremum and certificate") {
  const auto res = run("legendre --family C --x 0.5");
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.output);
  CHECK(std::abs(j["supremum"].get<double>() - 0.0945348918918356) < 1e-8);
  CHECK(j["certificate"].size() == j["iterations"].get<std::size_t>());
}

TEST_CASE("gof exits 0 on a sound kernel") {
  const auto res = run("gof --via step --family C --from 5 --samples 100000 --seed 3");
  CHECK(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.output);
  CHECK(j["pass"] == true);
}

TEST_CASE("--out writes the file, given before or after the subcommand") {
  const std::string path = "/tmp/eldp_cli_out_test.json";
  std::remove(path.c_str());
  const auto res = run("rate --family C --x 0.5 --out " + path);
  REQUIRE(res.exit_code == 0);
  FILE* f = fopen(path.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[256] = {};
  (void)!fread(buf, 1, sizeof(buf) - 1, f);
  fclose(f);
  CHECK(std::string(buf).find("0.09453489") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("lemma1 validates its bracket") {
  const auto res = run("lemma1 --j 2 --theta -1");
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.output);
  CHECK(j["holds"] == true);
  CHECK(std::abs(j["value"].get<double>() - 0.4202637326070943) < 1e-6);
}
