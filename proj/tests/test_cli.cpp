#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "simconj/cli.hpp"
#include "simconj/perm.hpp"

using namespace simconj;

namespace {

struct CliResult {
  int code;
  std::string output;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  const int code = run(args, out);
  return {code, out.str()};
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

// Value of the first "key: value" line, empty when absent.
std::string field(const std::string& text, const std::string& key) {
  const std::string prefix = key + ": ";
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line))
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
  return {};
}

}  // namespace

TEST_CASE("invert prints a verified conjugator and exits 0") {
  const CliResult result =
      run_cli({"invert", "--alpha", "(1 2)(3 4)", "--beta", "(1 3 5)(2 4 6)"});
  CHECK(result.code == 0);
  CHECK(field(result.output, "status") == "found");
  CHECK(field(result.output, "verified") == "true");
  const Perm gamma = parse_cycles(field(result.output, "gamma"));
  const Perm alpha = parse_cycles("(1 2)(3 4)");
  const Perm beta = parse_cycles("(1 3 5)(2 4 6)");
  CHECK(conjugate(alpha, gamma) == inverse(alpha));
  CHECK(conjugate(beta, gamma) == inverse(beta));
}

TEST_CASE("invert reports the unsolvable pair with its support count") {
  const CliResult result =
      run_cli({"invert", "--alpha", "(1 4 3 2)", "--beta", "(3 2 1 5 4 6 7)"});
  CHECK(result.code == 1);
  CHECK(field(result.output, "status") == "not-found");
  CHECK(contains(field(result.output, "detail"), "5"));
}

TEST_CASE("invert without fallback flags out-of-scope pairs") {
  const CliResult result =
      run_cli({"invert", "--alpha", "(1 4 3 2)", "--beta", "(3 2 1 5 4 6 7)",
               "--no-fallback"});
  CHECK(result.code == 1);
  CHECK(field(result.output, "status") == "out-of-scope");
}

TEST_CASE("verify accepts and rejects supplied conjugators") {
  const CliResult good =
      run_cli({"verify", "--alpha", "(1 2)", "--beta", "(3 4)", "--gamma", "()"});
  CHECK(good.code == 0);
  CHECK(field(good.output, "status") == "verified");

  const CliResult bad = run_cli(
      {"verify", "--alpha", "(1 2 3)", "--beta", "(4 5)", "--gamma", "(1 2 3)"});
  CHECK(bad.code == 1);
  CHECK(field(bad.output, "status") == "failed");
  CHECK(field(bad.output, "alpha-inverted") == "false");
  CHECK(field(bad.output, "beta-inverted") == "true");
}

TEST_CASE("analyze reports the reversal runs of the documented pair") {
  const CliResult result = run_cli(
      {"analyze", "--alpha", "(1 2 3 4 5 6)", "--beta", "(3 2 1 5 4 6)"});
  CHECK(result.code == 0);
  CHECK(contains(result.output,
                 "pairs:\n  - [1, 2, 3]\n  - [4, 5]\n  - [6]\n"));
  CHECK(field(result.output, "free-points") == "none");
  CHECK(field(result.output, "commutator-moved") == "5");
  CHECK(field(result.output, "case") == "out-of-scope");
}

TEST_CASE("analyze reports chains, orbits and bound templates") {
  const CliResult chained = run_cli(
      {"analyze", "--alpha", "(1 2)(3 4)", "--beta", "(1 3 5)(2 4 6)"});
  CHECK(chained.code == 0);
  CHECK(contains(chained.output, "chains:\n  - (1 2) (3 4)\n"));
  CHECK(field(chained.output, "case") == "has-chains");

  const CliResult orbit =
      run_cli({"analyze", "--alpha", "(1 2)(3 4)", "--beta", "(1 3)(2 4)"});
  CHECK(contains(orbit.output, "factor-orbits:\n  - (1 2) (3 4)\n"));

  const CliResult bound =
      run_cli({"analyze", "--alpha", "(1 2 3)", "--beta", "(2 3)(1 4)"});
  CHECK(bound.code == 0);
  CHECK(field(bound.output, "case") != "none");
}

TEST_CASE("analyze tolerates mutually inverse factors") {
  const CliResult result =
      run_cli({"analyze", "--alpha", "(1 2 3)", "--beta", "(1 3 2)"});
  CHECK(result.code == 0);
  CHECK(contains(field(result.output, "pairs"), "unavailable"));
  CHECK(field(result.output, "case") == "commuting");
}

TEST_CASE("usage errors exit 2 and locate the offending token") {
  const CliResult malformed =
      run_cli({"invert", "--alpha", "(1 2", "--beta", "(3 4)"});
  CHECK(malformed.code == 2);
  CHECK(field(malformed.output, "offending token") == "--alpha");
  CHECK(field(malformed.output, "position") == "4");

  const CliResult unknown = run_cli({"sweep", "--n", "4", "--bogus"});
  CHECK(unknown.code == 2);
  CHECK(contains(unknown.output, "--bogus (argument 4)"));

  const CliResult missing = run_cli({"invert", "--beta", "(1 2)"});
  CHECK(missing.code == 2);

  const CliResult bad_format =
      run_cli({"verify", "--alpha", "(1 2)", "--beta", "()", "--gamma", "()",
               "--format", "pretty"});
  CHECK(bad_format.code == 2);

  const CliResult no_samples = run_cli({"sweep", "--n", "4", "--mode", "sampled"});
  CHECK(no_samples.code == 2);
  CHECK(field(no_samples.output, "offending token") == "--samples");

  CHECK(run_cli({}).code == 2);
}

TEST_CASE("budget overruns exit 3") {
  const CliResult invert =
      run_cli({"invert", "--alpha", "(1 4 3 2)", "--beta", "(3 2 1 5 4 6 7)",
               "--budget", "10"});
  CHECK(invert.code == 3);
  CHECK(field(invert.output, "status") == "budget-exceeded");

  CHECK(run_cli({"sweep", "--n", "8"}).code == 3);
  CHECK(run_cli({"sharpness", "--n", "8", "--moved", "5"}).code == 3);
}

TEST_CASE("help exits 0") {
  const CliResult top = run_cli({"--help"});
  CHECK(top.code == 0);
  CHECK(contains(top.output, "analyze"));
  CHECK(contains(top.output, "sharpness"));
  CHECK(run_cli({"sweep", "--help"}).code == 0);
}

TEST_CASE("structured reports omit wall time and round-trip byte-identically") {
  const std::vector<std::string> sweep_args = {
      "sweep", "--n", "4", "--seed", "5", "--cross-check-every", "97",
      "--format", "structured"};
  const CliResult once = run_cli(sweep_args);
  const CliResult twice = run_cli(sweep_args);
  CHECK(once.code == 0);
  CHECK(once.output == twice.output);
  CHECK(!contains(once.output, "wall-seconds"));
  CHECK(field(once.output, "failures") == "0");

  const CliResult human = run_cli({"sweep", "--n", "4"});
  CHECK(contains(human.output, "wall-seconds"));

  // Echoed canonical inputs reproduce the identical report.
  const CliResult skew = run_cli(
      {"invert", "--alpha", "(2 1)", "--beta", "(4 3)", "--format", "structured"});
  CHECK(field(skew.output, "alpha") == "(1 2)");
  const CliResult replay = run_cli({"invert", "--alpha",
                                    field(skew.output, "alpha"), "--beta",
                                    field(skew.output, "beta"), "--format",
                                    "structured"});
  CHECK(skew.output == replay.output);
}

TEST_CASE("sampled sweeps are reproducible for a fixed seed") {
  const std::vector<std::string> args = {
      "sweep", "--n", "6", "--mode", "sampled", "--samples", "300",
      "--seed", "11", "--jobs", "2", "--format", "structured"};
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.output == b.output);
  CHECK(field(a.output, "failures") == "0");
  CHECK(field(a.output, "seed") == "11");
}

TEST_CASE("sharpness reports matching and unsolvable counts") {
  const CliResult result =
      run_cli({"sharpness", "--n", "4", "--moved", "3", "--format", "structured"});
  CHECK(result.code == 0);
  CHECK(field(result.output, "matching-pairs") == "288");
  CHECK(field(result.output, "unsolvable-count") == "0");
  CHECK(!contains(result.output, "wall-seconds"));
}
