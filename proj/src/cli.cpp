#include "simconj/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "simconj/construct.hpp"
#include "simconj/oracle.hpp"
#include "simconj/structure.hpp"

namespace simconj {
namespace {

// Cycle-text problems discovered after flag parsing still count as usage
// errors; remember which flag carried the bad value.
struct UsageError {
  std::string message;
  std::string token;
  std::size_t position = Error::npos;
};

Perm parse_flag(const std::string& flag, const std::string& text) {
  try {
    return parse_cycles(text);
  } catch (const Error& e) {
    throw UsageError{e.what(), flag, e.position()};
  }
}

std::string points_text(const std::vector<Point>& points) {
  if (points.empty()) return "none";
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) os << ", ";
    os << points[i];
  }
  os << ']';
  return os.str();
}

std::string cycles_text(const std::vector<Cycle>& cycles) {
  std::ostringstream os;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    if (i) os << ' ';
    os << '(';
    for (std::size_t j = 0; j < cycles[i].size(); ++j) {
      if (j) os << ' ';
      os << cycles[i][j];
    }
    os << ')';
  }
  return os.str();
}

std::string seconds_text(double seconds) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3f", seconds);
  return buffer;
}

struct Writer {
  std::ostream& out;
  bool human = true;

  void line(const std::string& key, const std::string& value) {
    out << key << ": " << value << "\n";
  }
  void line(const std::string& key, const char* value) {
    out << key << ": " << value << "\n";
  }
  void line(const std::string& key, std::uint64_t value) {
    out << key << ": " << value << "\n";
  }
  void line(const std::string& key, bool value) {
    out << key << ": " << (value ? "true" : "false") << "\n";
  }
  void list(const std::string& key) { out << key << ":\n"; }
  void item(const std::string& text) { out << "  - " << text << "\n"; }
  // Wall time is a human nicety; structured reports must be reproducible.
  void timing(double seconds) {
    if (human) line("wall-seconds", seconds_text(seconds));
  }
};

std::string pair_text(const Perm& alpha, const Perm& beta) {
  return "alpha=" + format_cycles(alpha) + " beta=" + format_cycles(beta);
}

int run_analyze(const Perm& alpha, const Perm& beta, unsigned n, Writer& w) {
  w.line("command", "analyze");
  w.line("alpha", format_cycles(alpha));
  w.line("beta", format_cycles(beta));
  const std::uint64_t degree =
      std::max<std::uint64_t>(n, std::max(alpha.degree(), beta.degree()));
  w.line("degree", degree);
  const Perm comm = commutator(alpha, beta);
  w.line("commutator", format_cycles(comm));
  const std::size_t moved = moved_points(comm).size();
  w.line("commutator-moved", moved);
  w.line("commutator-fixed", degree - moved);

  try {
    const PairProfile profile = pair_profile(alpha, beta);
    if (profile.pairs.empty()) {
      w.line("pairs", "none");
    } else {
      w.list("pairs");
      for (const auto& run : profile.pairs) w.item(points_text(run.points));
    }
    w.line("free-points", points_text(profile.free_points));
  } catch (const Error& e) {
    w.line("pairs", std::string("unavailable (") + e.what() + ")");
  }

  const auto orbits = beta_orbits_on_factors(alpha, beta);
  if (orbits.empty()) {
    w.line("factor-orbits", "none");
  } else {
    w.list("factor-orbits");
    for (const auto& orbit : orbits) w.item(cycles_text(orbit));
  }
  const auto chains = transitive_chains(alpha, beta);
  if (chains.empty()) {
    w.line("chains", "none");
  } else {
    w.list("chains");
    for (const auto& chain : chains) w.item(cycles_text(chain.factors));
  }

  try {
    const CaseTag tag = classify_case(alpha, beta);
    w.line("case", case_name(tag.kind));
    if (tag.extra) w.line("case-extra-point", std::uint64_t{*tag.extra});
  } catch (const Error& e) {
    w.line("case", "none");
    w.line("case-detail", e.what());
  }
  w.line("status", "ok");
  return 0;
}

int run_invert(const Perm& alpha, const Perm& beta, bool no_fallback,
               std::uint64_t budget, Writer& w) {
  w.line("command", "invert");
  w.line("alpha", format_cycles(alpha));
  w.line("beta", format_cycles(beta));
  w.line("fallback", no_fallback ? "disabled" : "enabled");
  w.line("budget", budget);

  InvertOptions options;
  options.allow_fallback = !no_fallback;
  options.coset_budget = budget;
  try {
    const InvertOutcome outcome = simultaneous_inverter(alpha, beta, options);
    if (outcome.status == InvertStatus::Found) {
      const WitnessCertificate& cert = *outcome.certificate;
      w.line("status", "found");
      w.line("method", method_name(cert.method));
      if (cert.tag) w.line("case", case_name(cert.tag->kind));
      w.line("gamma", format_cycles(cert.gamma));
      w.line("verified", cert.verified);
      w.line("support-shrunk", cert.support_shrunk);
      if (!outcome.detail.empty()) w.line("detail", outcome.detail);
      return 0;
    }
    w.line("status", outcome.status == InvertStatus::NotFound ? "not-found"
                                                              : "out-of-scope");
    if (!outcome.detail.empty()) w.line("detail", outcome.detail);
    return 1;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BudgetExceeded) {
      w.line("status", "budget-exceeded");
      w.line("detail", e.what());
      return 3;
    }
    w.line("status", "error");
    w.line("detail", e.what());
    return 1;
  }
}

int run_verify(const Perm& alpha, const Perm& beta, const Perm& gamma,
               Writer& w) {
  w.line("command", "verify");
  w.line("alpha", format_cycles(alpha));
  w.line("beta", format_cycles(beta));
  w.line("gamma", format_cycles(gamma));
  const bool alpha_ok = conjugate(alpha, gamma) == inverse(alpha);
  const bool beta_ok = conjugate(beta, gamma) == inverse(beta);
  w.line("alpha-inverted", alpha_ok);
  w.line("beta-inverted", beta_ok);
  w.line("status", alpha_ok && beta_ok ? "verified" : "failed");
  return alpha_ok && beta_ok ? 0 : 1;
}

int run_sweep(unsigned n, const SweepOptions& options, Writer& w) {
  w.line("command", "sweep");
  w.line("n", std::uint64_t{n});
  w.line("mode",
         options.mode == SweepMode::Exhaustive ? "exhaustive" : "sampled");
  w.line("dedup", options.dedup);
  if (options.mode == SweepMode::Sampled) {
    w.line("seed", options.seed);
    w.line("samples", options.samples);
  }
  w.line("jobs", std::uint64_t{std::max(1u, options.jobs)});
  w.line("cross-check-every", options.cross_check_every);
  w.line("budget", options.coset_budget);

  try {
    const SweepReport report = theorem_sweep(n, options);
    w.line("total-pairs", report.total_pairs);
    if (report.dedup) w.line("classes", report.classes);
    w.line("qualifying", report.qualifying);
    w.line("constructive", report.constructive);
    w.line("fallback", report.fallback);
    w.line("failures", report.failures);
    w.list("histogram");
    for (const auto& row : report.histogram) {
      std::ostringstream os;
      os << "moved=" << row.moved << " pairs=" << row.pairs
         << " attempted=" << row.attempted << " witnessed=" << row.witnessed;
      w.item(os.str());
    }
    if (!report.fallback_pairs.empty()) {
      w.list("fallback-pairs");
      for (const auto& [a, b] : report.fallback_pairs) w.item(pair_text(a, b));
    }
    if (!report.failure_pairs.empty()) {
      w.list("failure-pairs");
      for (const auto& [a, b] : report.failure_pairs) w.item(pair_text(a, b));
    }
    w.line("cross-checked", report.cross_checked);
    w.line("cross-check-mismatches", report.cross_check_mismatches);
    w.timing(report.wall_seconds);
    const bool clean =
        report.failures == 0 && report.cross_check_mismatches == 0;
    w.line("status", clean ? "ok" : "failures-detected");
    return clean ? 0 : 1;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BudgetExceeded) {
      w.line("status", "budget-exceeded");
      w.line("detail", e.what());
      return 3;
    }
    throw;
  }
}

int run_sharpness(unsigned n, std::size_t moved, std::uint64_t budget,
                  Writer& w) {
  w.line("command", "sharpness");
  w.line("n", std::uint64_t{n});
  w.line("moved", moved);
  w.line("budget", budget);
  try {
    const SharpnessReport report = sharpness_search(n, moved, budget);
    w.line("scanned-pairs", report.scanned_pairs);
    w.line("matching-pairs", report.matching_pairs);
    w.line("unsolvable-count", report.unsolvable.size());
    if (!report.unsolvable.empty()) {
      w.list("unsolvable");
      for (const auto& [a, b] : report.unsolvable) w.item(pair_text(a, b));
    }
    w.timing(report.wall_seconds);
    w.line("status", "ok");
    return 0;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::BudgetExceeded) {
      w.line("status", "budget-exceeded");
      w.line("detail", e.what());
      return 3;
    }
    throw;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"constructive simultaneous inversion of permutation pairs"};
  app.require_subcommand(1);

  std::string alpha_text, beta_text, gamma_text;
  std::string format = "human";
  std::string mode = "exhaustive";
  unsigned n = 0;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::uint64_t cross_check_every = 0;
  std::uint64_t budget = 10'000'000;
  std::size_t moved = 0;
  bool no_fallback = false;
  bool dedup = false;

  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "report style")
        ->check(CLI::IsMember({"human", "structured"}));
  };
  const auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--budget", budget, "coset enumeration budget");
  };

  CLI::App* analyze =
      app.add_subcommand("analyze", "profile a pair: commutator, local "
                                    "inverse pairs, orbits, chains, case tag");
  analyze->add_option("--alpha", alpha_text, "first permutation, cycle notation")
      ->required();
  analyze->add_option("--beta", beta_text, "second permutation, cycle notation")
      ->required();
  analyze->add_option("--n", n, "degree override (defaults to the support)");
  add_format(analyze);

  CLI::App* invert = app.add_subcommand(
      "invert", "construct a conjugator inverting both permutations");
  invert->add_option("--alpha", alpha_text, "first permutation")->required();
  invert->add_option("--beta", beta_text, "second permutation")->required();
  invert->add_flag("--no-fallback", no_fallback,
                   "fail instead of falling back to the coset oracle");
  add_budget(invert);
  add_format(invert);

  CLI::App* verify =
      app.add_subcommand("verify", "check a supplied conjugator");
  verify->add_option("--alpha", alpha_text, "first permutation")->required();
  verify->add_option("--beta", beta_text, "second permutation")->required();
  verify->add_option("--gamma", gamma_text, "candidate conjugator")->required();
  add_format(verify);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run the solver over ordered pairs of a symmetric group");
  sweep->add_option("--n", n, "degree of the symmetric group")->required();
  sweep->add_option("--mode", mode, "pair coverage")
      ->check(CLI::IsMember({"exhaustive", "sampled"}));
  sweep->add_option("--samples", samples, "sampled-mode pair count");
  sweep->add_option("--seed", seed, "sampled-mode seed");
  sweep->add_option("--jobs", jobs, "worker thread count");
  sweep->add_option("--cross-check-every", cross_check_every,
                    "oracle-compare every k-th pair");
  sweep->add_flag("--dedup", dedup,
                  "one alpha per conjugacy class, weighted counts");
  add_budget(sweep);
  add_format(sweep);

  CLI::App* sharpness = app.add_subcommand(
      "sharpness", "list pairs with a given commutator support size and no "
                   "inverting conjugator");
  sharpness->add_option("--n", n, "degree of the symmetric group")->required();
  sharpness->add_option("--moved", moved, "commutator support size to match")
      ->required();
  add_budget(sharpness);
  add_format(sharpness);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, out);
    if (code == 0) return 0;
    const std::string what = e.what();
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i].size() >= 2 && what.find(args[i]) != std::string::npos) {
        out << "offending token: " << args[i] << " (argument " << i + 1
            << ")\n";
        break;
      }
    }
    return 2;
  }

  Writer w{out, format == "human"};
  try {
    if (analyze->parsed()) {
      const Perm a = parse_flag("--alpha", alpha_text);
      const Perm b = parse_flag("--beta", beta_text);
      return run_analyze(a, b, n, w);
    }
    if (invert->parsed()) {
      const Perm a = parse_flag("--alpha", alpha_text);
      const Perm b = parse_flag("--beta", beta_text);
      return run_invert(a, b, no_fallback, budget, w);
    }
    if (verify->parsed()) {
      const Perm a = parse_flag("--alpha", alpha_text);
      const Perm b = parse_flag("--beta", beta_text);
      const Perm g = parse_flag("--gamma", gamma_text);
      return run_verify(a, b, g, w);
    }
    if (sweep->parsed()) {
      SweepOptions options;
      options.mode =
          mode == "sampled" ? SweepMode::Sampled : SweepMode::Exhaustive;
      if (options.mode == SweepMode::Sampled && samples == 0)
        throw UsageError{"sampled mode needs a positive sample count",
                         "--samples"};
      options.jobs = jobs;
      options.seed = seed;
      options.samples = samples;
      options.cross_check_every = cross_check_every;
      options.dedup = dedup;
      options.coset_budget = budget;
      return run_sweep(n, options, w);
    }
    return run_sharpness(n, moved, budget, w);
  } catch (const UsageError& u) {
    out << "usage error: " << u.token << ": " << u.message << "\n";
    out << "offending token: " << u.token << "\n";
    if (u.position != Error::npos) out << "position: " << u.position << "\n";
    return 2;
  }
}

}  // namespace simconj
