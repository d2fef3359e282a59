#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "simconj/error.hpp"
#include "simconj/structure.hpp"

using namespace simconj;

namespace {

Perm P(const char* text) { return parse_cycles(text); }

std::vector<std::vector<Point>> run_points(const PairProfile& profile) {
  std::vector<std::vector<Point>> out;
  for (const auto& p : profile.pairs) out.push_back(p.points);
  return out;
}

bool sorted_cycles_equal(std::vector<Cycle> a, std::vector<Cycle> b) {
  for (auto& c : a) c = canonical_cycle(c);
  for (auto& c : b) c = canonical_cycle(c);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

TEST_CASE("pair profile splits the common support into reversal runs") {
  const auto profile = pair_profile(P("(1 2 3 4 5 6)"), P("(3 2 1 5 4 6)"));
  CHECK(run_points(profile) ==
        std::vector<std::vector<Point>>{{1, 2, 3}, {4, 5}, {6}});
  CHECK(profile.free_points.empty());
}

TEST_CASE("pair profile reports one-sided points as free") {
  const auto profile = pair_profile(P("(1 2 3)"), P("(2 1 4)"));
  CHECK(run_points(profile) == std::vector<std::vector<Point>>{{1, 2}});
  CHECK(profile.free_points == std::vector<Point>{3, 4});
  CHECK(moved_points(compose(profile.g, profile.h)) ==
        std::vector<Point>{2, 3, 4});
}

TEST_CASE("pair profile with disjoint supports is all free points") {
  const auto profile = pair_profile(P("(1 2 3)"), P("(4 5 6)"));
  CHECK(profile.pairs.empty());
  CHECK(profile.free_points == std::vector<Point>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("pair profile rejects mutually inverse factors") {
  CHECK_THROWS_WITH_AS(pair_profile(P("(1 2 3)"), P("(3 2 1)")),
                       doctest::Contains("inverse"), Error);
  try {
    pair_profile(P("(7 8)(1 2 3)"), P("(1 3 2)"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InverseFactorPresent);
  }
}

TEST_CASE("pair profile invariants on random pairs") {
  std::mt19937_64 rng(20240817);
  int checked = 0;
  while (checked < 2000) {
    const Perm g = random_permutation(10, rng);
    const Perm h = random_permutation(10, rng);
    PairProfile profile;
    try {
      profile = pair_profile(g, h);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InverseFactorPresent);
      continue;
    }
    ++checked;
    const Perm gh = compose(g, h);
    const auto moved = moved_points(gh);
    const std::set<Point> moved_set(moved.begin(), moved.end());

    // counting identity
    CHECK(moved.size() == profile.pairs.size() + profile.free_points.size());

    std::set<Point> in_pairs;
    for (const auto& pr : profile.pairs) {
      REQUIRE(!pr.points.empty());
      // exactly the last member of a run is moved by gh
      for (std::size_t i = 0; i < pr.points.size(); ++i) {
        const bool is_last = i + 1 == pr.points.size();
        CHECK(moved_set.count(pr.points[i]) == (is_last ? 1u : 0u));
        CHECK(!in_pairs.count(pr.points[i]));
        in_pairs.insert(pr.points[i]);
      }
    }
    for (Point f : profile.free_points) {
      CHECK(!in_pairs.count(f));
      CHECK(moved_set.count(f) == 1);
    }
    // every point of M(g) fixed by gh sits inside some run
    for (Point x = 1; x <= g.degree(); ++x)
      if (g(x) != x && gh(x) == x) CHECK(in_pairs.count(x) == 1);
  }
}

TEST_CASE("factor orbits are detected by conjugation chase") {
  const auto orbits = beta_orbits_on_factors(P("(1 2)(3 4)"), P("(1 3)(2 4)"));
  REQUIRE(orbits.size() == 1);
  CHECK(orbits[0] == std::vector<Cycle>{{1, 2}, {3, 4}});
}

TEST_CASE("a centralized factor forms a one-element orbit") {
  const auto orbits = beta_orbits_on_factors(P("(1 2 3)"), P("(4 5)"));
  REQUIRE(orbits.size() == 1);
  CHECK(orbits[0] == std::vector<Cycle>{{1, 2, 3}});
}

TEST_CASE("a path leaving the factor set is not an orbit") {
  CHECK(beta_orbits_on_factors(P("(1 2)(3 4)"), P("(1 3 5)(2 4 6)")).empty());
}

TEST_CASE("chains walk the factor set and leave at both ends") {
  const auto chains = transitive_chains(P("(1 2)(3 4)"), P("(1 3 5)(2 4 6)"));
  REQUIRE(chains.size() == 1);
  CHECK(chains[0].factors == std::vector<Cycle>{{1, 2}, {3, 4}});
}

TEST_CASE("a factor carried straight out of the set forms no chain") {
  CHECK(transitive_chains(P("(1 2 3)"), P("(1 2)")).empty());
}

TEST_CASE("three-step chain") {
  const auto chains =
      transitive_chains(P("(1 2)(3 4)(5 6)"), P("(1 3 5 7)(2 4 6 8)"));
  REQUIRE(chains.size() == 1);
  CHECK(chains[0].factors == std::vector<Cycle>{{1, 2}, {3, 4}, {5, 6}});
}

TEST_CASE("chain invariants on random pairs") {
  std::mt19937_64 rng(77001);
  for (int trial = 0; trial < 2000; ++trial) {
    const Perm alpha = random_permutation(8, rng);
    const Perm beta = random_permutation(8, rng);
    const auto factors = cycle_factors(alpha);
    const std::set<Cycle> factor_set(factors.begin(), factors.end());
    auto conj_cycle = [&](const Cycle& c, const Perm& by) {
      Cycle out(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) out[i] = by(c[i]);
      return canonical_cycle(out);
    };

    std::set<Cycle> in_orbit;
    for (const auto& orbit : beta_orbits_on_factors(alpha, beta)) {
      REQUIRE(!orbit.empty());
      for (std::size_t i = 0; i < orbit.size(); ++i) {
        CHECK(factor_set.count(canonical_cycle(orbit[i])) == 1);
        CHECK(conj_cycle(orbit[i], beta) ==
              canonical_cycle(orbit[(i + 1) % orbit.size()]));
        in_orbit.insert(canonical_cycle(orbit[i]));
      }
    }

    const Perm beta_inv = inverse(beta);
    std::set<Cycle> in_chain;
    for (const auto& chain : transitive_chains(alpha, beta)) {
      REQUIRE(chain.factors.size() >= 2);
      CHECK(!factor_set.count(conj_cycle(chain.factors.front(), beta_inv)));
      CHECK(!factor_set.count(conj_cycle(chain.factors.back(), beta)));
      for (std::size_t i = 0; i < chain.factors.size(); ++i) {
        const Cycle c = canonical_cycle(chain.factors[i]);
        CHECK(factor_set.count(c) == 1);
        CHECK(!in_orbit.count(c));
        CHECK(!in_chain.count(c));
        in_chain.insert(c);
        if (i + 1 < chain.factors.size())
          CHECK(conj_cycle(chain.factors[i], beta) ==
                canonical_cycle(chain.factors[i + 1]));
      }
    }

    const std::size_t moved = moved_points(commutator(alpha, beta)).size();
    if (moved <= 4) CHECK(transitive_chains(alpha, beta).size() <= 3);
  }
}

TEST_CASE("classification: commuting, out of scope, orbit and chain gates") {
  CHECK(classify_case(P("(1 2 3)"), P("(1 2 3)")).kind == CaseKind::Commuting);
  CHECK(classify_case(P("(1 4 3 2)"), P("(3 2 1 5 4 6 7)")).kind ==
        CaseKind::OutOfScope);
  CHECK(classify_case(P("(1 2)(3 4)(5 6)"), P("(1 3)(2 4)(6 7)")).kind ==
        CaseKind::HasOrbits);
  CHECK(classify_case(P("(1 2)(3 4)"), P("(1 3 5)(2 4 6)")).kind ==
        CaseKind::HasChains);
}

TEST_CASE("classification binds a single-cycle shape with one free point on "
          "each side") {
  const CaseTag tag = classify_case(P("(1 4 3 2)"), P("(4 3 5)"));
  CHECK(tag.kind == CaseKind::T32ii);
  CHECK(tag.r == 4);
  CHECK(tag.s == 2);
  CHECK(tag.xs == std::vector<Point>{1, 2, 3, 4});
  REQUIRE(tag.extra.has_value());
  CHECK(*tag.extra == 5);
  CHECK(sorted_cycles_equal(template_alpha_inverse(tag),
                            cycle_factors(P("(1 2 3 4)"))));
}

TEST_CASE("classification binds the three-factor shape") {
  const CaseTag tag =
      classify_case(P("(1 2 3 4)(5 6)(7 8)"), P("(1 5)(2 6)(3 7)(4 8)"));
  CHECK(tag.kind == CaseKind::T36);
  CHECK(tag.r == 4);
  CHECK(tag.s == 2);
  CHECK(tag.t == 2);
  CHECK(tag.xs == std::vector<Point>{2, 1, 4, 3});
  CHECK(tag.ys == std::vector<Point>{6, 5});
  CHECK(tag.zs == std::vector<Point>{8, 7});
}

TEST_CASE("classification binds the swapped-transposition shape") {
  const CaseTag tag = classify_case(P("(1 2)"), P("(1 3)(2 4)"));
  CHECK(tag.kind == CaseKind::T32i);
  CHECK(tag.xs == std::vector<Point>{1, 2});
  CHECK(tag.ys == std::vector<Point>{3, 4});
}

TEST_CASE("matched templates reproduce the actual conjugates") {
  std::mt19937_64 rng(5150);
  int matched = 0;
  for (int trial = 0; trial < 30000 && matched < 400; ++trial) {
    const Perm alpha = random_permutation(7, rng);
    const Perm beta = random_permutation(7, rng);
    CaseTag tag;
    try {
      tag = classify_case(alpha, beta);
    } catch (const Error&) {
      FAIL("classification failed for alpha = ", format_cycles(alpha),
           ", beta = ", format_cycles(beta));
      continue;
    }
    switch (tag.kind) {
      case CaseKind::Commuting:
      case CaseKind::OutOfScope:
      case CaseKind::HasOrbits:
      case CaseKind::HasChains:
        continue;
      default:
        break;
    }
    ++matched;
    CHECK(sorted_cycles_equal(template_alpha_inverse(tag),
                              cycle_factors(inverse(alpha))));
    CHECK(sorted_cycles_equal(template_alpha_beta(tag),
                              cycle_factors(conjugate(alpha, beta))));
    CHECK(cycle_factors(alpha).size() <= 3);
  }
  CHECK(matched >= 400);
}
