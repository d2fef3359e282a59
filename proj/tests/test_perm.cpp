#include "doctest.h"
#include "simconj/perm.hpp"

#include <algorithm>
#include <set>

using namespace simconj;

TEST_CASE("composition applies left factor first") {
  Perm p = parse_cycles("(1 2 3 4)");
  Perm q = parse_cycles("(2 1 5 6)");
  CHECK(compose(p, q) == parse_cycles("(2 3 4 5 6)"));
  CHECK((p * q) == compose(p, q));
}

TEST_CASE("conjugation relabels along the conjugator") {
  Perm a = parse_cycles("(1 4 3 2)");
  Perm b = parse_cycles("(3 2 1 5 4 6 7)");
  Perm c = conjugate(a, b);
  CHECK(c == parse_cycles("(2 1 5 6)"));
  // pointwise: c(b(x)) == b(a(x))
  for (Point x = 1; x <= 7; ++x) CHECK(c(b(x)) == b(a(x)));
  CHECK(commutator(a, b) == parse_cycles("(2 3 4 5 6)"));
  CHECK(commutator(a, b) == compose(inverse(a), c));
}

TEST_CASE("identity and degree extension") {
  Perm id5 = Perm::identity(5);
  CHECK(id5.is_identity());
  CHECK(id5.degree() == 5);
  CHECK(id5(7) == 7);
  CHECK(parse_cycles("(1 2)", 5) == parse_cycles("(1 2)"));
  CHECK(parse_cycles("(1 2)", 5).degree() == 5);
  CHECK(parse_cycles("(1 2)(7)").degree() == 7);
  CHECK(Perm::identity(3) == Perm::identity(9));
}

TEST_CASE("parse and format") {
  CHECK(format_cycles(Perm::identity(4)) == "()");
  CHECK(format_cycles(parse_cycles("(4 3 5)")) == "(3 5 4)");
  CHECK(format_cycles(parse_cycles("(2,1,5,6)")) == "(1 5 6 2)");
  CHECK(parse_cycles("()").is_identity());
  CHECK(parse_cycles("( 1 2 ) (3 4)") == parse_cycles("(1 2)(3 4)"));

  CHECK_THROWS_AS(parse_cycles(""), Error);
  CHECK_THROWS_AS(parse_cycles("1 2 3"), Error);
  CHECK_THROWS_AS(parse_cycles("(1 2"), Error);
  CHECK_THROWS_AS(parse_cycles("(1 2)(2 3)"), Error);
  CHECK_THROWS_AS(parse_cycles("(0 1)"), Error);
  CHECK_THROWS_AS(parse_cycles("(1 x)"), Error);
  try {
    parse_cycles("(1 x)");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Malformed);
    CHECK(e.position() == 3);
  }
  try {
    parse_cycles("(1 2)(2 3)");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RepeatedPoint);
  }
}

TEST_CASE("parse format round trip") {
  std::mt19937_64 rng(20260815);
  for (int it = 0; it < 10000; ++it) {
    std::size_t n = it % 13;
    Perm p = random_permutation(n, rng);
    CHECK(parse_cycles(format_cycles(p), n) == p);
  }
}

TEST_CASE("group laws on random elements") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 2000; ++it) {
    Perm p = random_permutation(9, rng);
    Perm q = random_permutation(11, rng);
    Perm r = random_permutation(6, rng);
    CHECK(compose(compose(p, q), r) == compose(p, compose(q, r)));
    CHECK(compose(p, inverse(p)).is_identity());
    CHECK(conjugate(compose(p, q), r) ==
          compose(conjugate(p, r), conjugate(q, r)));
    CHECK(conjugate(conjugate(p, q), r) == conjugate(p, compose(q, r)));
    CHECK(sign(commutator(p, q)) == 1);
    CHECK(sign(compose(p, q)) == sign(p) * sign(q));
  }
}

TEST_CASE("pow matches repeated composition") {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 200; ++it) {
    Perm p = random_permutation(8, rng);
    Perm acc = Perm::identity(8);
    for (int k = 0; k <= 12; ++k) {
      CHECK(pow(p, k) == acc);
      acc = acc * p;
    }
    CHECK(pow(p, -1) == inverse(p));
    CHECK(pow(p, -3) == inverse(pow(p, 3)));
  }
}

TEST_CASE("cycle structure helpers") {
  Perm p = parse_cycles("(3 1 2)(5 9)(6 8 7)");
  auto cs = cycle_factors(p);
  REQUIRE(cs.size() == 3);
  CHECK(cs[0] == Cycle{1, 2, 3});
  CHECK(cs[1] == Cycle{5, 9});
  CHECK(cs[2] == Cycle{6, 8, 7});
  CHECK(cycle_of(p, 2) == Cycle{2, 3, 1});
  CHECK(cycle_of(p, 4) == Cycle{4});
  CHECK(canonical_cycle(Cycle{4, 2, 7}) == Cycle{2, 7, 4});
  CHECK(moved_points(p) ==
        std::vector<Point>{1, 2, 3, 5, 6, 7, 8, 9});
  CHECK(fixed_points(p, 10) == std::vector<Point>{4, 10});
  CHECK(Perm::from_cycles(cs) == p);
}

TEST_CASE("trimmed drops trailing fixed points only") {
  Perm p = parse_cycles("(1 2)", 9);
  CHECK(p.degree() == 9);
  CHECK(trimmed(p).degree() == 2);
  CHECK(trimmed(p) == p);
  CHECK(trimmed(Perm::identity(5)).degree() == 0);
  Perm q = parse_cycles("(2 5)(7 8)");
  CHECK(trimmed(q).degree() == 8);
}

TEST_CASE("restriction to an invariant domain") {
  Perm p = parse_cycles("(1 2 3)(4 5)");
  Perm r = restriction(p, {1, 2, 3});
  CHECK(r == parse_cycles("(1 2 3)"));
  CHECK(r.degree() == 3);
  CHECK_THROWS_AS(restriction(p, {1, 2}), Error);
  CHECK(restriction(p, {}).is_identity());
}

TEST_CASE("random permutations are seed deterministic and cover S3") {
  std::mt19937_64 a(123), b(123);
  for (int it = 0; it < 50; ++it)
    CHECK(random_permutation(10, a) == random_permutation(10, b));
  std::set<std::string> seen;
  std::mt19937_64 rng(5);
  for (int it = 0; it < 1000; ++it)
    seen.insert(format_cycles(random_permutation(3, rng)));
  CHECK(seen.size() == 6);
}
