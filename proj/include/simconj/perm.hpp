#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "simconj/error.hpp"

namespace simconj {

// Points are 1-based. A Perm of degree n maps {1..n} to itself and fixes
// everything above n; two perms of different degree compare equal when they
// agree after extending the shorter one by the identity.
using Point = std::uint32_t;
using Cycle = std::vector<Point>;

class Perm {
 public:
  Perm() = default;
  explicit Perm(std::vector<Point> image);

  static Perm identity(std::size_t n);
  // Cycles must be pairwise disjoint and repeat-free. Degree is the largest
  // point mentioned, or min_degree if larger.
  static Perm from_cycles(const std::vector<Cycle>& cycles,
                          std::size_t min_degree = 0);

  std::size_t degree() const { return image_.size(); }
  Point operator()(Point x) const {
    return x <= image_.size() ? image_[x - 1] : x;
  }
  bool is_identity() const;
  const std::vector<Point>& image() const { return image_; }

  friend bool operator==(const Perm& a, const Perm& b);
  friend bool operator!=(const Perm& a, const Perm& b) { return !(a == b); }

 private:
  std::vector<Point> image_;  // image_[i] is the image of point i+1
};

// Left-to-right composition: (p * q)(x) = q(p(x)), i.e. apply p first.
Perm compose(const Perm& p, const Perm& q);
inline Perm operator*(const Perm& p, const Perm& q) { return compose(p, q); }

Perm inverse(const Perm& p);
// g^-1 p g; relabels p along g: if p maps x to y, the result maps g(x) to g(y).
Perm conjugate(const Perm& p, const Perm& g);
// a^-1 b^-1 a b
Perm commutator(const Perm& a, const Perm& b);
Perm pow(const Perm& p, long long k);
int sign(const Perm& p);

std::vector<Point> moved_points(const Perm& p);
std::vector<Point> fixed_points(const Perm& p, std::size_t universe);
// Nontrivial cycles, each rotated so its minimum comes first, sorted by that
// minimum.
std::vector<Cycle> cycle_factors(const Perm& p);
// The cycle through x, starting at x (length 1 if x is fixed).
Cycle cycle_of(const Perm& p, Point x);
Cycle canonical_cycle(Cycle c);

// Same mapping with trailing fixed points dropped from the degree.
Perm trimmed(const Perm& p);
// Identity outside `domain`, agrees with p on it; domain must be p-invariant.
Perm restriction(const Perm& p, const std::vector<Point>& domain);

// Text form: "(1 2 3)(4 5)"; the identity prints as "()". Commas are accepted
// as separators on input, and a singleton "(k)" just mentions k to raise the
// degree.
Perm parse_cycles(const std::string& text, std::size_t min_degree = 0);
std::string format_cycles(const Perm& p);

Perm random_permutation(std::size_t n, std::mt19937_64& rng);

}  // namespace simconj
