#include "simconj/perm.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace simconj {

Perm::Perm(std::vector<Point> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (Point v : image_) {
    if (v < 1 || v > image_.size() || seen[v - 1])
      throw Error(ErrorCode::PreconditionViolated,
                  "image is not a permutation of 1..n");
    seen[v - 1] = true;
  }
}

Perm Perm::identity(std::size_t n) {
  std::vector<Point> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Point>(i + 1);
  Perm p;
  p.image_ = std::move(img);
  return p;
}

Perm Perm::from_cycles(const std::vector<Cycle>& cycles,
                       std::size_t min_degree) {
  std::size_t n = min_degree;
  for (const Cycle& c : cycles)
    for (Point x : c) {
      if (x < 1)
        throw Error(ErrorCode::PreconditionViolated, "points are 1-based");
      n = std::max(n, static_cast<std::size_t>(x));
    }
  Perm p = identity(n);
  std::vector<bool> used(n, false);
  for (const Cycle& c : cycles) {
    for (Point x : c) {
      if (used[x - 1])
        throw Error(ErrorCode::RepeatedPoint,
                    "point " + std::to_string(x) + " appears twice");
      used[x - 1] = true;
    }
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      p.image_[c[i] - 1] = c[i + 1];
    if (c.size() > 1) p.image_[c.back() - 1] = c.front();
  }
  return p;
}

bool Perm::is_identity() const {
  for (std::size_t i = 0; i < image_.size(); ++i)
    if (image_[i] != i + 1) return false;
  return true;
}

bool operator==(const Perm& a, const Perm& b) {
  std::size_t n = std::max(a.degree(), b.degree());
  for (std::size_t i = 1; i <= n; ++i) {
    Point x = static_cast<Point>(i);
    if (a(x) != b(x)) return false;
  }
  return true;
}

Perm compose(const Perm& p, const Perm& q) {
  std::size_t n = std::max(p.degree(), q.degree());
  std::vector<Point> img(n);
  for (std::size_t i = 1; i <= n; ++i)
    img[i - 1] = q(p(static_cast<Point>(i)));
  return Perm(std::move(img));
}

Perm inverse(const Perm& p) {
  std::vector<Point> img(p.degree());
  for (std::size_t i = 1; i <= p.degree(); ++i)
    img[p(static_cast<Point>(i)) - 1] = static_cast<Point>(i);
  return Perm(std::move(img));
}

Perm conjugate(const Perm& p, const Perm& g) {
  std::size_t n = std::max(p.degree(), g.degree());
  std::vector<Point> img(n);
  for (std::size_t i = 1; i <= n; ++i) {
    Point x = static_cast<Point>(i);
    img[g(x) - 1] = g(p(x));
  }
  return Perm(std::move(img));
}

Perm commutator(const Perm& a, const Perm& b) {
  return compose(inverse(a), conjugate(a, b));
}

Perm pow(const Perm& p, long long k) {
  Perm base = k < 0 ? inverse(p) : p;
  unsigned long long e =
      k < 0 ? -static_cast<unsigned long long>(k) : static_cast<unsigned long long>(k);
  Perm acc = Perm::identity(p.degree());
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

int sign(const Perm& p) {
  int s = 1;
  for (const Cycle& c : cycle_factors(p))
    if (c.size() % 2 == 0) s = -s;
  return s;
}

std::vector<Point> moved_points(const Perm& p) {
  std::vector<Point> out;
  for (std::size_t i = 1; i <= p.degree(); ++i) {
    Point x = static_cast<Point>(i);
    if (p(x) != x) out.push_back(x);
  }
  return out;
}

std::vector<Point> fixed_points(const Perm& p, std::size_t universe) {
  std::vector<Point> out;
  for (std::size_t i = 1; i <= universe; ++i) {
    Point x = static_cast<Point>(i);
    if (p(x) == x) out.push_back(x);
  }
  return out;
}

std::vector<Cycle> cycle_factors(const Perm& p) {
  std::vector<Cycle> out;
  std::vector<bool> seen(p.degree(), false);
  for (std::size_t i = 1; i <= p.degree(); ++i) {
    Point x = static_cast<Point>(i);
    if (seen[x - 1] || p(x) == x) continue;
    Cycle c;
    Point y = x;
    do {
      c.push_back(y);
      seen[y - 1] = true;
      y = p(y);
    } while (y != x);
    out.push_back(std::move(c));
  }
  return out;  // already min-first and sorted by minimum by construction
}

Cycle cycle_of(const Perm& p, Point x) {
  Cycle c;
  Point y = x;
  do {
    c.push_back(y);
    y = p(y);
  } while (y != x);
  return c;
}

Cycle canonical_cycle(Cycle c) {
  if (c.empty()) return c;
  auto it = std::min_element(c.begin(), c.end());
  std::rotate(c.begin(), it, c.end());
  return c;
}

Perm trimmed(const Perm& p) {
  std::size_t n = p.degree();
  while (n > 0 && p(static_cast<Point>(n)) == n) --n;
  std::vector<Point> img(n);
  for (std::size_t i = 1; i <= n; ++i) img[i - 1] = p(static_cast<Point>(i));
  return Perm(std::move(img));
}

Perm restriction(const Perm& p, const std::vector<Point>& domain) {
  std::size_t n = 0;
  for (Point x : domain) n = std::max(n, static_cast<std::size_t>(x));
  Perm out = Perm::identity(std::max(n, static_cast<std::size_t>(0)));
  std::vector<Point> img = out.image();
  std::vector<bool> in(n + 1, false);
  for (Point x : domain) in[x] = true;
  for (Point x : domain) {
    Point y = p(x);
    if (y > n || !in[y])
      throw Error(ErrorCode::PreconditionViolated,
                  "domain is not invariant under the permutation");
    img[x - 1] = y;
  }
  return Perm(std::move(img));
}

Perm parse_cycles(const std::string& text, std::size_t min_degree) {
  std::vector<Cycle> cycles;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  skip_ws();
  if (i == text.size())
    throw Error(ErrorCode::Malformed, "empty cycle text", i);
  bool any_group = false;
  while (i < text.size()) {
    if (text[i] != '(')
      throw Error(ErrorCode::Malformed,
                  std::string("expected '(' at offset ") + std::to_string(i),
                  i);
    ++i;
    any_group = true;
    Cycle c;
    for (;;) {
      skip_ws();
      if (i < text.size() && text[i] == ',') {
        ++i;
        skip_ws();
      }
      if (i >= text.size())
        throw Error(ErrorCode::Malformed, "unterminated cycle", i);
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw Error(ErrorCode::Malformed,
                    std::string("unexpected character '") + text[i] +
                        "' at offset " + std::to_string(i),
                    i);
      std::size_t start = i;
      unsigned long long v = 0;
      while (i < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + (text[i] - '0');
        if (v > 0xffffffffULL)
          throw Error(ErrorCode::Malformed, "point out of range", start);
        ++i;
      }
      if (v == 0)
        throw Error(ErrorCode::Malformed, "points are 1-based", start);
      c.push_back(static_cast<Point>(v));
    }
    if (!c.empty()) cycles.push_back(std::move(c));
    skip_ws();
  }
  if (!any_group)
    throw Error(ErrorCode::Malformed, "no cycles found", 0);
  return Perm::from_cycles(cycles, min_degree);
}

std::string format_cycles(const Perm& p) {
  std::vector<Cycle> cs = cycle_factors(p);
  if (cs.empty()) return "()";
  std::ostringstream os;
  for (const Cycle& c : cs) {
    os << '(';
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) os << ' ';
      os << c[i];
    }
    os << ')';
  }
  return os.str();
}

namespace {
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t k) {
  // rejection sampling keeps the draw exactly uniform
  std::uint64_t threshold = (0 - k) % k;
  for (;;) {
    std::uint64_t x = rng();
    if (x >= threshold) return x % k;
  }
}
}  // namespace

Perm random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<Point> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Point>(i + 1);
  for (std::size_t i = n; i > 1; --i)
    std::swap(img[i - 1], img[bounded(rng, i)]);
  return Perm(std::move(img));
}

}  // namespace simconj
