#include "simconj/construct.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "simconj/oracle.hpp"

namespace simconj {

namespace {

bool contains(const Cycle& c, Point x) {
  return std::find(c.begin(), c.end(), x) != c.end();
}

Cycle rotate_to(const Cycle& c, Point x) {
  auto it = std::find(c.begin(), c.end(), x);
  if (it == c.end()) {
    std::ostringstream os;
    os << "point " << x << " is not in the cycle";
    throw Error(ErrorCode::PointNotInCycle, os.str());
  }
  Cycle d;
  d.reserve(c.size());
  d.insert(d.end(), it, c.end());
  d.insert(d.end(), c.begin(), it);
  return d;
}

Perm perm_from_pairs(const std::vector<std::pair<Point, Point>>& swaps) {
  std::vector<Cycle> cycles;
  cycles.reserve(swaps.size());
  for (const auto& [a, b] : swaps) cycles.push_back({a, b});
  return Perm::from_cycles(cycles);
}

Perm perm_from_mapping(const std::vector<std::pair<Point, Point>>& maps) {
  Point deg = 0;
  for (const auto& [from, to] : maps) deg = std::max({deg, from, to});
  std::vector<Point> image(deg);
  for (Point i = 0; i < deg; ++i) image[i] = i + 1;
  for (const auto& [from, to] : maps) image[from - 1] = to;
  return Perm(std::move(image));
}

bool is_involution(const Perm& p) { return compose(p, p).is_identity(); }

Cycle conj_cycle(const Cycle& c, const Perm& g) {
  Cycle out;
  out.reserve(c.size());
  for (Point p : c) out.push_back(g(p));
  return canonical_cycle(std::move(out));
}

Cycle reversed_canonical(const Cycle& c) {
  Cycle out(c.rbegin(), c.rend());
  return canonical_cycle(std::move(out));
}

std::vector<Cycle> sorted_canonical(std::vector<Cycle> cycles) {
  for (Cycle& c : cycles) c = canonical_cycle(std::move(c));
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

// gamma inverting both alpha and beta on a single conjugation-orbit block of
// alpha's factors; beta must permute the block's factor set cyclically.
Perm orbit_witness(const Perm& beta, const std::vector<Cycle>& orbit) {
  const std::size_t k = orbit.size();
  const Cycle& a1 = orbit.front();
  const Perm a1p = Perm::from_cycles({a1});
  if (k == 1) {
#ifndef NDEBUG
    bool is_power = false;
    for (std::size_t m = 0; m < a1.size() && !is_power; ++m) {
      const Perm q = pow(a1p, static_cast<long long>(m));
      is_power = std::all_of(a1.begin(), a1.end(),
                             [&](Point x) { return beta(x) == q(x); });
    }
    assert(is_power && "single-factor block must act as a factor power");
#endif
    return reverser_fixing(a1, a1.front());
  }

  const Perm beta_inv = inverse(beta);
  const Perm beta_pow = pow(beta, static_cast<long long>(k) - 1);
  std::vector<std::pair<Point, Point>> maps;
  for (Point x : a1) maps.emplace_back(x, beta_pow(x));
  for (std::size_t i = 1; i < k; ++i)
    for (Point x : orbit[i]) maps.emplace_back(x, beta_inv(x));
  const Perm mu = perm_from_mapping(maps);

#ifndef NDEBUG
  {
    // mu * beta acts as a power of the lead factor on its support and fixes
    // the other factors of the block pointwise
    bool is_power = false;
    for (std::size_t m = 0; m < a1.size() && !is_power; ++m) {
      const Perm q = pow(a1p, static_cast<long long>(m));
      is_power = std::all_of(a1.begin(), a1.end(),
                             [&](Point x) { return beta(mu(x)) == q(x); });
    }
    assert(is_power);
    for (std::size_t i = 1; i < k; ++i)
      for (Point x : orbit[i]) assert(beta(mu(x)) == x);
  }
#endif

  const Perm omega = reverser_fixing(a1, a1.front());
  std::vector<Cycle> grid;
  grid.reserve(a1.size());
  for (Point c : a1) {
    grid.push_back(cycle_of(mu, c));
    assert(grid.back().size() == k);
  }
  const Perm nu = extend_reverser(grid, omega);
  return compose(compose(omega, nu), mu);
}

// The swapped-transposition shape is handled on beta itself: pair the two
// moved points within beta's cycles, then reverse every other cycle in place.
Perm t32i_witness(const Perm& alpha, const Perm& beta, const CaseTag& tag) {
  const Point x = tag.xs[0], y = tag.xs[1];
  if (beta(x) != tag.ys[0] || beta(y) != tag.ys[1])
    throw Error(ErrorCode::TemplateMismatch,
                "partner does not send the moved points to the tagged images");
  const Cycle cx = cycle_of(beta, x);
  const Cycle cy = cycle_of(beta, y);
  if (cx.size() < 2 || cy.size() < 2)
    throw Error(ErrorCode::TemplateMismatch,
                "partner must move both tagged points");
  Perm omega = contains(cx, y)
                   ? reverser_mapping(cx, x, y)
                   : compose(reverser_fixing(cx, x), reverser_fixing(cy, y));
  for (const Cycle& c : cycle_factors(beta))
    if (!contains(c, x) && !contains(c, y))
      omega = compose(omega, reverser_fixing(c, c.front()));
  if (conjugate(alpha, omega) != inverse(alpha) ||
      conjugate(beta, omega) != inverse(beta))
    throw Error(ErrorCode::TemplateMismatch,
                "swapped-transposition witness failed verification");
  return omega;
}

}  // namespace

Perm reverser_mapping(const Cycle& c, Point xi, Point xj) {
  Perm::from_cycles({c});  // validates distinctness and point range
  const Cycle d = rotate_to(c, xi);
  const std::size_t L = d.size();
  std::size_t p = 0;
  while (p < L && d[p] != xj) ++p;
  if (p == L) {
    std::ostringstream os;
    os << "point " << xj << " is not in the cycle";
    throw Error(ErrorCode::PointNotInCycle, os.str());
  }
  std::vector<std::pair<Point, Point>> swaps;
  for (std::size_t a = 0; a < L; ++a) {
    const std::size_t b = (p + L - a) % L;
    if (a < b) swaps.emplace_back(d[a], d[b]);
  }
  return perm_from_pairs(swaps);
}

Perm reverser_fixing(const Cycle& c, Point x) { return reverser_mapping(c, x, x); }

Perm cycle_swapper(const Cycle& a, const Cycle& b, Point xi, Point yj) {
  if (a.size() != b.size())
    throw Error(ErrorCode::LengthMismatch, "cycles must have equal length");
  for (Point p : a)
    if (contains(b, p))
      throw Error(ErrorCode::NotDisjoint, "cycles must be disjoint");
  const Cycle d = rotate_to(a, xi);
  const Cycle e = rotate_to(b, yj);
  const std::size_t L = d.size();
  std::vector<std::pair<Point, Point>> swaps;
  for (std::size_t m = 0; m < L; ++m) swaps.emplace_back(d[m], e[(L - m) % L]);
  return perm_from_pairs(swaps);
}

Perm extend_reverser(const std::vector<Cycle>& grid, const Perm& omega) {
  if (grid.empty())
    throw Error(ErrorCode::PreconditionViolated, "grid must be nonempty");
  const std::size_t L = grid.front().size();
  if (L < 2)
    throw Error(ErrorCode::PreconditionViolated,
                "grid rows must have length at least 2");
  std::set<Point> seen;
  for (const Cycle& row : grid) {
    if (row.size() != L)
      throw Error(ErrorCode::LengthMismatch, "grid rows must have equal length");
    for (Point p : row)
      if (!seen.insert(p).second)
        throw Error(ErrorCode::NotDisjoint, "grid rows must be disjoint");
  }

  const std::size_t k = grid.size();
  std::map<Point, std::size_t> col_index;
  Cycle col(k);
  for (std::size_t i = 0; i < k; ++i) {
    col[i] = grid[i][0];
    col_index[col[i]] = i;
  }

  std::vector<std::size_t> sigma(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto it = col_index.find(omega(col[i]));
    if (it == col_index.end())
      throw Error(ErrorCode::PreconditionViolated,
                  "omega must map the column set into itself");
    sigma[i] = it->second;
  }
  for (std::size_t i = 0; i < k; ++i)
    if (sigma[sigma[i]] != i)
      throw Error(ErrorCode::PreconditionViolated,
                  "omega must act on the column as an involution");
  if (k >= 3) {
    Cycle relabeled(k);
    for (std::size_t i = 0; i < k; ++i) relabeled[i] = col[sigma[i]];
    if (canonical_cycle(relabeled) != reversed_canonical(col))
      throw Error(ErrorCode::PreconditionViolated,
                  "omega must invert the column cycle");
  }
  for (const Cycle& row : grid)
    for (std::size_t m = 1; m < L; ++m)
      if (omega(row[m]) != row[m])
        throw Error(ErrorCode::PreconditionViolated,
                    "omega must fix every grid point off the column");

  std::vector<std::pair<Point, Point>> swaps;
  for (std::size_t i = 0; i < k; ++i) {
    if (sigma[i] == i) {
      for (std::size_t a = 1; a < L; ++a) {
        const std::size_t b = L - a;
        if (a < b) swaps.emplace_back(grid[i][a], grid[i][b]);
      }
    } else if (sigma[i] > i) {
      const std::size_t j = sigma[i];
      for (std::size_t m = 1; m < L; ++m)
        swaps.emplace_back(grid[i][m], grid[j][L - m]);
    }
  }
  const Perm nu = perm_from_pairs(swaps);

#ifndef NDEBUG
  {
    const Perm rows = Perm::from_cycles(grid);
    const Perm on = compose(omega, nu);
    assert(conjugate(rows, on) == inverse(rows));
    if (k >= 2) {
      const Perm colp = Perm::from_cycles({col});
      assert(conjugate(colp, on) == inverse(colp));
    }
  }
#endif
  return nu;
}

Perm shrink_support(const Perm& alpha, const Perm& beta, const Perm& mu) {
  if (conjugate(alpha, mu) != inverse(alpha) ||
      conjugate(beta, mu) != inverse(beta))
    throw Error(ErrorCode::PreconditionViolated,
                "mu must conjugate both inputs onto their inverses");
  const std::size_t deg = std::max(alpha.degree(), beta.degree());
  std::vector<Cycle> kept;
  for (const Cycle& c : cycle_factors(mu)) {
    const Point lead = c.front();
    const bool inside =
        lead <= deg && (alpha(lead) != lead || beta(lead) != lead);
    if (!inside) continue;
#ifndef NDEBUG
    for (Point p : c) assert(alpha(p) != p || beta(p) != p);
#endif
    kept.push_back(c);
  }
  Perm out = Perm::from_cycles(kept);
  assert(conjugate(alpha, out) == inverse(alpha) &&
         conjugate(beta, out) == inverse(beta));
  return out;
}

bool verify_witness(const Perm& alpha, const Perm& beta, const Perm& gamma) {
  return conjugate(alpha, gamma) == inverse(alpha) &&
         conjugate(beta, gamma) == inverse(beta);
}

bool verify_by_support_check(const Perm& alpha, const Perm& beta,
                             const Perm& omega) {
  const Perm conj_ab = conjugate(alpha, beta);
  const auto in = [](const Perm& p, Point x) { return p(x) != x; };
  std::size_t outside = 0;
  for (Point x : moved_points(conj_ab))
    if (!in(alpha, x)) ++outside;
  if (outside > 1)
    throw Error(ErrorCode::PreconditionViolated,
                "conjugate may move at most one point outside the base support");
  for (Point x : moved_points(beta))
    if (!in(alpha, x) && !in(conj_ab, x))
      throw Error(ErrorCode::PreconditionViolated,
                  "partner support must lie inside the base and conjugate supports");
  if (!is_involution(omega))
    throw Error(ErrorCode::PreconditionViolated, "omega must be an involution");
  for (Point x : moved_points(omega))
    if (!in(alpha, x))
      throw Error(ErrorCode::PreconditionViolated,
                  "omega must be supported inside the base support");
  if (conjugate(alpha, omega) != inverse(alpha))
    throw Error(ErrorCode::PreconditionViolated,
                "omega must conjugate the base onto its inverse");
  const Perm ob = compose(omega, beta);
  const Perm square = compose(ob, ob);
  for (Point x : moved_points(alpha))
    if (square(x) != x) return false;
  return true;
}

const char* method_name(WitnessMethod method) {
  switch (method) {
    case WitnessMethod::Identity: return "identity";
    case WitnessMethod::Commuting: return "commuting";
    case WitnessMethod::CaseTemplate: return "case-template";
    case WitnessMethod::ChainReduction: return "chain-reduction";
    case WitnessMethod::OracleFallback: return "oracle-fallback";
  }
  return "unknown";
}

WitnessCertificate commuting_witness(const Perm& alpha, const Perm& beta) {
  if (compose(alpha, beta) != compose(beta, alpha))
    throw Error(ErrorCode::NotCommuting, "inputs do not commute");
  WitnessCertificate cert;
  cert.method = WitnessMethod::Commuting;
  if (is_involution(alpha) && is_involution(beta)) {
    cert.gamma = Perm();
  } else {
    Perm gamma;
    const auto orbits = beta_orbits_on_factors(alpha, beta);
#ifndef NDEBUG
    {
      std::size_t covered = 0;
      for (const auto& orbit : orbits) covered += orbit.size();
      assert(covered == cycle_factors(alpha).size() &&
             "a commuting partner permutes the whole factor set");
    }
#endif
    for (const auto& orbit : orbits)
      gamma = compose(gamma, orbit_witness(beta, orbit));
    for (const Cycle& c : cycle_factors(beta)) {
      const bool off_alpha = std::all_of(
          c.begin(), c.end(), [&](Point p) { return alpha(p) == p; });
      if (off_alpha) gamma = compose(gamma, reverser_fixing(c, c.front()));
    }
    cert.gamma = std::move(gamma);
  }
  if (!verify_witness(alpha, beta, cert.gamma))
    throw Error(ErrorCode::PreconditionViolated,
                "commuting witness failed verification");
#ifndef NDEBUG
  for (Point p : moved_points(cert.gamma))
    assert(alpha(p) != p || beta(p) != p);
#endif
  cert.verified = true;
  cert.support_shrunk = true;
  return cert;
}

ChainReductionStep chain_reduce(const Perm& alpha, const Perm& beta,
                                const TransitiveChain& chain) {
  std::vector<Cycle> links;
  links.reserve(chain.factors.size());
  for (const Cycle& f : chain.factors) links.push_back(canonical_cycle(f));
  const std::size_t k = links.size();
  if (k < 2)
    throw Error(ErrorCode::InvalidChain, "a chain has at least two factors");

  const auto factors = cycle_factors(alpha);
  const std::set<Cycle> factor_set(factors.begin(), factors.end());
  std::set<Cycle> distinct(links.begin(), links.end());
  if (distinct.size() != k)
    throw Error(ErrorCode::InvalidChain, "chain factors must be distinct");
  for (const Cycle& f : links)
    if (!factor_set.count(f))
      throw Error(ErrorCode::InvalidChain,
                  "chain factors must be cycle factors of the base");
  for (std::size_t i = 0; i + 1 < k; ++i)
    if (conj_cycle(links[i], beta) != links[i + 1])
      throw Error(ErrorCode::InvalidChain,
                  "consecutive chain factors must be partner-conjugate");
  if (factor_set.count(conj_cycle(links.back(), beta)))
    throw Error(ErrorCode::InvalidChain,
                "the chain must exit the factor set at its last factor");
  if (factor_set.count(conj_cycle(links.front(), inverse(beta))))
    throw Error(ErrorCode::InvalidChain,
                "the chain head must have no predecessor in the factor set");

  const Perm beta_inv = inverse(beta);
  const Perm beta_pow = pow(beta, static_cast<long long>(k) - 1);
  std::vector<std::pair<Point, Point>> maps;
  for (Point x : links.front()) maps.emplace_back(x, beta_pow(x));
  for (std::size_t i = 1; i < k; ++i)
    for (Point x : links[i]) maps.emplace_back(x, beta_inv(x));

  ChainReductionStep step;
  step.mu = perm_from_mapping(maps);
  step.removed = links;
  step.reduced_beta = compose(step.mu, beta);
  std::vector<Cycle> remaining;
  for (const Cycle& f : factors)
    if (!distinct.count(f)) remaining.push_back(f);
  step.reduced_alpha = Perm::from_cycles(remaining, alpha.degree());

#ifndef NDEBUG
  {
    assert(conj_cycle(links.front(), step.mu) == links.back());
    for (std::size_t i = 1; i < k; ++i)
      assert(conj_cycle(links[i], step.mu) == links[i - 1]);
    for (std::size_t i = 1; i < k; ++i)
      for (Point x : links[i]) assert(step.reduced_beta(x) == x);
    const Perm head = Perm::from_cycles({links.front()});
    assert(commutator(compose(step.reduced_alpha, head), step.reduced_beta) ==
           commutator(alpha, beta));
  }
#endif
  return step;
}

Perm canonical_beta(const CaseTag& tag) {
  const auto& xs = tag.xs;
  const auto& ys = tag.ys;
  const auto& zs = tag.zs;
  const std::size_t r = tag.r, s = tag.s, t = tag.t, l = tag.l;
  const auto xat = [&](std::size_t j) { return xs[j - 1]; };
  std::vector<std::pair<Point, Point>> maps;
  switch (tag.kind) {
    case CaseKind::T32i:
      return Perm::from_cycles({{xs[0], ys[0]}, {xs[1], ys[1]}});
    case CaseKind::T32ii: {
      Cycle c;
      for (std::size_t j = r; j > s; --j) c.push_back(xat(j));
      c.push_back(*tag.extra);
      return Perm::from_cycles({c});
    }
    case CaseKind::T32iii: {
      const std::size_t kk = l;
      for (std::size_t j = r - s + 1; j <= r; ++j)
        maps.emplace_back(xat(j), xat(j + s - r));
      for (std::size_t j = r - t + 1; j <= r - s; ++j)
        maps.emplace_back(xat(j), xat(j + s + t - r));
      for (std::size_t j = r - kk + 1; j <= r - t; ++j)
        maps.emplace_back(xat(j), xat(j + t + kk - r));
      for (std::size_t j = 1; j <= r - kk; ++j)
        maps.emplace_back(xat(j), xat(j + kk));
      return perm_from_mapping(maps);
    }
    case CaseKind::T33i:
      return Perm::from_cycles({{xat(r), *tag.extra}});
    case CaseKind::T33ii: {
      for (std::size_t j = r - s + 1; j <= r; ++j)
        maps.emplace_back(xat(j), xat(j + s - r));
      for (std::size_t j = r - t + 1; j <= r - s; ++j)
        maps.emplace_back(xat(j), xat(j + s + t - r));
      for (std::size_t j = 1; j <= r - t; ++j)
        maps.emplace_back(xat(j), xat(j + t));
      return perm_from_mapping(maps);
    }
    case CaseKind::T34i: {
      std::vector<Cycle> cycles;
      for (std::size_t i = 0; i < l; ++i) cycles.push_back({xs[i], ys[i]});
      cycles.push_back({xat(r), *tag.extra});
      return Perm::from_cycles(cycles);
    }
    case CaseKind::T34iiA: {
      for (std::size_t j = r - l + 1; j <= r; ++j)
        maps.emplace_back(xat(j), ys[j + l - r - 1]);
      for (std::size_t j = r - s + 1; j <= r - l; ++j)
        maps.emplace_back(xat(j), xat(s + j + l - r));
      for (std::size_t j = 1; j <= r - s; ++j)
        maps.emplace_back(xat(j), xat(j + s));
      for (std::size_t j = 1; j <= l; ++j) maps.emplace_back(ys[j - 1], xat(j));
      return perm_from_mapping(maps);
    }
    case CaseKind::T34iiB: {
      std::vector<Cycle> cycles;
      for (std::size_t i = 0; i < s; ++i) cycles.push_back({xs[i], ys[i]});
      return Perm::from_cycles(cycles);
    }
    case CaseKind::T35: {
      std::vector<Cycle> cycles;
      for (std::size_t i = 0; i < l; ++i) cycles.push_back({xs[i], ys[i]});
      return Perm::from_cycles(cycles);
    }
    case CaseKind::T36: {
      std::vector<Cycle> cycles;
      for (std::size_t i = 0; i < s; ++i) cycles.push_back({xs[i], ys[i]});
      for (std::size_t j = 1; j <= t; ++j)
        cycles.push_back({xat(s + j), zs[j - 1]});
      return Perm::from_cycles(cycles);
    }
    default:
      throw Error(ErrorCode::TemplateMismatch,
                  "tag does not bind a template shape");
  }
}

Perm case_witness(const Perm& alpha, const Perm& beta, const CaseTag& tag) {
  const std::vector<Cycle> want_inv = template_alpha_inverse(tag);
  if (sorted_canonical(cycle_factors(inverse(alpha))) !=
      sorted_canonical(want_inv))
    throw Error(ErrorCode::TemplateMismatch,
                "base permutation does not realize the tagged shape");
  if (conjugate(alpha, beta) != Perm::from_cycles(template_alpha_beta(tag)))
    throw Error(ErrorCode::TemplateMismatch,
                "partner does not induce the tagged conjugate");

  const auto& xs = tag.xs;
  const auto& ys = tag.ys;
  const auto& zs = tag.zs;
  const std::size_t r = tag.r, s = tag.s, t = tag.t, l = tag.l;
  Perm omega;
  switch (tag.kind) {
    case CaseKind::T32i:
      return t32i_witness(alpha, beta, tag);
    case CaseKind::T32ii:
      omega = reverser_mapping(xs, xs[0], xs[s - 1]);
      break;
    case CaseKind::T32iii:
      omega = reverser_mapping(xs, xs[0], xs[r - 1]);
      break;
    case CaseKind::T33i:
      omega = reverser_mapping(xs, xs[0], xs[r - 2]);
      break;
    case CaseKind::T33ii:
      omega = reverser_mapping(xs, xs[0], xs[r - 1]);
      break;
    case CaseKind::T34i:
      omega = compose(reverser_mapping(xs, xs[0], xs[r - 2]),
                      reverser_mapping(ys, ys[0], ys[l - 1]));
      break;
    case CaseKind::T34iiA:
      omega = compose(reverser_mapping(xs, xs[0], xs[r - 1]),
                      reverser_mapping(ys, ys[0], ys[l - 1]));
      break;
    case CaseKind::T34iiB:
      omega = compose(reverser_mapping(xs, xs[0], xs[s - 1]),
                      reverser_mapping(ys, ys[0], ys[s - 1]));
      break;
    case CaseKind::T35:
      omega = compose(reverser_mapping(xs, xs[0], xs[l - 1]),
                      reverser_mapping(ys, ys[0], ys[l - 1]));
      break;
    case CaseKind::T36:
      omega = compose(
          compose(reverser_mapping(xs, xs[0], xs[s - 1]),
                  reverser_mapping(ys, ys[0], ys[s - 1])),
          reverser_mapping(zs, zs[0], zs[t - 1]));
      break;
    default:
      throw Error(ErrorCode::TemplateMismatch,
                  "tag does not bind a template shape");
  }

  for (const Cycle& f : cycle_factors(alpha))
    if (conj_cycle(f, omega) != reversed_canonical(f))
      throw Error(ErrorCode::TemplateMismatch,
                  "witness does not invert every factor in place");
  bool inverted;
  try {
    inverted = verify_by_support_check(alpha, beta, omega);
  } catch (const Error&) {
    inverted = conjugate(beta, omega) == inverse(beta);
  }
  if (!inverted)
    throw Error(ErrorCode::TemplateMismatch,
                "witness does not invert the partner");
  return omega;
}

Perm transfer_witness(const Perm& alpha, const Perm& beta_canonical,
                      const Perm& omega, const Perm& beta_actual) {
  if (conjugate(alpha, beta_actual) != conjugate(alpha, beta_canonical))
    throw Error(ErrorCode::NotSameConjugate,
                "both partners must induce the same conjugate of the base");
  const auto factors = cycle_factors(alpha);
  for (const Cycle& f : factors)
    if (conj_cycle(f, omega) != reversed_canonical(f))
      throw Error(ErrorCode::PreconditionViolated,
                  "omega must invert every factor of the base in place");
  if (conjugate(beta_canonical, omega) != inverse(beta_canonical))
    throw Error(ErrorCode::PreconditionViolated,
                "omega must invert the canonical partner");
  {
    std::map<std::size_t, std::size_t> by_length;
    for (const Cycle& f : factors) ++by_length[f.size()];
    for (const auto& [len, count] : by_length)
      if (count > 2)
        throw Error(ErrorCode::PreconditionViolated,
                    "at most two factors may share a length");
  }
  std::optional<Point> extra;
  for (Point p : moved_points(beta_canonical))
    if (alpha(p) == p) {
      if (extra)
        throw Error(ErrorCode::PreconditionViolated,
                    "canonical partner may move at most one point off the base");
      extra = p;
    }

  const Perm c = compose(beta_actual, inverse(beta_canonical));
  assert(conjugate(alpha, c) == alpha);

  const std::size_t deg = std::max(c.degree(), alpha.degree());
  std::vector<Point> a_img(deg), b_img(deg);
  for (Point x = 1; x <= deg; ++x) {
    a_img[x - 1] = alpha(x) != x ? c(x) : x;
    b_img[x - 1] = alpha(x) == x ? c(x) : x;
  }
  const Perm a(std::move(a_img));
  const Perm b(std::move(b_img));
  assert(compose(a, b) == c);

  std::map<Cycle, std::size_t> index;
  for (std::size_t i = 0; i < factors.size(); ++i) index[factors[i]] = i;
  std::vector<std::size_t> moved;
  std::vector<std::size_t> pi(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto it = index.find(conj_cycle(factors[i], c));
    assert(it != index.end());
    pi[i] = it->second;
    if (pi[i] != i) moved.push_back(i);
  }

  Perm mu_hat;
  if (!moved.empty()) {
    if (moved.size() != 2 || pi[moved[0]] != moved[1] ||
        pi[moved[1]] != moved[0])
      throw Error(ErrorCode::NoEqualLengthSwap,
                  "centralizer part permutes factors beyond a single swap");
    const Cycle& u = factors[moved[0]];
    const Cycle& v = factors[moved[1]];
    assert(u.size() == v.size());
    const std::size_t L = u.size();
    bool found = false;
    for (std::size_t d = 0; d < L && !found; ++d) {
      std::vector<std::pair<Point, Point>> swaps;
      for (std::size_t m = 0; m < L; ++m) swaps.emplace_back(u[m], v[(m + d) % L]);
      const Perm cand = perm_from_pairs(swaps);
      if (conjugate(beta_canonical, cand) == beta_canonical &&
          conjugate(omega, cand) == omega) {
        mu_hat = cand;
        found = true;
      }
    }
    if (!found)
      throw Error(ErrorCode::NoEqualLengthSwap,
                  "no factor alignment centralizes the canonical partner");
  }

  Perm theta;
  for (const Cycle& cy : cycle_factors(b)) {
    const Point anchor = extra && contains(cy, *extra) ? *extra : cy.front();
    theta = compose(theta, reverser_fixing(cy, anchor));
  }

  const Perm gamma = compose(compose(compose(c, omega), mu_hat), theta);
  if (!verify_witness(alpha, beta_actual, gamma))
    throw Error(ErrorCode::TemplateMismatch,
                "transferred witness failed verification");
  return gamma;
}

namespace {

Perm template_leaf(const Perm& alpha, const Perm& beta, const CaseTag& tag) {
  if (tag.kind == CaseKind::T32i) return case_witness(alpha, beta, tag);
  const Perm beta0 = canonical_beta(tag);
  const Perm omega = case_witness(alpha, beta0, tag);
  return transfer_witness(alpha, beta0, omega, beta);
}

// Recursive constructive core for a noncommuting pair whose commutator moves
// at most 4 points: strip whole conjugation orbits, collapse chains, then
// match a template shape.
Perm solve_small(const Perm& alpha, const Perm& beta, bool& used_reduction,
                 CaseTag& leaf_tag) {
  const auto orbits = beta_orbits_on_factors(alpha, beta);
  if (!orbits.empty()) {
    used_reduction = true;
    const auto& orbit = orbits.front();
    const std::size_t deg = std::max(alpha.degree(), beta.degree());
    const Perm alpha_orbit = Perm::from_cycles(orbit, deg);
    std::vector<Point> block;
    for (const Cycle& f : orbit) block.insert(block.end(), f.begin(), f.end());
    const Perm beta_block = restriction(beta, block);
    const Perm beta_rest = compose(beta, inverse(beta_block));
    const Perm alpha_rest = compose(alpha, inverse(alpha_orbit));
    assert(commutator(alpha_rest, beta_rest) == commutator(alpha, beta));
    const Perm g_block = commuting_witness(alpha_orbit, beta_block).gamma;
    const Perm g_rest = solve_small(alpha_rest, beta_rest, used_reduction, leaf_tag);
    return compose(g_block, g_rest);
  }

  const auto chains = transitive_chains(alpha, beta);
  if (!chains.empty()) {
    used_reduction = true;
    const TransitiveChain& chain = chains.front();
    const ChainReductionStep step = chain_reduce(alpha, beta, chain);
    const Perm head = Perm::from_cycles({chain.factors.front()});
    const Perm reduced_alpha = compose(step.reduced_alpha, head);
    Perm gamma_t = solve_small(reduced_alpha, step.reduced_beta, used_reduction,
                               leaf_tag);
    gamma_t = shrink_support(reduced_alpha, step.reduced_beta, gamma_t);
    std::vector<Cycle> grid;
    for (Point c : chain.factors.front()) grid.push_back(cycle_of(step.mu, c));
    const Perm nu = extend_reverser(grid, gamma_t);
    return compose(compose(gamma_t, nu), step.mu);
  }

  const CaseTag tag = classify_case(alpha, beta);
  leaf_tag = tag;
  return template_leaf(alpha, beta, tag);
}

InvertOutcome oracle_outcome(const Perm& alpha, const Perm& beta,
                             std::size_t moved, const InvertOptions& options) {
  InvertOutcome out;
  const unsigned n = static_cast<unsigned>(std::max(alpha.degree(), beta.degree()));
  const auto found = brute_force_inverter(alpha, beta, n, options.coset_budget);
  if (found) {
    WitnessCertificate cert;
    cert.gamma = shrink_support(alpha, beta, *found);
    cert.method = WitnessMethod::OracleFallback;
    cert.verified = verify_witness(alpha, beta, cert.gamma);
    cert.support_shrunk = true;
    assert(cert.verified);
    out.status = InvertStatus::Found;
    out.certificate = std::move(cert);
  } else {
    out.status = InvertStatus::NotFound;
    std::ostringstream os;
    os << "no simultaneous inverting conjugator exists; the commutator moves "
       << moved << " points";
    out.detail = os.str();
  }
  return out;
}

}  // namespace

InvertOutcome simultaneous_inverter(const Perm& alpha, const Perm& beta,
                                    const InvertOptions& options) {
  InvertOutcome out;
  const Perm com = commutator(alpha, beta);
  if (com.is_identity()) {
    WitnessCertificate cert;
    if (alpha.is_identity() && beta.is_identity()) {
      cert.method = WitnessMethod::Identity;
      cert.verified = true;
      cert.support_shrunk = true;
    } else {
      cert = commuting_witness(alpha, beta);
    }
    out.status = InvertStatus::Found;
    out.certificate = std::move(cert);
    return out;
  }

  const std::size_t moved = moved_points(com).size();
  assert(moved >= 3 && "a nontrivial commutator moves at least 3 points");
  if (moved > 4) {
    if (!options.allow_fallback) {
      out.status = InvertStatus::OutOfScope;
      std::ostringstream os;
      os << "the commutator moves " << moved
         << " points; the constructive pipeline covers at most 4";
      out.detail = os.str();
      return out;
    }
    return oracle_outcome(alpha, beta, moved, options);
  }

  bool used_reduction = false;
  CaseTag leaf_tag;
  try {
    Perm gamma = solve_small(alpha, beta, used_reduction, leaf_tag);
    gamma = shrink_support(alpha, beta, gamma);
    WitnessCertificate cert;
    cert.gamma = std::move(gamma);
    cert.method = used_reduction ? WitnessMethod::ChainReduction
                                 : WitnessMethod::CaseTemplate;
    if (!used_reduction) cert.tag = leaf_tag;
    cert.verified = true;  // shrink_support re-checked both conjugations
    cert.support_shrunk = true;
    out.status = InvertStatus::Found;
    out.certificate = std::move(cert);
    return out;
  } catch (const Error& e) {
    if (!options.allow_fallback) throw;
    InvertOutcome fb = oracle_outcome(alpha, beta, moved, options);
    if (fb.status == InvertStatus::Found) {
      std::ostringstream os;
      os << "constructive path failed (" << e.what() << "); oracle fallback";
      fb.detail = os.str();
    }
    return fb;
  }
}

InvertOutcome simultaneous_inverter(const Perm& alpha, const Perm& beta,
                                    bool allow_fallback) {
  InvertOptions options;
  options.allow_fallback = allow_fallback;
  return simultaneous_inverter(alpha, beta, options);
}

}  // namespace simconj
