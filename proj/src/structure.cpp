#include "simconj/structure.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <set>

#include "simconj/error.hpp"

namespace simconj {

namespace {

Cycle conjugated_cycle(const Cycle& c, const Perm& by) {
  Cycle out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = by(c[i]);
  return canonical_cycle(out);
}

std::vector<Cycle> sorted_canonical(std::vector<Cycle> cycles) {
  for (auto& c : cycles) c = canonical_cycle(c);
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

// Reversed copy of labels[lo..hi).
Cycle reversed_slice(const std::vector<Point>& labels, std::size_t lo,
                     std::size_t hi) {
  Cycle out;
  out.reserve(hi - lo);
  for (std::size_t i = hi; i > lo; --i) out.push_back(labels[i - 1]);
  return out;
}

void append(Cycle& dst, const Cycle& part) {
  dst.insert(dst.end(), part.begin(), part.end());
}

}  // namespace

PairProfile pair_profile(const Perm& g, const Perm& h) {
  const auto gf = cycle_factors(g);
  const auto hf = cycle_factors(h);
  {
    std::set<Cycle> h_inverses;
    for (const auto& c : hf) {
      Cycle rev(c.rbegin(), c.rend());
      h_inverses.insert(canonical_cycle(rev));
    }
    for (const auto& c : gf)
      if (h_inverses.count(c))
        throw Error(ErrorCode::InverseFactorPresent,
                    "cycle " + format_cycles(Perm::from_cycles({c})) +
                        " of g is the inverse of a cycle of h");
  }

  const std::size_t n = std::max(g.degree(), h.degree());
  auto in_g = [&](Point x) { return g(x) != x; };
  auto in_h = [&](Point x) { return h(x) != x; };

  PairProfile out;
  out.g = g;
  out.h = h;

  std::vector<char> seen(n + 1, 0);
  for (Point x = 1; x <= n; ++x) {
    if (!in_g(x) || !in_h(x)) continue;
    if (g(h(x)) == x) continue;  // x has a predecessor in its run
    LocalInversePair run;
    Point cur = x;
    run.points.push_back(cur);
    seen[cur] = 1;
    while (h(g(cur)) == cur) {
      cur = g(cur);
      assert(in_g(cur) && in_h(cur));
      assert(!seen[cur]);
      run.points.push_back(cur);
      seen[cur] = 1;
    }
    out.pairs.push_back(std::move(run));
  }
  for (Point x = 1; x <= n; ++x) {
    if (in_g(x) && in_h(x)) {
      assert(seen[x]);  // the runs partition the common support
    } else if (in_g(x) != in_h(x)) {
      out.free_points.push_back(x);
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const LocalInversePair& a, const LocalInversePair& b) {
              return *std::min_element(a.points.begin(), a.points.end()) <
                     *std::min_element(b.points.begin(), b.points.end());
            });
  assert(moved_points(compose(g, h)).size() ==
         out.pairs.size() + out.free_points.size());
  return out;
}

std::vector<std::vector<Cycle>> beta_orbits_on_factors(const Perm& alpha,
                                                       const Perm& beta) {
  const auto factors = cycle_factors(alpha);
  std::map<Cycle, std::size_t> index;
  for (std::size_t i = 0; i < factors.size(); ++i) index[factors[i]] = i;

  enum State : char { Unknown, InOrbit, Outside };
  std::vector<char> state(factors.size(), Unknown);
  std::vector<std::vector<Cycle>> orbits;

  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (state[i] != Unknown) continue;
    std::vector<std::size_t> path{i};
    std::set<std::size_t> on_path{i};
    bool closed = false;
    std::size_t cur = i;
    for (;;) {
      auto it = index.find(conjugated_cycle(factors[cur], beta));
      if (it == index.end() || state[it->second] == Outside) break;
      const std::size_t j = it->second;
      if (on_path.count(j)) {
        assert(j == i);  // conjugation is injective on the factor set
        closed = true;
        break;
      }
      assert(state[j] == Unknown);  // orbits are closed under predecessors
      path.push_back(j);
      on_path.insert(j);
      cur = j;
    }
    if (closed) {
      std::vector<Cycle> orbit;
      for (std::size_t j : path) {
        state[j] = InOrbit;
        orbit.push_back(factors[j]);
      }
      orbits.push_back(std::move(orbit));
    } else {
      for (std::size_t j : path) state[j] = Outside;
    }
  }
  return orbits;
}

std::vector<TransitiveChain> transitive_chains(const Perm& alpha,
                                               const Perm& beta) {
  const auto factors = cycle_factors(alpha);
  std::map<Cycle, std::size_t> index;
  for (std::size_t i = 0; i < factors.size(); ++i) index[factors[i]] = i;
  std::vector<char> in_orbit(factors.size(), 0);
  for (const auto& orbit : beta_orbits_on_factors(alpha, beta))
    for (const auto& c : orbit) in_orbit[index.at(c)] = 1;

  const Perm beta_inv = inverse(beta);
  std::vector<TransitiveChain> chains;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (in_orbit[i]) continue;
    if (index.count(conjugated_cycle(factors[i], beta_inv)))
      continue;  // carried from another factor, so not a head
    TransitiveChain chain;
    chain.factors.push_back(factors[i]);
    std::size_t cur = i;
    for (;;) {
      auto it = index.find(conjugated_cycle(factors[cur], beta));
      if (it == index.end()) break;
      cur = it->second;
      assert(!in_orbit[cur]);
      assert(chain.factors.size() <= factors.size());
      chain.factors.push_back(factors[cur]);
    }
    if (chain.factors.size() >= 2) chains.push_back(std::move(chain));
  }
  return chains;
}

const char* case_name(CaseKind kind) {
  switch (kind) {
    case CaseKind::Commuting:
      return "commuting";
    case CaseKind::T32i:
      return "T32i";
    case CaseKind::T32ii:
      return "T32ii";
    case CaseKind::T32iii:
      return "T32iii";
    case CaseKind::T33i:
      return "T33i";
    case CaseKind::T33ii:
      return "T33ii";
    case CaseKind::T34i:
      return "T34i";
    case CaseKind::T34iiA:
      return "T34iiA";
    case CaseKind::T34iiB:
      return "T34iiB";
    case CaseKind::T35:
      return "T35";
    case CaseKind::T36:
      return "T36";
    case CaseKind::HasChains:
      return "has-chains";
    case CaseKind::HasOrbits:
      return "has-orbits";
    case CaseKind::OutOfScope:
      return "out-of-scope";
  }
  return "unknown";
}

std::vector<Cycle> template_alpha_inverse(const CaseTag& tag) {
  switch (tag.kind) {
    case CaseKind::T32i:
    case CaseKind::T32ii:
    case CaseKind::T32iii:
    case CaseKind::T33i:
    case CaseKind::T33ii:
      return {tag.xs};
    case CaseKind::T34i:
    case CaseKind::T34iiA:
    case CaseKind::T34iiB:
    case CaseKind::T35:
      return {tag.xs, tag.ys};
    case CaseKind::T36:
      return {tag.xs, tag.ys, tag.zs};
    default:
      throw Error(ErrorCode::PreconditionViolated,
                  "tag does not carry a template shape");
  }
}

std::vector<Cycle> template_alpha_beta(const CaseTag& tag) {
  const auto& xs = tag.xs;
  const auto& ys = tag.ys;
  const auto& zs = tag.zs;
  switch (tag.kind) {
    case CaseKind::T32i:
      return {ys};
    case CaseKind::T32ii: {
      Cycle c = reversed_slice(xs, 0, tag.s);
      append(c, reversed_slice(xs, tag.s, tag.r - 1));
      c.push_back(*tag.extra);
      return {c};
    }
    case CaseKind::T32iii: {
      Cycle c = reversed_slice(xs, 0, tag.s);
      append(c, reversed_slice(xs, tag.s, tag.t));
      append(c, reversed_slice(xs, tag.t, tag.l));
      append(c, reversed_slice(xs, tag.l, tag.r));
      return {c};
    }
    case CaseKind::T33i: {
      Cycle c = reversed_slice(xs, 0, tag.r - 1);
      c.push_back(*tag.extra);
      return {c};
    }
    case CaseKind::T33ii: {
      Cycle c = reversed_slice(xs, 0, tag.s);
      append(c, reversed_slice(xs, tag.s, tag.t));
      append(c, reversed_slice(xs, tag.t, tag.r));
      return {c};
    }
    case CaseKind::T34i: {
      Cycle c1 = reversed_slice(ys, 0, tag.l);
      c1.push_back(*tag.extra);
      return {c1, reversed_slice(xs, 0, tag.r - 1)};
    }
    case CaseKind::T34iiA: {
      Cycle c1 = reversed_slice(ys, 0, tag.l);
      append(c1, reversed_slice(xs, tag.l, tag.s));
      append(c1, reversed_slice(xs, tag.s, tag.r));
      return {c1, reversed_slice(xs, 0, tag.l)};
    }
    case CaseKind::T34iiB: {
      Cycle c1 = reversed_slice(xs, tag.s, tag.r);
      append(c1, reversed_slice(ys, 0, tag.s));
      Cycle c2 = reversed_slice(ys, tag.s, tag.l);
      append(c2, reversed_slice(xs, 0, tag.s));
      return {c1, c2};
    }
    case CaseKind::T35: {
      Cycle c1 = reversed_slice(ys, 0, tag.l);
      append(c1, reversed_slice(xs, tag.l, tag.r));
      return {c1, reversed_slice(xs, 0, tag.l)};
    }
    case CaseKind::T36: {
      Cycle c1 = reversed_slice(ys, 0, tag.s);
      append(c1, reversed_slice(zs, 0, tag.t));
      return {c1, reversed_slice(xs, 0, tag.s),
              reversed_slice(xs, tag.s, tag.r)};
    }
    default:
      throw Error(ErrorCode::PreconditionViolated,
                  "tag does not carry a template shape");
  }
}

namespace {

std::vector<Point> flat_labels(const CaseTag& t) {
  std::vector<Point> v;
  v.insert(v.end(), t.xs.begin(), t.xs.end());
  v.insert(v.end(), t.ys.begin(), t.ys.end());
  v.insert(v.end(), t.zs.begin(), t.zs.end());
  if (t.extra) v.push_back(*t.extra);
  return v;
}

bool tag_matches(const CaseTag& tag, const std::vector<Cycle>& gf,
                 const std::vector<Cycle>& hf) {
  return sorted_canonical(template_alpha_inverse(tag)) == gf &&
         sorted_canonical(template_alpha_beta(tag)) == hf;
}

std::vector<Point> concat(std::initializer_list<const std::vector<Point>*> ps) {
  std::vector<Point> out;
  for (const auto* p : ps) out.insert(out.end(), p->begin(), p->end());
  return out;
}

// Builds every admissible label binding for one shape kind from an ordered
// letter assignment of the inverse-pair runs, returning the candidates that
// reproduce the actual cycles of g and h; the lexicographically smallest
// binding is kept.
std::optional<CaseTag> match_kind(CaseKind kind,
                                  const std::vector<std::vector<Point>>& runs,
                                  const std::vector<Point>& g_free,
                                  const std::vector<Point>& h_free,
                                  const std::vector<Cycle>& gf,
                                  const std::vector<Cycle>& hf) {
  std::size_t want_runs = 0, want_g_free = 0, want_h_free = 0;
  switch (kind) {
    case CaseKind::T32ii:
      want_runs = 2, want_g_free = 1, want_h_free = 1;
      break;
    case CaseKind::T32iii:
      want_runs = 4;
      break;
    case CaseKind::T33i:
      want_runs = 1, want_g_free = 1, want_h_free = 1;
      break;
    case CaseKind::T33ii:
      want_runs = 3;
      break;
    case CaseKind::T34i:
      want_runs = 2, want_g_free = 1, want_h_free = 1;
      break;
    case CaseKind::T34iiA:
    case CaseKind::T34iiB:
      want_runs = 4;
      break;
    case CaseKind::T35:
      want_runs = 3;
      break;
    case CaseKind::T36:
      want_runs = 4;
      break;
    default:
      return std::nullopt;
  }
  if (runs.size() != want_runs || g_free.size() != want_g_free ||
      h_free.size() != want_h_free)
    return std::nullopt;

  std::optional<CaseTag> best;
  auto consider = [&](CaseTag cand) {
    cand.kind = kind;
    if (!tag_matches(cand, gf, hf)) return;
    if (!best || flat_labels(cand) < flat_labels(*best)) best = std::move(cand);
  };

  std::vector<std::size_t> idx(runs.size());
  std::iota(idx.begin(), idx.end(), 0);
  do {
    const auto& L0 = runs[idx[0]];
    const auto& L1 = runs.size() > 1 ? runs[idx[1]] : L0;
    const auto& L2 = runs.size() > 2 ? runs[idx[2]] : L0;
    const auto& L3 = runs.size() > 3 ? runs[idx[3]] : L0;
    CaseTag cand;
    switch (kind) {
      case CaseKind::T32ii:
        cand.s = L0.size();
        cand.r = cand.s + L1.size() + 1;
        cand.xs = concat({&L0, &L1});
        cand.xs.push_back(g_free[0]);
        cand.extra = h_free[0];
        consider(std::move(cand));
        break;
      case CaseKind::T32iii:
        cand.s = L0.size();
        cand.t = cand.s + L1.size();
        cand.l = cand.t + L2.size();
        cand.r = cand.l + L3.size();
        cand.xs = concat({&L0, &L1, &L2, &L3});
        consider(std::move(cand));
        break;
      case CaseKind::T33i:
        cand.r = L0.size() + 1;
        cand.xs = L0;
        cand.xs.push_back(g_free[0]);
        cand.extra = h_free[0];
        consider(std::move(cand));
        break;
      case CaseKind::T33ii:
        cand.s = L0.size();
        cand.t = cand.s + L1.size();
        cand.r = cand.t + L2.size();
        cand.xs = concat({&L0, &L1, &L2});
        consider(std::move(cand));
        break;
      case CaseKind::T34i:
        if (L0.size() != L1.size()) break;
        cand.r = L0.size() + 1;
        cand.l = L1.size();
        cand.xs = L0;
        cand.xs.push_back(g_free[0]);
        cand.ys = L1;
        cand.extra = h_free[0];
        consider(std::move(cand));
        break;
      case CaseKind::T34iiA:
        if (L0.size() != L3.size() || L0.size() < 2) break;
        cand.l = L0.size();
        cand.s = cand.l + L1.size();
        cand.r = cand.s + L2.size();
        cand.xs = concat({&L0, &L1, &L2});
        cand.ys = L3;
        consider(std::move(cand));
        break;
      case CaseKind::T34iiB:
        if (L0.size() != L2.size() || L3.size() > L1.size()) break;
        cand.s = L0.size();
        cand.r = cand.s + L1.size();
        cand.l = cand.s + L3.size();
        cand.xs = concat({&L0, &L1});
        cand.ys = concat({&L2, &L3});
        consider(std::move(cand));
        break;
      case CaseKind::T35:
        if (L0.size() != L2.size() || L0.size() < 2) break;
        cand.l = L0.size();
        cand.r = cand.l + L1.size();
        cand.xs = concat({&L0, &L1});
        cand.ys = L2;
        consider(std::move(cand));
        break;
      case CaseKind::T36:
        if (L0.size() != L2.size() || L1.size() != L3.size() ||
            L0.size() < 2 || L1.size() < 2)
          break;
        cand.s = L0.size();
        cand.t = L1.size();
        cand.r = cand.s + cand.t;
        cand.xs = concat({&L0, &L1});
        cand.ys = L2;
        cand.zs = L3;
        consider(std::move(cand));
        break;
      default:
        break;
    }
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

}  // namespace

CaseTag classify_case(const Perm& alpha, const Perm& beta) {
  CaseTag tag;
  const Perm com = commutator(alpha, beta);
  if (com.is_identity()) {
    tag.kind = CaseKind::Commuting;
    return tag;
  }
  const std::size_t moved = moved_points(com).size();
  assert(moved >= 3);
  if (moved > 4) {
    tag.kind = CaseKind::OutOfScope;
    return tag;
  }
  if (!beta_orbits_on_factors(alpha, beta).empty()) {
    tag.kind = CaseKind::HasOrbits;
    return tag;
  }
  if (!transitive_chains(alpha, beta).empty()) {
    tag.kind = CaseKind::HasChains;
    return tag;
  }

  const Perm g = inverse(alpha);
  const Perm h = conjugate(alpha, beta);
  const auto gf = cycle_factors(g);
  const auto hf = cycle_factors(h);
  if (gf.size() > 3)
    throw Error(ErrorCode::ClassificationFailure,
                "no shape fits: more than three cycle factors for alpha = " +
                    format_cycles(alpha));

  const PairProfile profile = pair_profile(g, h);
  std::vector<std::vector<Point>> runs;
  runs.reserve(profile.pairs.size());
  for (const auto& p : profile.pairs) runs.push_back(p.points);
  std::vector<Point> g_free, h_free;
  for (Point f : profile.free_points)
    (g(f) != f ? g_free : h_free).push_back(f);

  std::optional<CaseTag> matched;
  if (runs.empty()) {
    if (gf.size() == 1 && gf[0].size() == 2 && hf.size() == 1 &&
        hf[0].size() == 2 && g_free.size() == 2 && h_free.size() == 2) {
      CaseTag cand;
      cand.kind = CaseKind::T32i;
      cand.xs = gf[0];
      cand.ys = {beta(cand.xs[0]), beta(cand.xs[1])};
      cand.r = 2;
      if (tag_matches(cand, gf, hf)) matched = std::move(cand);
    }
  } else {
    const CaseKind order[] = {CaseKind::T32ii,  CaseKind::T32iii,
                              CaseKind::T33i,   CaseKind::T33ii,
                              CaseKind::T34i,   CaseKind::T34iiA,
                              CaseKind::T34iiB, CaseKind::T35,
                              CaseKind::T36};
    for (CaseKind kind : order) {
      matched = match_kind(kind, runs, g_free, h_free, gf, hf);
      if (matched) {
        if (kind == CaseKind::T34iiA &&
            match_kind(CaseKind::T34iiB, runs, g_free, h_free, gf, hf))
          matched->t34ii_both_shapes = true;
        break;
      }
    }
  }
  if (!matched)
    throw Error(ErrorCode::ClassificationFailure,
                "no shape fits alpha = " + format_cycles(alpha) +
                    ", beta = " + format_cycles(beta));

  // The conjugate moves at most one point off M(alpha) in every shape except
  // the swapped-transposition one, which moves exactly two.
  std::size_t outside = 0;
  for (Point x : moved_points(h))
    if (g(x) == x) ++outside;
  assert(matched->kind == CaseKind::T32i ? outside == 2 : outside <= 1);
  (void)outside;

  // No cycle length occurs more than twice among alpha's factors here.
  std::map<std::size_t, std::size_t> length_count;
  for (const auto& c : gf) ++length_count[c.size()];
  for (const auto& [len, count] : length_count) {
    (void)len;
    assert(count <= 2);
    (void)count;
  }
  return *matched;
}

}  // namespace simconj
