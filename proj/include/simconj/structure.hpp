#pragma once

#include <optional>
#include <vector>

#include "simconj/perm.hpp"

namespace simconj {

// Maximal run of points along which h steps backward exactly where g steps
// forward, so gh fixes every point of the run except the last one.
struct LocalInversePair {
  std::vector<Point> points;
};

struct PairProfile {
  Perm g, h;
  std::vector<LocalInversePair> pairs;  // sorted by minimum member
  std::vector<Point> free_points;       // moved by exactly one of g, h
};

// Requires that no cycle factor of g is the exact inverse of a cycle factor
// of h (those would form closed runs); throws InverseFactorPresent.
PairProfile pair_profile(const Perm& g, const Perm& h);

// Full conjugation orbits of beta on the cycle factors of alpha. Each orbit
// is listed in conjugation order starting from its minimal factor; orbits are
// ordered by that factor. Single-factor orbits (factor fixed by beta) count.
std::vector<std::vector<Cycle>> beta_orbits_on_factors(const Perm& alpha,
                                                       const Perm& beta);

// A maximal run of >= 2 factors of alpha successively carried into each other
// by beta-conjugation, leaving the factor set at both ends. Factors belonging
// to full orbits are excluded.
struct TransitiveChain {
  std::vector<Cycle> factors;
};

std::vector<TransitiveChain> transitive_chains(const Perm& alpha,
                                               const Perm& beta);

enum class CaseKind {
  Commuting,
  T32i,
  T32ii,
  T32iii,
  T33i,
  T33ii,
  T34i,
  T34iiA,
  T34iiB,
  T35,
  T36,
  HasChains,
  HasOrbits,
  OutOfScope,
};

const char* case_name(CaseKind kind);

// A matched template: the label sequences xs/ys/zs list the points of the
// first/second/third cycle of alpha in template order, extra is the single
// point the conjugate may move outside M(alpha), and r/s/t/l are the bound
// size indices of the shape.
struct CaseTag {
  CaseKind kind = CaseKind::Commuting;
  std::vector<Point> xs, ys, zs;
  std::optional<Point> extra;
  std::size_t r = 0, s = 0, t = 0, l = 0;
  bool t34ii_both_shapes = false;
};

// Decides which template shape (alpha^-1, alpha^beta) fits. Returns
// Commuting / OutOfScope / HasOrbits / HasChains when those apply; otherwise
// binds exactly one shape tag or throws ClassificationFailure.
CaseTag classify_case(const Perm& alpha, const Perm& beta);

// The matched shape's displayed cycles for alpha^-1 and alpha^beta as point
// sequences, reconstructed from the tag's labels.
std::vector<Cycle> template_alpha_inverse(const CaseTag& tag);
std::vector<Cycle> template_alpha_beta(const CaseTag& tag);

}  // namespace simconj
