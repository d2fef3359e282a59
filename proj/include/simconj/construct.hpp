#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "simconj/perm.hpp"
#include "simconj/structure.hpp"

namespace simconj {

// Involution with support inside M(c) that conjugates the cycle c to its
// inverse while fixing x.
Perm reverser_fixing(const Cycle& c, Point x);

// Same, but sending xi to xj (xi = xj degenerates to reverser_fixing).
Perm reverser_mapping(const Cycle& c, Point xi, Point xj);

// Involution swapping two disjoint equal-length cycles onto each other's
// inverses, containing the transposition (xi yj).
Perm cycle_swapper(const Cycle& a, const Cycle& b, Point xi, Point yj);

// Given disjoint equal-length rows whose first column forms a cycle, and a
// permutation omega that inverts that column cycle within the column set and
// fixes every other grid point, returns nu supported off the column so that
// omega*nu conjugates the product of the row cycles to its inverse.
Perm extend_reverser(const std::vector<Cycle>& grid, const Perm& omega);

// Drops the cycles of mu supported outside M(alpha) ∪ M(beta); the rest still
// conjugates alpha and beta to their inverses.
Perm shrink_support(const Perm& alpha, const Perm& beta, const Perm& mu);

bool verify_witness(const Perm& alpha, const Perm& beta, const Perm& gamma);

// Support-local acceptance test: with omega an involution supported in
// M(alpha) inverting alpha, beta is inverted by omega iff omega*beta has
// order <= 2 on M(alpha). Requires M(beta) ⊆ M(alpha) ∪ M(alpha^beta) and at
// most one point of M(alpha^beta) outside M(alpha).
bool verify_by_support_check(const Perm& alpha, const Perm& beta,
                             const Perm& omega);

enum class WitnessMethod {
  Identity,
  Commuting,
  CaseTemplate,
  ChainReduction,
  OracleFallback,
};

const char* method_name(WitnessMethod method);

struct WitnessCertificate {
  Perm gamma;
  WitnessMethod method = WitnessMethod::Identity;
  std::optional<CaseTag> tag;  // present for CaseTemplate
  bool verified = false;
  bool support_shrunk = false;
};

// Inverting conjugator for a commuting pair, built blockwise over the
// conjugation orbits of beta on alpha's factors.
WitnessCertificate commuting_witness(const Perm& alpha, const Perm& beta);

struct ChainReductionStep {
  Perm mu;                      // product of k-cycles across the chain
  std::vector<Cycle> removed;   // the chain's factors, head first
  Perm reduced_alpha;           // alpha without every chain factor
  Perm reduced_beta;            // mu * beta
};

// Collapses one transitive chain: the pair (reduced_alpha * head, mu * beta)
// has the same commutator and strictly fewer factors.
ChainReductionStep chain_reduce(const Perm& alpha, const Perm& beta,
                                const TransitiveChain& chain);

// The canonical partner permutation of a bound shape tag, reconstructed from
// its labels; conjugating alpha by it yields the shape's displayed conjugate.
Perm canonical_beta(const CaseTag& tag);

// The shape's inverting involution omega for (alpha, beta) where beta is the
// canonical partner of the bound tag (for the swapped-transposition shape,
// beta may be any permutation inducing the tagged conjugate).
Perm case_witness(const Perm& alpha, const Perm& beta, const CaseTag& tag);

// Carries omega from the canonical partner to any beta_actual with the same
// conjugate of alpha, through the centralizer factorization.
Perm transfer_witness(const Perm& alpha, const Perm& beta_canonical,
                      const Perm& omega, const Perm& beta_actual);

enum class InvertStatus { Found, NotFound, OutOfScope };

struct InvertOptions {
  bool allow_fallback = true;
  // Largest centralizer coset the oracle fallback will enumerate.
  std::uint64_t coset_budget = 10'000'000;
};

struct InvertOutcome {
  InvertStatus status = InvertStatus::NotFound;
  std::optional<WitnessCertificate> certificate;
  std::string detail;
};

// Top-level solver: commuting shortcut, orbit stripping, chain reduction,
// shape classification with canonical witness and transfer; guaranteed to
// find a verified witness whenever the commutator moves at most 4 points.
InvertOutcome simultaneous_inverter(const Perm& alpha, const Perm& beta,
                                    const InvertOptions& options);
InvertOutcome simultaneous_inverter(const Perm& alpha, const Perm& beta,
                                    bool allow_fallback = true);

}  // namespace simconj
