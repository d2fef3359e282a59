#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "simconj/perm.hpp"

namespace simconj {

struct CentralizerSpec {
  std::map<std::size_t, std::size_t> multiplicities;  // cycle length -> count
  std::size_t fixed_points = 0;
  std::uint64_t order = 0;
};

CentralizerSpec centralizer_spec(const Perm& alpha, unsigned n);
std::uint64_t centralizer_order(const Perm& alpha, unsigned n);

// Streams, without duplicates, every gamma in S_n with alpha^gamma equal to
// alpha's inverse: the centralizer coset of one fixed reverser. The first
// element is the reverser itself, so for an involution alpha the stream
// starts at the identity.
class InvertingCosetStream {
 public:
  InvertingCosetStream(const Perm& alpha, unsigned n);
  ~InvertingCosetStream();
  InvertingCosetStream(InvertingCosetStream&&) noexcept;
  InvertingCosetStream& operator=(InvertingCosetStream&&) noexcept;

  std::uint64_t size() const;  // centralizer_order(alpha, n)
  std::optional<Perm> next();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<Perm> all_inverting_conjugators(const Perm& alpha, unsigned n);

// First gamma in the coset stream that also inverts beta; nullopt when no
// simultaneous inverting conjugator exists in S_n. Complete within degree n.
std::optional<Perm> brute_force_inverter(const Perm& alpha, const Perm& beta,
                                         unsigned n,
                                         std::uint64_t coset_budget);

enum class SweepMode { Exhaustive, Sampled };

struct SweepOptions {
  SweepMode mode = SweepMode::Exhaustive;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;           // sampled mode pair count
  std::uint64_t cross_check_every = 0; // oracle-compare every k-th qualifying pair
  bool dedup = false;                  // one alpha per conjugacy class, weighted
  std::uint64_t coset_budget = 10'000'000;
  std::size_t listed_pairs_cap = 32;   // cap on explicitly listed pairs
};

struct SweepHistogramRow {
  std::size_t moved = 0;
  std::uint64_t pairs = 0;
  std::uint64_t attempted = 0;
  std::uint64_t witnessed = 0;
};

struct SweepReport {
  unsigned n = 0;
  SweepMode mode = SweepMode::Exhaustive;
  bool dedup = false;
  std::uint64_t total_pairs = 0;  // weighted when dedup is on
  std::uint64_t classes = 0;      // alpha representatives visited (dedup)
  std::uint64_t qualifying = 0;
  std::uint64_t constructive = 0;
  std::uint64_t fallback = 0;
  std::uint64_t failures = 0;
  std::vector<std::pair<Perm, Perm>> fallback_pairs;
  std::vector<std::pair<Perm, Perm>> failure_pairs;
  std::vector<SweepHistogramRow> histogram;
  std::uint64_t cross_checked = 0;
  std::uint64_t cross_check_mismatches = 0;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  unsigned jobs = 1;
  double wall_seconds = 0.0;
};

// Runs the solver on every ordered pair (exhaustive) or a seeded sample of
// pairs, verifying each witness; failures lists qualifying pairs for which no
// verified witness was produced.
SweepReport theorem_sweep(unsigned n, const SweepOptions& options);

struct SharpnessReport {
  unsigned n = 0;
  std::size_t target_moved = 0;
  std::uint64_t scanned_pairs = 0;
  std::uint64_t matching_pairs = 0;  // pairs whose commutator moves the target count
  std::vector<std::pair<Perm, Perm>> unsolvable;
  double wall_seconds = 0.0;
};

// Scans all ordered pairs of S_n whose commutator moves exactly target_moved
// points and returns those with no inverting conjugator, each re-verified
// through the partner permutation's coset as an independent pass.
SharpnessReport sharpness_search(unsigned n, std::size_t target_moved,
                                 std::uint64_t coset_budget);

}  // namespace simconj
