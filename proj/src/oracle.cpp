#include "simconj/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <numeric>
#include <sstream>
#include <thread>

#include "simconj/construct.hpp"

namespace simconj {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r))
    throw Error(ErrorCode::Overflow, "centralizer order overflows 64 bits");
  return r;
}

std::uint64_t factorial64(std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 2; i <= k; ++i) r = checked_mul(r, i);
  return r;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CentralizerSpec centralizer_spec(const Perm& alpha, unsigned n) {
  for (Point p : moved_points(alpha))
    if (p > n)
      throw Error(ErrorCode::PreconditionViolated,
                  "permutation moves a point beyond the requested degree");
  CentralizerSpec spec;
  std::size_t moved = 0;
  for (const Cycle& c : cycle_factors(alpha)) {
    ++spec.multiplicities[c.size()];
    moved += c.size();
  }
  spec.fixed_points = n - moved;
  spec.order = 1;
  for (const auto& [len, count] : spec.multiplicities) {
    for (std::size_t i = 0; i < count; ++i)
      spec.order = checked_mul(spec.order, len);
    spec.order = checked_mul(spec.order, factorial64(count));
  }
  spec.order = checked_mul(spec.order, factorial64(spec.fixed_points));
  return spec;
}

std::uint64_t centralizer_order(const Perm& alpha, unsigned n) {
  return centralizer_spec(alpha, n).order;
}

// Coset odometer: a centralizer element rotates each cycle, permutes
// like-length cycles, and permutes fixed points; composing each with one
// fixed reverser walks the whole inverting coset exactly once.
struct InvertingCosetStream::Impl {
  unsigned n = 0;
  Perm omega0;
  struct Group {
    std::vector<Cycle> cycles;        // like-length, canonical order
    std::vector<std::size_t> assign;  // which cycle each maps onto
    std::vector<std::size_t> rot;     // rotation offsets
  };
  std::vector<Group> groups;
  std::vector<Point> fixed;         // ascending
  std::vector<Point> fixed_assign;  // current images of `fixed`
  std::uint64_t total = 0;
  bool done = false;

  Impl(const Perm& alpha, unsigned degree) : n(degree) {
    total = centralizer_order(alpha, n);
    std::map<std::size_t, std::vector<Cycle>> by_len;
    for (const Cycle& c : cycle_factors(alpha)) by_len[c.size()].push_back(c);
    Perm w;
    for (const auto& [len, cycles] : by_len) {
      (void)len;
      Group g;
      g.cycles = cycles;
      g.assign.resize(cycles.size());
      std::iota(g.assign.begin(), g.assign.end(), std::size_t{0});
      g.rot.assign(cycles.size(), 0);
      groups.push_back(std::move(g));
      for (const Cycle& c : cycles) w = compose(w, reverser_fixing(c, c.front()));
    }
    omega0 = std::move(w);
    fixed = fixed_points(alpha, n);
    fixed_assign = fixed;
  }

  Perm current() const {
    std::vector<Point> image(n);
    std::iota(image.begin(), image.end(), Point{1});
    for (const Group& g : groups) {
      const std::size_t len = g.cycles.front().size();
      for (std::size_t i = 0; i < g.cycles.size(); ++i) {
        const Cycle& src = g.cycles[i];
        const Cycle& dst = g.cycles[g.assign[i]];
        for (std::size_t m = 0; m < len; ++m)
          image[src[m] - 1] = dst[(m + g.rot[i]) % len];
      }
    }
    for (std::size_t i = 0; i < fixed.size(); ++i)
      image[fixed[i] - 1] = fixed_assign[i];
    return compose(Perm(std::move(image)), omega0);
  }

  bool advance() {
    for (Group& g : groups) {
      const std::size_t len = g.cycles.front().size();
      for (std::size_t& r : g.rot) {
        if (++r < len) return true;
        r = 0;
      }
    }
    for (Group& g : groups)
      if (std::next_permutation(g.assign.begin(), g.assign.end())) return true;
    return std::next_permutation(fixed_assign.begin(), fixed_assign.end());
  }
};

InvertingCosetStream::InvertingCosetStream(const Perm& alpha, unsigned n)
    : impl_(new Impl(alpha, n)) {}
InvertingCosetStream::~InvertingCosetStream() = default;
InvertingCosetStream::InvertingCosetStream(InvertingCosetStream&&) noexcept =
    default;
InvertingCosetStream& InvertingCosetStream::operator=(
    InvertingCosetStream&&) noexcept = default;

std::uint64_t InvertingCosetStream::size() const { return impl_->total; }

std::optional<Perm> InvertingCosetStream::next() {
  if (impl_->done) return std::nullopt;
  Perm out = impl_->current();
  if (!impl_->advance()) impl_->done = true;
  return out;
}

std::vector<Perm> all_inverting_conjugators(const Perm& alpha, unsigned n) {
  InvertingCosetStream stream(alpha, n);
  std::vector<Perm> out;
  out.reserve(stream.size());
  while (auto g = stream.next()) out.push_back(std::move(*g));
  return out;
}

std::optional<Perm> brute_force_inverter(const Perm& alpha, const Perm& beta,
                                         unsigned n,
                                         std::uint64_t coset_budget) {
  std::uint64_t coset = 0;
  try {
    coset = centralizer_order(alpha, n);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Overflow)
      throw Error(ErrorCode::BudgetExceeded,
                  "inverting coset is too large to enumerate");
    throw;
  }
  if (coset > coset_budget) {
    std::ostringstream os;
    os << "inverting coset has " << coset << " elements, budget is "
       << coset_budget;
    throw Error(ErrorCode::BudgetExceeded, os.str());
  }
  const Perm beta_inv = inverse(beta);
  InvertingCosetStream stream(alpha, n);
  while (auto g = stream.next())
    if (conjugate(beta, *g) == beta_inv) return std::move(*g);
  return std::nullopt;
}

namespace {

// Flat lexicographic table of S_n for the exhaustive scans.
struct FlatGroup {
  unsigned n = 0;
  std::uint32_t size = 0;
  std::vector<std::uint8_t> img;  // size * n, 0-based images
  std::vector<std::uint32_t> inv;

  const std::uint8_t* at(std::uint32_t id) const {
    return img.data() + std::size_t(id) * n;
  }
};

std::uint32_t lehmer_rank(const std::uint8_t* p, unsigned n,
                          const std::vector<std::uint32_t>& fact) {
  std::uint32_t rank = 0;
  for (unsigned i = 0; i < n; ++i) {
    unsigned smaller = 0;
    for (unsigned j = i + 1; j < n; ++j)
      if (p[j] < p[i]) ++smaller;
    rank += smaller * fact[n - 1 - i];
  }
  return rank;
}

FlatGroup build_flat_group(unsigned n) {
  FlatGroup g;
  g.n = n;
  std::vector<std::uint32_t> fact(n + 1, 1);
  for (unsigned i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
  g.size = fact[n];
  g.img.reserve(std::size_t(g.size) * n);
  std::vector<std::uint8_t> p(n);
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  do {
    g.img.insert(g.img.end(), p.begin(), p.end());
  } while (std::next_permutation(p.begin(), p.end()));
  g.inv.resize(g.size);
  std::vector<std::uint8_t> q(n);
  for (std::uint32_t id = 0; id < g.size; ++id) {
    const std::uint8_t* a = g.at(id);
    for (unsigned x = 0; x < n; ++x) q[a[x]] = static_cast<std::uint8_t>(x);
    g.inv[id] = lehmer_rank(q.data(), n, fact);
  }
  return g;
}

inline unsigned commutator_moved(const std::uint8_t* a, const std::uint8_t* ai,
                                 const std::uint8_t* b, const std::uint8_t* bi,
                                 unsigned n) {
  unsigned m = 0;
  for (unsigned x = 0; x < n; ++x) m += (b[a[bi[ai[x]]]] != x) ? 1u : 0u;
  return m;
}

Perm perm_from_flat(const std::uint8_t* p, unsigned n) {
  std::vector<Point> image(n);
  for (unsigned x = 0; x < n; ++x) image[x] = p[x] + 1;
  return Perm(std::move(image));
}

struct Accumulator {
  std::uint64_t qualifying = 0;
  std::uint64_t constructive = 0;
  std::uint64_t fallback = 0;
  std::uint64_t failures = 0;
  std::vector<std::pair<Perm, Perm>> fallback_pairs;
  std::vector<std::pair<Perm, Perm>> failure_pairs;
  std::map<std::size_t, SweepHistogramRow> histogram;
  std::uint64_t cross_checked = 0;
  std::uint64_t cross_check_mismatches = 0;

  void merge(Accumulator&& other, std::size_t cap) {
    qualifying += other.qualifying;
    constructive += other.constructive;
    fallback += other.fallback;
    failures += other.failures;
    for (auto& p : other.fallback_pairs)
      if (fallback_pairs.size() < cap) fallback_pairs.push_back(std::move(p));
    for (auto& p : other.failure_pairs)
      if (failure_pairs.size() < cap) failure_pairs.push_back(std::move(p));
    for (auto& [moved, row] : other.histogram) {
      SweepHistogramRow& mine = histogram[moved];
      mine.moved = moved;
      mine.pairs += row.pairs;
      mine.attempted += row.attempted;
      mine.witnessed += row.witnessed;
    }
    cross_checked += other.cross_checked;
    cross_check_mismatches += other.cross_check_mismatches;
  }
};

// One pair, weighted: count it, and when it qualifies run the full solver
// plus optional oracle cross-check.
void sweep_pair(const Perm& alpha, const Perm& beta, unsigned m,
                std::uint64_t weight, bool cross_check,
                const SweepOptions& options, Accumulator& acc) {
  SweepHistogramRow& row = acc.histogram[m];
  row.moved = m;
  row.pairs += weight;
  if (m > 4) return;
  acc.qualifying += weight;
  row.attempted += weight;

  InvertOptions solve_options;
  solve_options.allow_fallback = true;
  solve_options.coset_budget = options.coset_budget;
  const InvertOutcome outcome = simultaneous_inverter(alpha, beta, solve_options);
  const bool ok = outcome.status == InvertStatus::Found &&
                  outcome.certificate.has_value() &&
                  outcome.certificate->verified &&
                  verify_witness(alpha, beta, outcome.certificate->gamma);
  if (ok) {
    row.witnessed += weight;
    if (outcome.certificate->method == WitnessMethod::OracleFallback) {
      acc.fallback += weight;
      if (acc.fallback_pairs.size() < options.listed_pairs_cap)
        acc.fallback_pairs.emplace_back(alpha, beta);
    } else {
      acc.constructive += weight;
    }
  } else {
    acc.failures += weight;
    if (acc.failure_pairs.size() < options.listed_pairs_cap)
      acc.failure_pairs.emplace_back(alpha, beta);
  }

  if (cross_check) {
    ++acc.cross_checked;
    const unsigned n = static_cast<unsigned>(
        std::max(alpha.degree(), beta.degree()));
    const auto oracle =
        brute_force_inverter(alpha, beta, n, options.coset_budget);
    const bool oracle_found = oracle.has_value();
    const bool solver_found = outcome.status == InvertStatus::Found;
    if (oracle_found != solver_found) ++acc.cross_check_mismatches;
  }
}

std::vector<std::uint32_t> class_representatives(const FlatGroup& group,
                                                 std::vector<std::uint64_t>& weights) {
  std::map<std::vector<unsigned>, std::uint32_t> first_of_type;
  std::map<std::vector<unsigned>, std::uint64_t> type_count;
  std::vector<std::vector<unsigned>> type_of(group.size);
  for (std::uint32_t id = 0; id < group.size; ++id) {
    const std::uint8_t* p = group.at(id);
    std::vector<char> seen(group.n, 0);
    std::vector<unsigned> type;
    for (unsigned x = 0; x < group.n; ++x) {
      if (seen[x] || p[x] == x) continue;
      unsigned len = 0, cur = x;
      while (!seen[cur]) {
        seen[cur] = 1;
        cur = p[cur];
        ++len;
      }
      type.push_back(len);
    }
    std::sort(type.begin(), type.end());
    if (!first_of_type.count(type)) first_of_type[type] = id;
    ++type_count[type];
    type_of[id] = std::move(type);
  }
  std::vector<std::uint32_t> reps;
  weights.clear();
  for (const auto& [type, id] : first_of_type) {
    reps.push_back(id);
    weights.push_back(type_count[type]);
  }
  std::sort(reps.begin(), reps.end());
  std::vector<std::uint64_t> ordered;
  for (std::uint32_t id : reps) ordered.push_back(type_count[type_of[id]]);
  weights = std::move(ordered);
  return reps;
}

}  // namespace

SweepReport theorem_sweep(unsigned n, const SweepOptions& options) {
  if (n == 0)
    throw Error(ErrorCode::PreconditionViolated, "degree must be positive");
  if (options.mode == SweepMode::Exhaustive && n > 7)
    throw Error(ErrorCode::BudgetExceeded,
                "exhaustive sweeps cover degree at most 7");
  if (options.mode == SweepMode::Sampled && options.samples == 0)
    throw Error(ErrorCode::PreconditionViolated,
                "sampled sweeps need a positive sample count");

  const auto start = std::chrono::steady_clock::now();
  SweepReport report;
  report.n = n;
  report.mode = options.mode;
  report.dedup = options.dedup;
  report.seed = options.seed;
  report.samples = options.samples;
  const unsigned jobs = std::max(1u, options.jobs);
  report.jobs = jobs;

  std::vector<Accumulator> parts;

  if (options.mode == SweepMode::Exhaustive) {
    const FlatGroup group = build_flat_group(n);
    std::vector<std::uint32_t> a_ids(group.size);
    std::iota(a_ids.begin(), a_ids.end(), 0u);
    std::vector<std::uint64_t> weights(group.size, 1);
    if (options.dedup) {
      a_ids = class_representatives(group, weights);
      report.classes = a_ids.size();
    }
    report.total_pairs = 0;
    for (std::size_t i = 0; i < a_ids.size(); ++i)
      report.total_pairs += weights[i] * group.size;

    const std::size_t count = a_ids.size();
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(count, 1)));
    parts.resize(workers);
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = count * w / workers;
      const std::size_t hi = count * (w + 1) / workers;
      threads.emplace_back([&, lo, hi, w] {
        Accumulator& acc = parts[w];
        for (std::size_t i = lo; i < hi; ++i) {
          const std::uint32_t a_id = a_ids[i];
          const std::uint8_t* a = group.at(a_id);
          const std::uint8_t* ai = group.at(group.inv[a_id]);
          const Perm alpha = perm_from_flat(a, n);
          for (std::uint32_t b_id = 0; b_id < group.size; ++b_id) {
            const std::uint8_t* b = group.at(b_id);
            const std::uint8_t* bi = group.at(group.inv[b_id]);
            const unsigned m = commutator_moved(a, ai, b, bi, n);
            if (m > 4) {
              SweepHistogramRow& row = acc.histogram[m];
              row.moved = m;
              row.pairs += weights[i];
              continue;
            }
            const Perm beta = perm_from_flat(b, n);
            const std::uint64_t pair_index =
                std::uint64_t(a_id) * group.size + b_id;
            const bool cross = options.cross_check_every > 0 &&
                               pair_index % options.cross_check_every == 0;
            sweep_pair(alpha, beta, m, weights[i], cross, options, acc);
          }
        }
      });
    }
    for (auto& t : threads) t.join();
  } else {
    report.total_pairs = options.samples;
    const std::uint64_t count = options.samples;
    const unsigned workers = static_cast<unsigned>(
        std::min<std::uint64_t>(jobs, std::max<std::uint64_t>(count, 1)));
    parts.resize(workers);
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t lo = count * w / workers;
      const std::uint64_t hi = count * (w + 1) / workers;
      threads.emplace_back([&, lo, hi, w] {
        Accumulator& acc = parts[w];
        std::vector<std::uint8_t> a(n), ai(n), b(n), bi(n);
        for (std::uint64_t i = lo; i < hi; ++i) {
          std::uint64_t state =
              options.seed + (i + 1) * 0x9E3779B97F4A7C15ULL;
          for (auto* p : {&a, &b}) {
            std::iota(p->begin(), p->end(), std::uint8_t{0});
            for (unsigned j = n - 1; j > 0; --j) {
              const unsigned k =
                  static_cast<unsigned>(splitmix64(state) % (j + 1));
              std::swap((*p)[j], (*p)[k]);
            }
          }
          for (unsigned x = 0; x < n; ++x) {
            ai[a[x]] = static_cast<std::uint8_t>(x);
            bi[b[x]] = static_cast<std::uint8_t>(x);
          }
          const unsigned m =
              commutator_moved(a.data(), ai.data(), b.data(), bi.data(), n);
          if (m > 4) {
            SweepHistogramRow& row = acc.histogram[m];
            row.moved = m;
            row.pairs += 1;
            continue;
          }
          const Perm alpha = perm_from_flat(a.data(), n);
          const Perm beta = perm_from_flat(b.data(), n);
          const bool cross = options.cross_check_every > 0 &&
                             i % options.cross_check_every == 0;
          sweep_pair(alpha, beta, m, 1, cross, options, acc);
        }
      });
    }
    for (auto& t : threads) t.join();
  }

  Accumulator total;
  for (auto& part : parts) total.merge(std::move(part), options.listed_pairs_cap);
  report.qualifying = total.qualifying;
  report.constructive = total.constructive;
  report.fallback = total.fallback;
  report.failures = total.failures;
  report.fallback_pairs = std::move(total.fallback_pairs);
  report.failure_pairs = std::move(total.failure_pairs);
  for (auto& [moved, row] : total.histogram) {
    (void)moved;
    report.histogram.push_back(row);
  }
  report.cross_checked = total.cross_checked;
  report.cross_check_mismatches = total.cross_check_mismatches;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

SharpnessReport sharpness_search(unsigned n, std::size_t target_moved,
                                 std::uint64_t coset_budget) {
  if (n == 0 || n > 7)
    throw Error(ErrorCode::BudgetExceeded,
                "sharpness scans cover degrees 1 through 7");
  const auto start = std::chrono::steady_clock::now();
  SharpnessReport report;
  report.n = n;
  report.target_moved = target_moved;

  const FlatGroup group = build_flat_group(n);
  report.scanned_pairs = std::uint64_t(group.size) * group.size;
  for (std::uint32_t a_id = 0; a_id < group.size; ++a_id) {
    const std::uint8_t* a = group.at(a_id);
    const std::uint8_t* ai = group.at(group.inv[a_id]);
    for (std::uint32_t b_id = 0; b_id < group.size; ++b_id) {
      const std::uint8_t* b = group.at(b_id);
      const std::uint8_t* bi = group.at(group.inv[b_id]);
      if (commutator_moved(a, ai, b, bi, n) != target_moved) continue;
      ++report.matching_pairs;
      const Perm alpha = perm_from_flat(a, n);
      const Perm beta = perm_from_flat(b, n);
      if (brute_force_inverter(alpha, beta, n, coset_budget)) continue;
      // Independent second pass through the partner's coset.
      bool witness = false;
      InvertingCosetStream stream(beta, n);
      const Perm alpha_inv = inverse(alpha);
      while (auto g = stream.next()) {
        if (conjugate(alpha, *g) == alpha_inv) {
          witness = true;
          break;
        }
      }
      if (witness)
        throw Error(ErrorCode::PreconditionViolated,
                    "sharpness passes disagree on witness existence");
      report.unsolvable.emplace_back(std::move(alpha), std::move(beta));
    }
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace simconj
