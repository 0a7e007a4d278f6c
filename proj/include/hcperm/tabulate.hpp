#pragma once

// The tabulated pipeline: reduce modulo several primes, push every
// self-reduction term into a table keyed by the small matrix, evaluate each
// distinct small matrix once with a classic counter, and assemble the
// per-prime residues with the CRT.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

#include "hcperm/classic.hpp"
#include "hcperm/modular.hpp"
#include "hcperm/selfreduce.hpp"

namespace hcperm {

namespace detail {

/// Open-addressing map from packed keys to Z_p coefficients.  The all-ones
/// word marks an empty slot, so packed keys must use at most 63 bits.
class PackedCoefficients {
 public:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  std::size_t size() const noexcept { return size_; }

  void add(std::uint64_t key, std::uint64_t coeff, std::uint64_t p) {
    if (2 * (size_ + 1) > slots_.size()) grow();
    std::size_t i = slot_of(key);
    while (slots_[i].key != kEmpty && slots_[i].key != key) i = (i + 1) & mask_;
    if (slots_[i].key == kEmpty) {
      slots_[i] = {key, coeff};
      ++size_;
    } else {
      slots_[i].value = add_mod(slots_[i].value, coeff, p);
    }
  }

  std::optional<std::uint64_t> find(std::uint64_t key) const {
    if (slots_.empty()) return std::nullopt;
    for (std::size_t i = slot_of(key); slots_[i].key != kEmpty; i = (i + 1) & mask_) {
      if (slots_[i].key == key) return slots_[i].value;
    }
    return std::nullopt;
  }

  template <class Visit>
  void for_each(Visit&& visit) const {
    for (const auto& s : slots_) {
      if (s.key != kEmpty) visit(s.key, s.value);
    }
  }

 private:
  struct Slot {
    std::uint64_t key = kEmpty;
    std::uint64_t value = 0;
  };

  std::size_t slot_of(std::uint64_t key) const noexcept {
    return static_cast<std::size_t>((key * 0x9e3779b97f4a7c15ULL) >> 17) & mask_;
  }

  void grow() {
    std::vector<Slot> old = std::move(slots_);
    slots_.assign(old.empty() ? 1024 : 2 * old.size(), Slot{});
    mask_ = slots_.size() - 1;
    for (const auto& s : old) {
      if (s.key == kEmpty) continue;
      std::size_t i = slot_of(s.key);
      while (slots_[i].key != kEmpty) i = (i + 1) & mask_;
      slots_[i] = s;
    }
  }

  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

inline unsigned bit_width_of(std::uint64_t x) {
  unsigned b = 0;
  for (; x != 0; x >>= 1) ++b;
  return b;
}

}  // namespace detail

/// Accumulated Z_p coefficients per distinct small matrix.  Small matrices
/// whose entries fit into one 63-bit word are stored packed.
class CoefficientTable {
 public:
  explicit CoefficientTable(std::uint64_t p) : p_(p), bits_(detail::bit_width_of(p - 1)) {}

  std::uint64_t modulus() const noexcept { return p_; }
  std::uint64_t terms_seen() const noexcept { return terms_seen_; }
  std::uint64_t distinct_keys() const noexcept { return entries_.size() + packed_.size(); }

  void add(const ReducedTerm& term) {
    const std::size_t k = term.small.size();
    if (packable(k)) {
      std::uint64_t key = 0;
      for (const Zp& x : term.small.values()) key = (key << bits_) | x.v;
      ++terms_seen_;
      packed_.add(key, term.coeff.v % p_, p_);
      k_ = k;
      return;
    }
    assign_key(scratch_, term.small, p_);
    add(scratch_, term.coeff.v);
  }

  void add(const CanonicalKey& key, std::uint64_t coeff) {
    if (key.p != p_) throw InternalError("CoefficientTable::add: key has a different modulus");
    ++terms_seen_;
    if (packable(key.k)) {
      packed_.add(pack(key), coeff % p_, p_);
      k_ = key.k;
      return;
    }
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      entries_.emplace(key, coeff % p_);
    } else {
      it->second = add_mod(it->second, coeff % p_, p_);
    }
  }

  /// Accumulated coefficient of `key`, or nullopt if it never occurred.
  std::optional<std::uint64_t> coefficient(const CanonicalKey& key) const {
    if (packable(key.k)) return packed_.find(pack(key));
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  /// Pointwise Z_p addition; the result does not depend on merge order.
  void merge(const CoefficientTable& other) {
    if (other.p_ != p_) throw InternalError("CoefficientTable::merge: modulus mismatch");
    for (const auto& [key, value] : other.entries_) {
      auto [it, inserted] = entries_.emplace(key, value);
      if (!inserted) it->second = add_mod(it->second, value, p_);
    }
    other.packed_.for_each([&](std::uint64_t key, std::uint64_t value) { packed_.add(key, value, p_); });
    if (k_ == 0) k_ = other.k_;
    terms_seen_ += other.terms_seen_;
  }

  /// sum_g T(g) * count(g) mod p over keys with a nonzero coefficient.
  template <class Evaluate>
  std::uint64_t inner_product(Evaluate&& evaluate) const {
    std::uint64_t sum = 0;
    for (const auto& [key, value] : entries_) {
      if (value == 0) continue;
      const Zp count = evaluate(key.to_matrix());
      sum = add_mod(sum, mul_mod(value, count.v, p_), p_);
    }
    Matrix<Zp> g(k_, Zp(0, p_));
    const std::uint64_t field = (std::uint64_t{1} << bits_) - 1;
    packed_.for_each([&](std::uint64_t key, std::uint64_t value) {
      if (value == 0) return;
      for (std::size_t i = k_ * k_; i-- > 0; key >>= bits_) g(i / k_, i % k_).v = key & field;
      sum = add_mod(sum, mul_mod(value, evaluate(g).v, p_), p_);
    });
    return sum;
  }

 private:
  bool packable(std::size_t k) const noexcept {
    return k != 0 && (k_ == 0 || k == k_) && k * k * bits_ <= 63;
  }

  std::uint64_t pack(const CanonicalKey& key) const {
    std::uint64_t packed = 0;
    for (auto x : key.body) packed = (packed << bits_) | x;
    return packed;
  }

  std::uint64_t p_;
  unsigned bits_;
  std::size_t k_ = 0;  // size of the packed matrices, fixed by the first one
  std::uint64_t terms_seen_ = 0;
  std::unordered_map<CanonicalKey, std::uint64_t, CanonicalKeyHash> entries_;
  detail::PackedCoefficients packed_;
  CanonicalKey scratch_;
};

struct PrimeStats {
  std::uint64_t prime = 0;
  std::size_t k = 0;
  std::uint64_t terms_seen = 0;
  std::uint64_t distinct_keys = 0;
  std::uint64_t evaluated_keys = 0;  // distinct keys with a nonzero coefficient
  std::uint64_t residue = 0;
};

struct RunStats {
  CountingProblem problem = CountingProblem::permanent;
  std::size_t n = 0;
  BigInt max_abs_weight;
  std::vector<std::uint64_t> primes;
  std::size_t k = 0;
  std::vector<PrimeStats> per_prime;
  double reduce_seconds = 0;
  double evaluate_seconds = 0;
  double reconstruct_seconds = 0;

  BigInt modulus_product() const {
    BigInt m(1);
    for (auto p : primes) m *= static_cast<unsigned long>(p);
    return m;
  }

  /// Equality ignoring wall-clock fields.
  bool same_counts(const RunStats& o) const {
    if (problem != o.problem || n != o.n || max_abs_weight != o.max_abs_weight || primes != o.primes || k != o.k ||
        per_prime.size() != o.per_prime.size()) {
      return false;
    }
    for (std::size_t i = 0; i < per_prime.size(); ++i) {
      const auto &a = per_prime[i], &b = o.per_prime[i];
      if (a.prime != b.prime || a.k != b.k || a.terms_seen != b.terms_seen || a.distinct_keys != b.distinct_keys ||
          a.evaluated_keys != b.evaluated_keys || a.residue != b.residue) {
        return false;
      }
    }
    return true;
  }
};

struct TabulatedResult {
  BigInt value;
  RunStats stats;
};

struct TabulationOptions {
  std::optional<std::size_t> k;
  unsigned threads = 1;
  /// Recompute each residue directly with a classic counter and fail on
  /// disagreement; only for n up to verify_max_n.
  bool verify_residues = false;
  std::size_t verify_max_n = 20;
  /// Receives every emitted term (prime, term) when set; forces one worker.
  std::function<void(std::uint64_t, const ReducedTerm&)> trace;
};

/// floor(sqrt(0.99 n / log2 p_max)) clamped to [1, n-1], or the override
/// clamped to the same range.
inline std::size_t choose_k(std::size_t n, std::uint64_t p_max, std::optional<std::size_t> override_k = std::nullopt) {
  if (n < 2) throw InputError("choose_k: n must be at least 2");
  if (p_max < 2) throw InputError("choose_k: p_max must be at least 2");
  auto clamp = [n](std::size_t k) { return std::clamp<std::size_t>(k, 1, n - 1); };
  if (override_k) return clamp(*override_k);
  const double k = std::floor(std::sqrt(0.99 * static_cast<double>(n) / std::log2(static_cast<double>(p_max))));
  return clamp(static_cast<std::size_t>(k));
}

/// Default kernel size for Hamiltonian cycles: the formula, raised to 2 where
/// n allows it.
inline std::size_t choose_k_hc(std::size_t n, std::uint64_t p_max, std::optional<std::size_t> override_k = std::nullopt) {
  if (override_k) return choose_k(n, p_max, override_k);
  return std::clamp<std::size_t>(std::max<std::size_t>(choose_k(n, p_max), 2), 1, n - 1);
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline Zp count_small(CountingProblem problem, const Matrix<Zp>& g) {
  return problem == CountingProblem::permanent ? per_ryser(g) : hc_ie(g);
}

inline CoefficientTable build_table(const KernelReduction& reduction, const TabulationOptions& options) {
  const std::uint64_t p = reduction.modulus();
  const std::uint64_t subsets = reduction.subset_count();
  if (options.trace) {
    CoefficientTable table(p);
    reduction.for_each_term([&](const ReducedTerm& t) {
      options.trace(p, t);
      table.add(t);
    });
    return table;
  }
  const auto workers = static_cast<std::uint64_t>(std::clamp<unsigned>(options.threads, 1, 256));
  const std::uint64_t shards = std::min<std::uint64_t>(workers, subsets);
  std::vector<CoefficientTable> tables(shards, CoefficientTable(p));
  auto run_shard = [&](std::uint64_t s) {
    const std::uint64_t first = subsets * s / shards, last = subsets * (s + 1) / shards;
    reduction.for_each_term(first, last, [&](const ReducedTerm& t) { tables[s].add(t); });
  };
  if (shards == 1) {
    run_shard(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(shards);
    for (std::uint64_t s = 0; s < shards; ++s) pool.emplace_back(run_shard, s);
    for (auto& t : pool) t.join();
  }
  CoefficientTable merged = std::move(tables[0]);
  for (std::uint64_t s = 1; s < shards; ++s) merged.merge(tables[s]);
  return merged;
}

inline TabulatedResult run_tabulated(const Instance<BigInt>& inst, CountingProblem problem,
                                     const TabulationOptions& options) {
  const std::size_t n = inst.size();
  if (n < 2) throw InputError("tabulated evaluation needs n >= 2");
  TabulatedResult result;
  RunStats& stats = result.stats;
  stats.problem = problem;
  stats.n = n;
  stats.max_abs_weight = max_abs_weight(inst);
  const CrtPlan plan = select_primes(stats.max_abs_weight, n);
  stats.primes.assign(plan.primes().begin(), plan.primes().end());
  if (plan.modulus() <= 2 * value_bound(stats.max_abs_weight, n)) {
    throw InternalError("tabulation: prime product does not cover the value range");
  }
  stats.k = problem == CountingProblem::permanent ? choose_k(n, plan.max_prime(), options.k)
                                                  : choose_k_hc(n, plan.max_prime(), options.k);

  std::vector<std::uint64_t> residues;
  for (const std::uint64_t p : plan.primes()) {
    const Instance<Zp> reduced = mod_reduce_instance(inst, p);
    const KernelReduction reduction(reduced, stats.k, problem);

    auto start = std::chrono::steady_clock::now();
    const CoefficientTable table = build_table(reduction, options);
    stats.reduce_seconds += seconds_since(start);
    if (table.terms_seen() != reduction_term_count(problem, n, stats.k)) {
      throw InternalError("tabulation: term count differs from the reduction's term count");
    }

    start = std::chrono::steady_clock::now();
    PrimeStats ps;
    ps.prime = p;
    ps.k = stats.k;
    ps.terms_seen = table.terms_seen();
    ps.distinct_keys = table.distinct_keys();
    ps.residue = table.inner_product([&](const Matrix<Zp>& g) {
      ++ps.evaluated_keys;
      return count_small(problem, g);
    });
    stats.evaluate_seconds += seconds_since(start);

    if (options.verify_residues && n <= options.verify_max_n) {
      if (count_small(problem, reduced).v != ps.residue) {
        throw InternalError("tabulation: residue mod " + std::to_string(p) + " disagrees with direct evaluation");
      }
    }
    residues.push_back(ps.residue);
    stats.per_prime.push_back(ps);
  }

  const auto start = std::chrono::steady_clock::now();
  result.value = crt_reconstruct(residues, plan);
  stats.reconstruct_seconds = seconds_since(start);
  return result;
}

}  // namespace detail

inline TabulatedResult per_tabulated(const Instance<BigInt>& inst, const TabulationOptions& options = {}) {
  return detail::run_tabulated(inst, CountingProblem::permanent, options);
}

inline TabulatedResult hc_tabulated(const Instance<BigInt>& inst, const TabulationOptions& options = {}) {
  return detail::run_tabulated(inst, CountingProblem::hamiltonian_cycles, options);
}

}  // namespace hcperm
