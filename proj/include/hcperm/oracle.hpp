#pragma once

// Brute-force references by direct permutation enumeration.  Deliberately
// naive: these are the ground truth the fast routines are tested against.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hcperm/core.hpp"

namespace hcperm {

inline constexpr std::size_t kDefaultOracleCap = 10;

namespace detail {
inline void check_oracle_cap(std::size_t n, std::size_t cap, const char* who) {
  if (n > cap) {
    throw LimitError(std::string(who) + ": n=" + std::to_string(n) + " exceeds the enumeration cap " +
                     std::to_string(cap));
  }
}

/// Calls visit(order) for each cyclic order 0 -> order[1] -> ... -> 0,
/// i.e. once per single-cycle permutation of {0..n-1}.
template <class Visit>
void for_each_cyclic_order(std::size_t n, Visit&& visit) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  do {
    visit(order);
  } while (std::next_permutation(order.begin() + 1, order.end()));
}
}  // namespace detail

/// Sum over all permutations sigma of prod_i f(i, sigma(i)).
template <CommutativeRing T>
T per_brute(const Instance<T>& inst, std::size_t cap = kDefaultOracleCap) {
  const std::size_t n = inst.size();
  detail::check_oracle_cap(n, cap, "per_brute");
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  T total = zero_like(inst(0, 0));
  do {
    T term = one_like(inst(0, 0));
    for (std::size_t i = 0; i < n; ++i) term = term * inst(i, sigma[i]);
    total = total + term;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

/// Sum over single-cycle permutations.  For n = 1 the identity counts as the
/// single cycle, so the result is the self-loop weight f(1,1).
template <CommutativeRing T>
T hc_brute(const Instance<T>& inst, std::size_t cap = kDefaultOracleCap) {
  const std::size_t n = inst.size();
  detail::check_oracle_cap(n, cap, "hc_brute");
  if (n == 1) return inst(0, 0);
  T total = zero_like(inst(0, 0));
  detail::for_each_cyclic_order(n, [&](const std::vector<std::size_t>& order) {
    T term = one_like(inst(0, 0));
    for (std::size_t i = 0; i < n; ++i) term = term * inst(order[i], order[(i + 1) % n]);
    total = total + term;
  });
  return total;
}

/// Weight of the cheapest directed Hamiltonian cycle using present arcs only,
/// or nullopt when none exists.
inline std::optional<std::uint64_t> tsp_brute(const AtspInstance& inst, std::size_t cap = kDefaultOracleCap) {
  detail::check_oracle_cap(inst.n, cap, "tsp_brute");
  if (inst.n < 2) throw InputError("tsp_brute: a tour needs at least 2 vertices");
  std::optional<std::uint64_t> best;
  detail::for_each_cyclic_order(inst.n, [&](const std::vector<std::size_t>& order) {
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < inst.n; ++i) {
      const auto& arc = inst(order[i], order[(i + 1) % inst.n]);
      if (!arc) return;
      w += *arc;
    }
    if (!best || w < *best) best = w;
  });
  return best;
}

/// Number of Hamiltonian cycles of each total weight.
inline std::map<std::uint64_t, std::uint64_t> tour_weight_histogram_brute(const AtspInstance& inst,
                                                                         std::size_t cap = kDefaultOracleCap) {
  detail::check_oracle_cap(inst.n, cap, "tour_weight_histogram_brute");
  std::map<std::uint64_t, std::uint64_t> hist;
  if (inst.n < 2) return hist;
  detail::for_each_cyclic_order(inst.n, [&](const std::vector<std::size_t>& order) {
    std::uint64_t w = 0;
    for (std::size_t i = 0; i < inst.n; ++i) {
      const auto& arc = inst(order[i], order[(i + 1) % inst.n]);
      if (!arc) return;
      w += *arc;
    }
    ++hist[w];
  });
  return hist;
}

}  // namespace hcperm
