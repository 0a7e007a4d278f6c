#pragma once

// The poly(n) 2^n baselines: Ryser's permanent, inclusion-exclusion
// Hamiltonian-cycle counting and a Held-Karp style subset DP.  All three are
// generic over the scalar ring; they double as the small-instance evaluators
// of the tabulated pipeline (over Z_p) and the ATSP counter (over truncated
// polynomials).

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "hcperm/core.hpp"

namespace hcperm {

inline constexpr std::size_t kDefaultDpCap = 24;

/// Ryser's formula, subsets visited in Gray-code order so each step adds or
/// removes a single column from the running row sums:
///   per(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij.
template <CommutativeRing T>
T per_ryser(const Instance<T>& a) {
  const std::size_t n = a.size();
  if (n == 0) throw InputError("per_ryser: empty instance");
  if (n > 62) throw LimitError("per_ryser: n too large for subset enumeration");
  const T zero = zero_like(a(0, 0));
  std::vector<T> row_sum(n, zero);
  T total = zero;
  std::uint64_t gray = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < subsets; ++step) {
    const auto j = static_cast<std::size_t>(std::countr_zero(step));
    const std::uint64_t bit = std::uint64_t{1} << j;
    gray ^= bit;
    const bool added = (gray & bit) != 0;
    for (std::size_t i = 0; i < n; ++i) row_sum[i] = added ? T(row_sum[i] + a(i, j)) : T(row_sum[i] - a(i, j));
    T prod = row_sum[0];
    for (std::size_t i = 1; i < n; ++i) prod = prod * row_sum[i];
    // (-1)^{n - |S|}
    if (((n - static_cast<std::size_t>(std::popcount(gray))) & 1U) != 0) {
      total = total - prod;
    } else {
      total += prod;
    }
  }
  return total;
}

/// Inclusion-exclusion over the vertex subsets avoiding the anchor (vertex n):
/// hc = sum_{S} (-1)^{(n-1)-|S|} * (closed walks of length n from the anchor
/// inside S + anchor).  Walk weights come from repeated vector-matrix
/// products over the induced submatrix.
template <CommutativeRing T>
T hc_ie(const Instance<T>& a) {
  const std::size_t n = a.size();
  if (n == 0) throw InputError("hc_ie: empty instance");
  if (n == 1) return a(0, 0);
  if (n > 63) throw LimitError("hc_ie: n too large for subset enumeration");
  const std::size_t anchor = n - 1;
  const T zero = zero_like(a(0, 0));
  T total = zero;
  std::vector<std::size_t> verts;
  std::vector<T> walk, next;
  const std::uint64_t subsets = std::uint64_t{1} << (n - 1);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    verts.clear();
    for (std::size_t v = 0; v < n - 1; ++v) {
      if ((mask >> v) & 1U) verts.push_back(v);
    }
    verts.push_back(anchor);
    const std::size_t s = verts.size();
    walk.assign(s, zero);
    walk[s - 1] = one_like(zero);
    next.assign(s, zero);
    for (std::size_t step = 0; step < n; ++step) {
      for (std::size_t c = 0; c < s; ++c) {
        T acc = zero;
        for (std::size_t r = 0; r < s; ++r) multiply_add(acc, walk[r], a(verts[r], verts[c]));
        next[c] = std::move(acc);
      }
      walk.swap(next);
    }
    if (((n - s) & 1U) != 0) {
      total = total - walk[s - 1];
    } else {
      total += walk[s - 1];
    }
  }
  return total;
}

/// Held-Karp style counting DP over (visited subset, last vertex) states for
/// paths leaving the anchor (vertex n), closed back at the full subset.
template <CommutativeRing T>
T hc_dp(const Instance<T>& a, std::size_t cap = kDefaultDpCap) {
  const std::size_t n = a.size();
  if (n == 0) throw InputError("hc_dp: empty instance");
  if (n == 1) return a(0, 0);
  if (n > cap) {
    throw LimitError("hc_dp: n=" + std::to_string(n) + " exceeds the DP memory cap " + std::to_string(cap));
  }
  const std::size_t anchor = n - 1;
  const std::size_t m = n - 1;
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  const T zero = zero_like(a(0, 0));
  std::vector<T> dp((full + 1) * m, zero);
  auto at = [m](std::uint64_t mask, std::size_t v) { return static_cast<std::size_t>(mask) * m + v; };
  for (std::size_t v = 0; v < m; ++v) dp[at(std::uint64_t{1} << v, v)] = a(anchor, v);
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    for (std::size_t v = 0; v < m; ++v) {
      if (((mask >> v) & 1U) == 0) continue;
      const T& here = dp[at(mask, v)];
      for (std::size_t w = 0; w < m; ++w) {
        if ((mask >> w) & 1U) continue;
        T& there = dp[at(mask | (std::uint64_t{1} << w), w)];
        multiply_add(there, here, a(v, w));
      }
    }
  }
  T total = zero;
  for (std::size_t v = 0; v < m; ++v) multiply_add(total, dp[at(full, v)], a(v, anchor));
  return total;
}

}  // namespace hcperm
