#pragma once

// Seeded random instances for tests, benchmarks and the `gen` command.

#include <cstdint>
#include <random>

#include "hcperm/core.hpp"

namespace hcperm {

using Rng = std::mt19937_64;

/// Entries uniform in [lo, hi].
inline Instance<BigInt> random_matrix(std::size_t n, long lo, long hi, Rng& rng) {
  std::uniform_int_distribution<long> dist(lo, hi);
  std::vector<BigInt> v;
  v.reserve(n * n);
  for (std::size_t i = 0; i < n * n; ++i) v.emplace_back(dist(rng));
  return {n, std::move(v)};
}

/// Uniform residues in [0, p).
inline Instance<Zp> random_zp_matrix(std::size_t n, std::uint64_t p, Rng& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
  std::vector<Zp> v;
  v.reserve(n * n);
  for (std::size_t i = 0; i < n * n; ++i) v.emplace_back(dist(rng), p);
  return {n, std::move(v)};
}

struct Arc {
  std::size_t from;  // 1-based
  std::size_t to;
  std::uint64_t multiplicity;
};

/// Each off-diagonal ordered pair is present with probability `density`,
/// with multiplicity uniform in [1, max_mult].
inline std::vector<Arc> random_multigraph(std::size_t n, double density, std::uint64_t max_mult, Rng& rng) {
  std::bernoulli_distribution present(density);
  std::uniform_int_distribution<std::uint64_t> mult(1, std::max<std::uint64_t>(max_mult, 1));
  std::vector<Arc> arcs;
  for (std::size_t u = 1; u <= n; ++u) {
    for (std::size_t v = 1; v <= n; ++v) {
      if (u == v) continue;
      if (present(rng)) arcs.push_back({u, v, mult(rng)});
    }
  }
  return arcs;
}

inline std::string serialize_multigraph(std::size_t n, const std::vector<Arc>& arcs) {
  std::string out = std::to_string(n) + " " + std::to_string(arcs.size()) + "\n";
  for (const auto& a : arcs) {
    out += std::to_string(a.from) + " " + std::to_string(a.to);
    if (a.multiplicity != 1) out += " " + std::to_string(a.multiplicity);
    out += '\n';
  }
  return out;
}

/// Weights uniform in [0, max_weight]; each arc absent with probability
/// `absent`.
inline AtspInstance random_atsp(std::size_t n, std::uint64_t max_weight, double absent, Rng& rng) {
  std::bernoulli_distribution drop(absent);
  std::uniform_int_distribution<std::uint64_t> weight(0, max_weight);
  AtspInstance inst{n, {}};
  inst.weights.reserve(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    const bool gone = drop(rng);
    const std::uint64_t w = weight(rng);
    // The diagonal never lies on a tour, so it is written as absent.
    const bool loop = i / n == i % n;
    inst.weights.emplace_back(gone || loop ? std::nullopt : std::optional<std::uint64_t>(w));
  }
  return inst;
}

}  // namespace hcperm
