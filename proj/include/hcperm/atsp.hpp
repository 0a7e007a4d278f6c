#pragma once

// Shortest asymmetric TSP tour through the (min,+) -> polynomial embedding:
// an arc of weight w becomes z^w, an absent arc becomes 0, and the
// Hamiltonian-cycle count over Z[z] has the number of tours of weight d as
// its z^d coefficient.  The shortest tour is the lowest nonzero degree.

#include <cstdint>
#include <optional>
#include <string>

#include "hcperm/classic.hpp"
#include "hcperm/core.hpp"
#include "hcperm/truncated_poly.hpp"

namespace hcperm {

inline void validate_atsp(const AtspInstance& inst, std::uint64_t max_weight) {
  if (inst.n < 2) throw InputError("ATSP needs at least 2 vertices");
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.n; ++j) {
      const auto& w = inst(i, j);
      if (w && *w > max_weight) {
        throw InputError("arc " + std::to_string(i + 1) + "->" + std::to_string(j + 1) + " has weight " +
                         std::to_string(*w) + " outside [0, " + std::to_string(max_weight) + "]");
      }
    }
  }
}

/// z^w embedding of the arc weights.  The diagonal is embedded as well;
/// inclusion-exclusion cancels every walk that uses it.
inline Instance<TruncatedPoly> embed_atsp(const AtspInstance& inst, std::size_t cap) {
  std::vector<TruncatedPoly> entries;
  entries.reserve(inst.n * inst.n);
  for (const auto& w : inst.weights) {
    entries.push_back(w && *w <= cap ? TruncatedPoly::monomial(static_cast<std::size_t>(*w), cap) : TruncatedPoly(cap));
  }
  return {inst.n, std::move(entries)};
}

/// Tour-weight generating polynomial truncated at `cap` (default M*n, the
/// largest possible tour weight).
inline TruncatedPoly atsp_tour_polynomial(const AtspInstance& inst, std::uint64_t max_weight,
                                          std::optional<std::size_t> cap = std::nullopt) {
  validate_atsp(inst, max_weight);
  const std::uint64_t tour_max = max_weight * inst.n;
  if (tour_max > (std::uint64_t{1} << 20)) throw LimitError("ATSP: degree cap M*n is too large");
  const std::size_t c = cap.value_or(static_cast<std::size_t>(tour_max));
  if (c < tour_max) throw InternalError("ATSP: degree cap below M*n would clip feasible tours");
  return hc_ie(embed_atsp(inst, c));
}

/// Weight of the shortest Hamiltonian cycle, or nullopt when none exists.
inline std::optional<std::uint64_t> atsp_shortest(const AtspInstance& inst, std::uint64_t max_weight) {
  const TruncatedPoly tours = atsp_tour_polynomial(inst, max_weight);
  if (tours.is_zero()) return std::nullopt;
  return tours.lowest_degree();
}

}  // namespace hcperm
