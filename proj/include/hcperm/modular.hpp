#pragma once

// Prime selection, reduction of integer instances modulo p, and signed CRT
// reconstruction into the balanced range.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hcperm/core.hpp"

namespace hcperm {

/// Deterministic trial division; the primes used here are poly(n) sized.
constexpr bool is_prime(std::uint64_t x) {
  if (x < 2) return false;
  if (x < 4) return true;
  if (x % 2 == 0 || x % 3 == 0) return false;
  for (std::uint64_t d = 5; d * d <= x; d += 6) {
    if (x % d == 0 || x % (d + 2) == 0) return false;
  }
  return true;
}

/// Smallest prime strictly greater than x.
constexpr std::uint64_t next_prime_above(std::uint64_t x) {
  std::uint64_t c = x + 1;
  while (!is_prime(c)) ++c;
  return c;
}

/// |per| and |hc| of an n-vertex instance with max absolute weight M are at
/// most M^n * n!.
inline BigInt value_bound(const BigInt& max_abs, std::size_t n) {
  BigInt fact(1);
  for (std::size_t i = 2; i <= n; ++i) fact *= static_cast<unsigned long>(i);
  BigInt power;
  mpz_pow_ui(power.get_mpz_t(), max_abs.get_mpz_t(), static_cast<unsigned long>(n));
  return power * fact;
}

/// Ordered distinct primes with precomputed CRT reconstruction data:
/// r_i = (prod_{j != i} p_j) * ((prod_{j != i} p_j)^{-1} mod p_i).
class CrtPlan {
 public:
  CrtPlan() = default;

  explicit CrtPlan(std::vector<std::uint64_t> primes) : primes_(std::move(primes)), modulus_(1) {
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      if (!is_prime(primes_[i])) throw InternalError("CrtPlan: " + std::to_string(primes_[i]) + " is not prime");
      for (std::size_t j = 0; j < i; ++j) {
        if (primes_[j] == primes_[i]) throw InternalError("CrtPlan: duplicate prime");
      }
      modulus_ *= static_cast<unsigned long>(primes_[i]);
    }
    coefficients_.reserve(primes_.size());
    for (auto p : primes_) {
      const BigInt others = modulus_ / static_cast<unsigned long>(p);
      const std::uint64_t inv = inv_mod(reduce_mod(others, p), p);
      coefficients_.push_back(others * static_cast<unsigned long>(inv));
    }
  }

  std::span<const std::uint64_t> primes() const noexcept { return primes_; }
  std::span<const BigInt> coefficients() const noexcept { return coefficients_; }
  const BigInt& modulus() const noexcept { return modulus_; }
  std::uint64_t max_prime() const { return primes_.empty() ? 0 : primes_.back(); }

  /// Lower end of the balanced range, -floor(P/2).
  BigInt balanced_min() const { return -(modulus_ / 2); }
  /// Exclusive upper end, ceil(P/2).
  BigInt balanced_end() const { return (modulus_ + 1) / 2; }

 private:
  std::vector<std::uint64_t> primes_;
  std::vector<BigInt> coefficients_;
  BigInt modulus_;
};

/// Smallest primes above n^2 whose product exceeds 2 * M^n * n! + 1.
inline CrtPlan select_primes(const BigInt& max_abs, std::size_t n) {
  if (n == 0) throw InputError("select_primes: n must be positive");
  if (max_abs < 0) throw InputError("select_primes: M must be nonnegative");
  const BigInt needed = 2 * value_bound(max_abs, n) + 1;
  const std::uint64_t floor = static_cast<std::uint64_t>(n) * n;
  std::vector<std::uint64_t> primes;
  BigInt product(1);
  std::uint64_t p = floor;
  while (product <= needed) {
    p = next_prime_above(p);
    if (p >= kMaxModulus) throw LimitError("select_primes: prime supply exceeds 32-bit residues");
    primes.push_back(p);
    product *= static_cast<unsigned long>(p);
  }
  // Every reduction needs at least (n-1)n+1 distinct interpolation nodes.
  if (primes.front() < static_cast<std::uint64_t>(n - 1) * n + 1) {
    throw InternalError("select_primes: prime below the interpolation node count");
  }
  return CrtPlan(std::move(primes));
}

inline Instance<Zp> mod_reduce_instance(const Instance<BigInt>& inst, std::uint64_t p) {
  return inst.map([p](const BigInt& x) { return Zp::from_big(x, p); });
}

/// The unique x in [-floor(P/2), ceil(P/2)) with x = a_i (mod p_i).
inline BigInt crt_reconstruct(std::span<const std::uint64_t> residues, const CrtPlan& plan) {
  const auto primes = plan.primes();
  if (residues.size() != primes.size()) {
    throw InternalError("crt_reconstruct: " + std::to_string(residues.size()) + " residues for " +
                        std::to_string(primes.size()) + " primes");
  }
  BigInt sum(0);
  for (std::size_t i = 0; i < residues.size(); ++i) {
    if (residues[i] >= primes[i]) throw InternalError("crt_reconstruct: residue not normalized");
    sum += plan.coefficients()[i] * static_cast<unsigned long>(residues[i]);
  }
  sum %= plan.modulus();
  if (2 * sum >= plan.modulus()) sum -= plan.modulus();
  return sum;
}

}  // namespace hcperm
