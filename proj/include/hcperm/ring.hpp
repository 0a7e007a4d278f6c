#pragma once

// Scalar rings shared by every counting routine.
//
// All algorithms in this library are generic over a commutative ring T.  The
// only requirements beyond +, -, * are the two free functions zero_like(x)
// and one_like(x), which build the additive and multiplicative identities in
// the same ring as x.  Context-carrying rings (residues modulo p, truncated
// polynomials with a degree cap) need a sample element to know their context.

#include <concepts>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace hcperm {

using BigInt = mpz_class;

inline BigInt zero_like(const BigInt&) { return BigInt(0); }
inline BigInt one_like(const BigInt&) { return BigInt(1); }

inline std::string to_decimal(const BigInt& x) { return x.get_str(10); }

inline void add_product(BigInt& acc, const BigInt& a, const BigInt& b) {
  mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

template <class T>
concept CommutativeRing = std::copyable<T> && requires(T& acc, const T& a, const T& b) {
  { a + b } -> std::convertible_to<T>;
  acc += b;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { zero_like(a) } -> std::convertible_to<T>;
  { one_like(a) } -> std::convertible_to<T>;
};

/// acc += a * b, through an in-place add_product overload where a ring has one.
template <CommutativeRing T>
void multiply_add(T& acc, const T& a, const T& b) {
  if constexpr (requires { add_product(acc, a, b); }) {
    add_product(acc, a, b);
  } else {
    acc += a * b;
  }
}

enum class RingTag { integer, modular, truncated_polynomial };

template <class T>
struct ring_traits;

template <>
struct ring_traits<BigInt> {
  static constexpr RingTag tag = RingTag::integer;
};

/// Malformed or out-of-contract user input.  Carries the offending line when
/// it comes from a file parser (0 otherwise).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A request exceeding a configured size guard (oracle cap, DP memory cap).
class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A correctness invariant fired.  Never expected in a healthy build.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hcperm
