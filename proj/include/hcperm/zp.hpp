#pragma once

#include <cstdint>
#include <limits>

#include "hcperm/ring.hpp"

namespace hcperm {

// Raw residue arithmetic.  Moduli are below 2^32 so a product of two
// residues always fits in 64 bits.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 32;

constexpr std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  const std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}

constexpr std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

constexpr std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return (a * b) % p;
}

constexpr std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (e != 0) {
    if (e & 1U) result = mul_mod(result, base, p);
    base = mul_mod(base, base, p);
    e >>= 1U;
  }
  return result;
}

/// Inverse of a modulo p via extended Euclid; a must be a unit.
inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a % p);
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = t - q * new_t;
    std::swap(t, new_t);
    r = r - q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw InternalError("inv_mod: element is not invertible");
  return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(p) : t);
}

/// Normalized residue of a signed big integer, in [0, p).
inline std::uint64_t reduce_mod(const BigInt& x, std::uint64_t p) {
  const BigInt r = x % static_cast<unsigned long>(p);  // sign follows x
  long v = r.get_si();
  if (v < 0) v += static_cast<long>(p);
  return static_cast<std::uint64_t>(v);
}

/// Element of Z_p carrying its modulus.  The value is always normalized.
struct Zp {
  std::uint64_t v = 0;
  std::uint64_t p = 0;

  Zp() = default;
  Zp(std::uint64_t value, std::uint64_t modulus) : v(value % modulus), p(modulus) {}

  static Zp from_signed(std::int64_t x, std::uint64_t modulus) {
    const std::int64_t m = static_cast<std::int64_t>(modulus);
    std::int64_t r = x % m;
    if (r < 0) r += m;
    return Zp(static_cast<std::uint64_t>(r), modulus);
  }

  static Zp from_big(const BigInt& x, std::uint64_t modulus) { return Zp(reduce_mod(x, modulus), modulus); }

  friend Zp operator+(Zp a, Zp b) { return raw(add_mod(a.v, b.v, a.p), a.p); }
  friend Zp operator-(Zp a, Zp b) { return raw(sub_mod(a.v, b.v, a.p), a.p); }
  friend Zp operator*(Zp a, Zp b) { return raw(mul_mod(a.v, b.v, a.p), a.p); }
  Zp operator-() const { return raw(v == 0 ? 0 : p - v, p); }
  Zp& operator+=(Zp b) { return *this = *this + b; }
  Zp& operator-=(Zp b) { return *this = *this - b; }
  Zp& operator*=(Zp b) { return *this = *this * b; }

  Zp inverse() const { return raw(inv_mod(v, p), p); }
  Zp pow(std::uint64_t e) const { return raw(pow_mod(v, e, p), p); }

  friend bool operator==(const Zp&, const Zp&) = default;

 private:
  static Zp raw(std::uint64_t value, std::uint64_t modulus) {
    Zp z;
    z.v = value;
    z.p = modulus;
    return z;
  }
};

inline Zp zero_like(const Zp& x) { return Zp(0, x.p); }
inline Zp one_like(const Zp& x) { return Zp(1, x.p); }

template <>
struct ring_traits<Zp> {
  static constexpr RingTag tag = RingTag::modular;
};

}  // namespace hcperm
