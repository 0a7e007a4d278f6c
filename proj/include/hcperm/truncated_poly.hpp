#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "hcperm/ring.hpp"

namespace hcperm {

/// Integer polynomial in z with all terms above degree cap() discarded.
/// Truncation is the quotient by the ideal (z^{cap+1}), so the ring axioms
/// survive.
class TruncatedPoly {
 public:
  TruncatedPoly() = default;
  explicit TruncatedPoly(std::size_t cap) : coeffs_(cap + 1, BigInt(0)) {}

  static TruncatedPoly monomial(std::size_t degree, std::size_t cap, const BigInt& c = BigInt(1)) {
    TruncatedPoly t(cap);
    if (degree <= cap) t.coeffs_[degree] = c;
    return t;
  }

  std::size_t cap() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  const BigInt& operator[](std::size_t d) const { return coeffs_[d]; }
  const std::vector<BigInt>& coefficients() const noexcept { return coeffs_; }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const BigInt& c) { return sgn(c) == 0; });
  }

  /// Lowest degree with a nonzero coefficient, or cap()+1 for zero.
  std::size_t lowest_degree() const {
    std::size_t d = 0;
    while (d < coeffs_.size() && sgn(coeffs_[d]) == 0) ++d;
    return d;
  }

  friend TruncatedPoly operator+(const TruncatedPoly& a, const TruncatedPoly& b) {
    check_caps(a, b);
    TruncatedPoly out = a;
    for (std::size_t d = 0; d < out.coeffs_.size(); ++d) {
      if (sgn(b.coeffs_[d]) != 0) out.coeffs_[d] += b.coeffs_[d];
    }
    return out;
  }

  friend TruncatedPoly operator-(const TruncatedPoly& a, const TruncatedPoly& b) {
    check_caps(a, b);
    TruncatedPoly out = a;
    for (std::size_t d = 0; d < out.coeffs_.size(); ++d) {
      if (sgn(b.coeffs_[d]) != 0) out.coeffs_[d] -= b.coeffs_[d];
    }
    return out;
  }

  TruncatedPoly& operator+=(const TruncatedPoly& b) {
    check_caps(*this, b);
    for (std::size_t d = 0; d < coeffs_.size(); ++d) {
      if (sgn(b.coeffs_[d]) != 0) coeffs_[d] += b.coeffs_[d];
    }
    return *this;
  }

  // The sparser factor drives the outer loop, so multiplying by a monomial
  // costs O(cap).
  friend void add_product(TruncatedPoly& acc, const TruncatedPoly& a, const TruncatedPoly& b) {
    check_caps(a, b);
    check_caps(acc, a);
    const std::size_t cap = a.cap();
    const bool swap = b.nonzero_count() < a.nonzero_count();
    const TruncatedPoly& outer = swap ? b : a;
    const TruncatedPoly& inner = swap ? a : b;
    for (std::size_t i = 0; i <= cap; ++i) {
      if (sgn(outer.coeffs_[i]) == 0) continue;
      for (std::size_t j = 0; i + j <= cap; ++j) {
        if (sgn(inner.coeffs_[j]) == 0) continue;
        mpz_addmul(acc.coeffs_[i + j].get_mpz_t(), outer.coeffs_[i].get_mpz_t(), inner.coeffs_[j].get_mpz_t());
      }
    }
  }

  friend TruncatedPoly operator*(const TruncatedPoly& a, const TruncatedPoly& b) {
    TruncatedPoly out(a.cap());
    add_product(out, a, b);
    return out;
  }

  friend bool operator==(const TruncatedPoly& a, const TruncatedPoly& b) { return a.coeffs_ == b.coeffs_; }

  std::string to_string() const {
    std::string s;
    for (std::size_t d = 0; d < coeffs_.size(); ++d) {
      if (sgn(coeffs_[d]) == 0) continue;
      if (!s.empty()) s += " + ";
      s += to_decimal(coeffs_[d]) + "*z^" + std::to_string(d);
    }
    return s.empty() ? "0" : s;
  }

 private:
  std::size_t nonzero_count() const {
    return static_cast<std::size_t>(
        std::count_if(coeffs_.begin(), coeffs_.end(), [](const BigInt& c) { return sgn(c) != 0; }));
  }

  static void check_caps(const TruncatedPoly& a, const TruncatedPoly& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) throw InternalError("TruncatedPoly: degree caps differ");
  }

  std::vector<BigInt> coeffs_;
};

inline TruncatedPoly zero_like(const TruncatedPoly& x) { return TruncatedPoly(x.cap()); }
inline TruncatedPoly one_like(const TruncatedPoly& x) { return TruncatedPoly::monomial(0, x.cap()); }

template <>
struct ring_traits<TruncatedPoly> {
  static constexpr RingTag tag = RingTag::truncated_polynomial;
};

}  // namespace hcperm
