#pragma once

// Instances, file ingestion and canonical keys.
//
// An instance is a complete weighted digraph on n labeled vertices stored as a
// dense n x n matrix: entry (i, j) is the weight of the arc i -> j.  Vertex
// labels are 1..n in file formats and messages; the in-memory indices are
// 0..n-1 with the same order.  Diagonal entries are self-loop weights: the
// permanent uses them, Hamiltonian-cycle counting ignores them for n >= 2.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hcperm/ring.hpp"
#include "hcperm/zp.hpp"

namespace hcperm {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t n, const T& fill) : n_(n), data_(n * n, fill) {}
  Matrix(std::size_t n, std::vector<T> row_major) : n_(n), data_(std::move(row_major)) {
    if (data_.size() != n * n) throw InternalError("Matrix: data size is not n*n");
  }

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::span<const T> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  std::span<const T> values() const noexcept { return data_; }

  template <class F>
  auto map(F&& f) const -> Matrix<std::invoke_result_t<F, const T&>> {
    std::vector<std::invoke_result_t<F, const T&>> out;
    out.reserve(data_.size());
    for (const T& x : data_) out.push_back(f(x));
    return {n_, std::move(out)};
  }

  friend bool operator==(const Matrix& a, const Matrix& b) { return a.n_ == b.n_ && a.data_ == b.data_; }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

/// A complete weighted digraph; the ring is carried by the scalar type.
template <class T>
using Instance = Matrix<T>;

template <class T>
constexpr RingTag ring_tag_of(const Instance<T>&) {
  return ring_traits<T>::tag;
}

inline Instance<BigInt> make_instance(std::size_t n, std::initializer_list<long> row_major) {
  std::vector<BigInt> v;
  for (long x : row_major) v.emplace_back(x);
  return {n, std::move(v)};
}

// ---------------------------------------------------------------------------
// Tokenized matrix text (shared by the integer and ATSP readers)

namespace detail {

struct TokenLine {
  std::size_t line_no;
  std::vector<std::string> tokens;
};

inline std::vector<TokenLine> tokenize(std::string_view text) {
  std::vector<TokenLine> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    TokenLine tl{line_no, {}};
    std::istringstream in{std::string(line)};
    for (std::string tok; in >> tok;) tl.tokens.push_back(tok);
    lines.push_back(std::move(tl));
    if (end == text.size()) break;
  }
  return lines;
}

inline bool is_decimal(std::string_view tok, bool allow_sign) {
  std::size_t i = 0;
  if (allow_sign && !tok.empty() && (tok[0] == '-' || tok[0] == '+')) i = 1;
  if (i == tok.size()) return false;
  return std::all_of(tok.begin() + static_cast<std::ptrdiff_t>(i), tok.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

inline BigInt parse_big(std::string_view tok, std::size_t line_no, bool allow_sign = true) {
  if (!is_decimal(tok, allow_sign)) throw InputError("not an integer: '" + std::string(tok) + "'", line_no);
  std::string s(tok);
  if (s[0] == '+') s.erase(0, 1);
  return BigInt(s, 10);
}

inline std::size_t parse_count(std::string_view tok, std::size_t line_no, const char* what) {
  if (!is_decimal(tok, false) || tok.size() > 9) {
    throw InputError(std::string("malformed ") + what + ": '" + std::string(tok) + "'", line_no);
  }
  return static_cast<std::size_t>(std::stoul(std::string(tok)));
}

/// Header line with n, followed by exactly n rows of n tokens.
inline std::pair<std::size_t, std::vector<TokenLine>> split_square(std::string_view text) {
  auto lines = tokenize(text);
  if (lines.empty()) throw InputError("empty input: expected the vertex count n");
  const TokenLine& head = lines.front();
  if (head.tokens.size() != 1) throw InputError("header must hold exactly one integer n", head.line_no);
  const std::size_t n = parse_count(head.tokens[0], head.line_no, "count");
  if (n == 0) throw InputError("n must be positive", head.line_no);
  std::vector<TokenLine> rows(lines.begin() + 1, lines.end());
  for (std::size_t i = 0; i < rows.size() && i < n; ++i) {
    if (rows[i].tokens.size() != n) {
      throw InputError("row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].tokens.size()) + " of " +
                           std::to_string(n) + " entries",
                       rows[i].line_no);
    }
  }
  if (rows.size() < n) {
    const std::size_t at = lines.back().line_no + 1;
    throw InputError("expected " + std::to_string(n) + " rows, found " + std::to_string(rows.size()), at);
  }
  if (rows.size() > n) throw InputError("unexpected data after the last row", rows[n].line_no);
  return {n, std::move(rows)};
}

}  // namespace detail

/// Reads the Matrix format: n on the first line, then n rows of n signed
/// decimal integers; '#' lines are comments.
inline Instance<BigInt> ingest_matrix(std::string_view text) {
  auto [n, rows] = detail::split_square(text);
  std::vector<BigInt> values;
  values.reserve(n * n);
  for (const auto& row : rows) {
    for (const auto& tok : row.tokens) values.push_back(detail::parse_big(tok, row.line_no));
  }
  return {n, std::move(values)};
}

/// Reads the Multigraph format: "n m" then m arcs "u v [mult]".  Parallel
/// arcs aggregate into one integer weight.
inline Instance<BigInt> ingest_multigraph(std::string_view text) {
  const auto lines = detail::tokenize(text);
  if (lines.empty()) throw InputError("empty input: expected \"n m\"");
  const auto& head = lines.front();
  if (head.tokens.size() != 2) throw InputError("header must be \"n m\"", head.line_no);
  const std::size_t n = detail::parse_count(head.tokens[0], head.line_no, "vertex count");
  const std::size_t m = detail::parse_count(head.tokens[1], head.line_no, "arc count");
  if (n == 0) throw InputError("n must be positive", head.line_no);
  if (lines.size() - 1 != m) {
    throw InputError("expected " + std::to_string(m) + " arc lines, found " + std::to_string(lines.size() - 1),
                     lines.size() - 1 < m ? lines.back().line_no + 1 : lines[m + 1].line_no);
  }
  Instance<BigInt> inst(n, BigInt(0));
  for (std::size_t a = 1; a <= m; ++a) {
    const auto& arc = lines[a];
    if (arc.tokens.size() != 2 && arc.tokens.size() != 3) {
      throw InputError("arc line must be \"u v\" or \"u v mult\"", arc.line_no);
    }
    std::size_t ends[2];
    for (int e = 0; e < 2; ++e) {
      const auto& tok = arc.tokens[static_cast<std::size_t>(e)];
      if (!detail::is_decimal(tok, false) || tok.size() > 9) {
        throw InputError("malformed vertex '" + tok + "'", arc.line_no);
      }
      ends[e] = std::stoul(tok);
      if (ends[e] < 1 || ends[e] > n) {
        throw InputError("vertex " + tok + " out of range 1.." + std::to_string(n), arc.line_no);
      }
    }
    BigInt mult(1);
    if (arc.tokens.size() == 3) {
      const auto& tok = arc.tokens[2];
      if (!tok.empty() && tok[0] == '-') throw InputError("negative multiplicity '" + tok + "'", arc.line_no);
      mult = detail::parse_big(tok, arc.line_no);
    }
    inst(ends[0] - 1, ends[1] - 1) += mult;
  }
  return inst;
}

inline std::string serialize_matrix(const Instance<BigInt>& inst) {
  std::string out = std::to_string(inst.size()) + "\n";
  for (std::size_t i = 0; i < inst.size(); ++i) {
    for (std::size_t j = 0; j < inst.size(); ++j) {
      if (j != 0) out += ' ';
      out += to_decimal(inst(i, j));
    }
    out += '\n';
  }
  return out;
}

/// Largest absolute entry; 0 for the all-zero instance.
inline BigInt max_abs_weight(const Instance<BigInt>& inst) {
  BigInt m(0);
  for (const BigInt& x : inst.values()) {
    const BigInt a = abs(x);
    if (a > m) m = a;
  }
  return m;
}

// ---------------------------------------------------------------------------
// ATSP instances: arc weights with explicit absence.

struct AtspInstance {
  std::size_t n = 0;
  std::vector<std::optional<std::uint64_t>> weights;  // row-major; nullopt = no arc

  const std::optional<std::uint64_t>& operator()(std::size_t i, std::size_t j) const { return weights[i * n + j]; }
  std::optional<std::uint64_t>& operator()(std::size_t i, std::size_t j) { return weights[i * n + j]; }
};

/// Matrix format where "-" marks an absent arc; other entries are
/// nonnegative integers.
inline AtspInstance ingest_atsp(std::string_view text) {
  auto [n, rows] = detail::split_square(text);
  AtspInstance inst{n, {}};
  inst.weights.reserve(n * n);
  for (const auto& row : rows) {
    for (const auto& tok : row.tokens) {
      if (tok == "-") {
        inst.weights.emplace_back(std::nullopt);
        continue;
      }
      if (!detail::is_decimal(tok, false) || tok.size() > 18) {
        throw InputError("arc weight must be a nonnegative integer or '-': '" + tok + "'", row.line_no);
      }
      inst.weights.emplace_back(std::stoull(tok));
    }
  }
  return inst;
}

inline std::string serialize_atsp(const AtspInstance& inst) {
  std::string out = std::to_string(inst.n) + "\n";
  for (std::size_t i = 0; i < inst.n; ++i) {
    for (std::size_t j = 0; j < inst.n; ++j) {
      if (j != 0) out += ' ';
      const auto& w = inst(i, j);
      out += w ? std::to_string(*w) : std::string("-");
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical keys for k x k residue matrices.

/// Header (k, p) plus the k^2 residues in row-major order.  Keys of
/// different primes or sizes never compare equal.
struct CanonicalKey {
  std::uint32_t k = 0;
  std::uint64_t p = 0;
  std::vector<std::uint32_t> body;

  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;

  Matrix<Zp> to_matrix() const {
    std::vector<Zp> v;
    v.reserve(body.size());
    for (auto x : body) v.emplace_back(x, p);
    return {k, std::move(v)};
  }

  std::string to_string() const {
    std::string s = std::to_string(k) + ":" + std::to_string(p) + ":";
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i != 0) s += ',';
      s += std::to_string(body[i]);
    }
    return s;
  }
};

/// Writes the key of m into `key`, reusing its storage.
inline void assign_key(CanonicalKey& key, const Matrix<Zp>& m, std::uint64_t p) {
  key.k = static_cast<std::uint32_t>(m.size());
  key.p = p;
  key.body.resize(m.size() * m.size());
  const auto vals = m.values();
  for (std::size_t i = 0; i < vals.size(); ++i) key.body[i] = static_cast<std::uint32_t>(vals[i].v);
}

inline CanonicalKey canonical_key(const Matrix<Zp>& m, std::uint64_t p) {
  CanonicalKey key;
  assign_key(key, m, p);
  return key;
}

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ (key.p * 31 + key.k);
    for (std::uint32_t x : key.body) {
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h * 0xff51afd7ed558ccdULL);
  }
};

}  // namespace hcperm
