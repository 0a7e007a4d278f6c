#pragma once

// Kernel self-reduction of permanent and Hamiltonian-cycle instances over a
// prime field Z_p.
//
// The kernel K is the k lowest-labeled vertices.  For every subset X of the
// remaining vertices, a k x k instance f_X is built whose arc u -> v either
// stays in K (weight f(uv)) or detours through X; a rank indeterminate r
// counts the detour vertices.  Inclusion-exclusion over X cancels every
// combination of walks that revisits a vertex, so the coefficient of
// r^{n-k} in
//
//   sum_X (-1)^{|V-K-X|} hc(G_k, f_X)                       (Hamiltonian cycles)
//   sum_X (-1)^{|V-K-X|} per(G_k, f_X) prod_{s in X} C_X(s)  (permanent)
//
// is the answer on the full instance.  C_X(s) collects cycles in X whose
// smallest vertex is s.  The coefficient is extracted by evaluating at the
// nodes 0, 1, ..., m-1 and weighting with Lagrange basis coefficients, which
// turns each (X, node) pair into one small instance over Z_p and one scalar.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hcperm/core.hpp"

namespace hcperm {

enum class CountingProblem { permanent, hamiltonian_cycles };

inline const char* to_string(CountingProblem problem) {
  return problem == CountingProblem::permanent ? "per" : "hc";
}

/// Kernel = vertices 0..k-1, outside = k..n-1; requires 1 <= k < n.
struct KernelSplit {
  std::size_t n;
  std::size_t k;

  KernelSplit(std::size_t n_, std::size_t k_) : n(n_), k(k_) {
    if (k < 1 || k >= n) {
      throw InputError("kernel size k=" + std::to_string(k) + " must satisfy 1 <= k < n=" + std::to_string(n));
    }
    if (n - k > 62) throw LimitError("kernel reduction: too many vertices outside the kernel");
  }

  std::size_t outside() const noexcept { return n - k; }
  std::uint64_t subset_count() const noexcept { return std::uint64_t{1} << (n - k); }

  /// Vertices of the outside subset encoded by `mask` (bit i = vertex k+i).
  std::vector<std::size_t> subset(std::uint64_t mask) const {
    std::vector<std::size_t> xs;
    for (std::size_t i = 0; i < outside(); ++i) {
      if ((mask >> i) & 1U) xs.push_back(k + i);
    }
    return xs;
  }
};

/// Number of interpolation nodes: (n-k)n+1 for the permanent, (n-k)k+1 for
/// Hamiltonian cycles (one more than the r-degree of the summand).
constexpr std::uint64_t interpolation_node_count(CountingProblem problem, std::size_t n, std::size_t k) {
  return problem == CountingProblem::permanent ? static_cast<std::uint64_t>(n - k) * n + 1
                                               : static_cast<std::uint64_t>(n - k) * k + 1;
}

constexpr std::uint64_t reduction_term_count(CountingProblem problem, std::size_t n, std::size_t k) {
  return interpolation_node_count(problem, n, k) * (std::uint64_t{1} << (n - k));
}

// ---------------------------------------------------------------------------
// Ranked walks evaluated at a field point.

/// W[i][a][b] = ranked walks with i arcs from vertices[a] to vertices[b]
/// inside X, evaluated at r.
class RankedWalkTable {
 public:
  RankedWalkTable(std::vector<std::size_t> vertices, std::vector<Matrix<Zp>> layers)
      : vertices_(std::move(vertices)), layers_(std::move(layers)) {}

  std::span<const std::size_t> vertices() const noexcept { return vertices_; }
  std::size_t max_length() const noexcept { return layers_.size() - 1; }

  /// By position in vertices().
  const Zp& at(std::size_t length, std::size_t a, std::size_t b) const { return layers_[length](a, b); }

 private:
  std::vector<std::size_t> vertices_;
  std::vector<Matrix<Zp>> layers_;
};

/// W[0] is the identity; W[i](u,v) = sum_{w in X} W[i-1](u,w) f(w,v) r.
inline RankedWalkTable ranked_walks(const Instance<Zp>& f, std::span<const std::size_t> xs, Zp r,
                                    std::size_t max_length) {
  const std::size_t s = xs.size();
  const Zp zero = zero_like(r);
  std::vector<Matrix<Zp>> layers;
  layers.reserve(max_length + 1);
  Matrix<Zp> id(s, zero);
  for (std::size_t a = 0; a < s; ++a) id(a, a) = one_like(r);
  layers.push_back(std::move(id));
  for (std::size_t i = 1; i <= max_length; ++i) {
    const Matrix<Zp>& prev = layers.back();
    Matrix<Zp> cur(s, zero);
    for (std::size_t a = 0; a < s; ++a) {
      for (std::size_t b = 0; b < s; ++b) {
        Zp acc = zero;
        for (std::size_t c = 0; c < s; ++c) acc += prev(a, c) * f(xs[c], xs[b]);
        cur(a, b) = acc * r;
      }
    }
    layers.push_back(std::move(cur));
  }
  return {std::vector<std::size_t>(xs.begin(), xs.end()), std::move(layers)};
}

/// Kernel instance f_X at r: f(uv) + sum_{w,z in X} f(uw) (sum_{i<n-k} W_i(w,z)) f(zv) r.
inline Matrix<Zp> fx_eval(const Instance<Zp>& f, const KernelSplit& split, std::span<const std::size_t> xs, Zp r) {
  const std::size_t k = split.k;
  const std::size_t s = xs.size();
  Matrix<Zp> out(k, zero_like(r));
  for (std::size_t u = 0; u < k; ++u) {
    for (std::size_t v = 0; v < k; ++v) out(u, v) = f(u, v);
  }
  if (s == 0) return out;
  const auto walks = ranked_walks(f, xs, r, split.outside() - 1);
  Matrix<Zp> through(s, zero_like(r));  // sum over walk lengths
  for (std::size_t i = 0; i <= walks.max_length(); ++i) {
    for (std::size_t a = 0; a < s; ++a) {
      for (std::size_t b = 0; b < s; ++b) through(a, b) += walks.at(i, a, b);
    }
  }
  for (std::size_t u = 0; u < k; ++u) {
    for (std::size_t v = 0; v < k; ++v) {
      Zp detour = zero_like(r);
      for (std::size_t a = 0; a < s; ++a) {
        for (std::size_t b = 0; b < s; ++b) detour += f(u, xs[a]) * through(a, b) * f(xs[b], v);
      }
      out(u, v) += detour * r;
    }
  }
  return out;
}

/// prod_{s in X} C_X(s) at r, with C_X(s) = 1 + sum_{i=1}^{n-k} W_{X>=s, i}(s, s).
inline Zp cx_eval(const Instance<Zp>& f, const KernelSplit& split, std::span<const std::size_t> xs, Zp r) {
  Zp product = one_like(r);
  for (std::size_t a = 0; a < xs.size(); ++a) {
    const auto walks = ranked_walks(f, xs.subspan(a), r, split.outside());
    Zp c = one_like(r);
    for (std::size_t i = 1; i <= walks.max_length(); ++i) c += walks.at(i, 0, 0);
    product *= c;
  }
  return product;
}

// ---------------------------------------------------------------------------
// Coefficient extraction.

/// Weights w_j with sum_j w_j q(points_j) = [r^target] q for every q of degree
/// below points.size(): the r^target coefficient of each Lagrange basis
/// polynomial.
inline std::vector<Zp> extraction_weights(std::span<const Zp> points, std::size_t target) {
  const std::size_t m = points.size();
  if (m == 0) throw InternalError("extraction_weights: no points");
  if (target >= m) throw InternalError("extraction_weights: target exponent exceeds the degree");
  const std::uint64_t p = points[0].p;
  const Zp zero(0, p);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) throw InternalError("extraction_weights: duplicate interpolation point");
    }
  }
  // N(r) = prod_i (r - x_i), coefficients low to high.
  std::vector<Zp> master(m + 1, zero);
  master[0] = one_like(zero);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t d = i + 1; d > 0; --d) master[d] = master[d - 1] - points[i] * master[d];
    master[0] = -points[i] * master[0];
  }
  std::vector<Zp> weights;
  weights.reserve(m);
  std::vector<Zp> quotient(m, zero);
  for (std::size_t j = 0; j < m; ++j) {
    // N(r) / (r - x_j) by synthetic division from the top.
    quotient[m - 1] = master[m];
    for (std::size_t d = m - 1; d > 0; --d) quotient[d - 1] = master[d] + points[j] * quotient[d];
    Zp denom = one_like(zero);
    for (std::size_t i = 0; i < m; ++i) {
      if (i != j) denom *= points[j] - points[i];
    }
    weights.push_back(quotient[target] * denom.inverse());
  }
  return weights;
}

inline std::vector<Zp> interpolation_nodes(std::uint64_t m, std::uint64_t p) {
  if (m > p) throw InputError("field Z_" + std::to_string(p) + " has fewer than " + std::to_string(m) + " elements");
  std::vector<Zp> nodes;
  nodes.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) nodes.emplace_back(i, p);
  return nodes;
}

// ---------------------------------------------------------------------------
// Term emission.

/// One small instance and its scalar.  `subset` and `node` identify the
/// (X, r_j) pair that produced it.
struct ReducedTerm {
  Matrix<Zp> small;
  Zp coeff;
  std::uint64_t subset = 0;
  std::size_t node = 0;
};

/// Emits the (small instance, coefficient) stream of the kernel reduction.
///
/// Internally the walk sums of each X are collected once per walk length and
/// then evaluated at every node; the result is identical to calling fx_eval
/// and cx_eval at each node.
class KernelReduction {
 public:
  KernelReduction(const Instance<Zp>& f, std::size_t k, CountingProblem problem)
      : split_(f.size(), k), problem_(problem) {
    p_ = f(0, 0).p;
    if (p_ >= kMaxModulus) throw InputError("kernel reduction: modulus must be below 2^32");
    const std::uint64_t m = interpolation_node_count(problem, split_.n, split_.k);
    if (m > p_) {
      throw InputError("field too small: Z_" + std::to_string(p_) + " needs at least " + std::to_string(m) +
                       " elements for n=" + std::to_string(split_.n) + ", k=" + std::to_string(split_.k));
    }
    nodes_ = interpolation_nodes(m, p_);
    weights_ = extraction_weights(nodes_, split_.outside());
    const std::size_t n = split_.n;
    raw_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) raw_[i * n + j] = f(i, j).v;
    }
    // Unreduced dot products of up to n terms must fit in 64 bits.
    lazy_ = (p_ - 1) * (p_ - 1) <= UINT64_MAX / (n + 1);
  }

  const KernelSplit& split() const noexcept { return split_; }
  CountingProblem problem() const noexcept { return problem_; }
  std::uint64_t modulus() const noexcept { return p_; }
  std::span<const Zp> nodes() const noexcept { return nodes_; }
  std::span<const Zp> weights() const noexcept { return weights_; }
  std::uint64_t subset_count() const noexcept { return split_.subset_count(); }
  std::uint64_t term_count() const noexcept { return nodes_.size() * subset_count(); }

  /// sink(const ReducedTerm&) for every term of subsets in [first, last),
  /// subsets in increasing mask order, nodes in increasing order.
  template <class Sink>
  void for_each_term(std::uint64_t first, std::uint64_t last, Sink&& sink) const {
    Workspace ws(*this);
    for (std::uint64_t mask = first; mask < last; ++mask) emit_subset(mask, ws, sink);
  }

  template <class Sink>
  void for_each_term(Sink&& sink) const {
    for_each_term(0, subset_count(), std::forward<Sink>(sink));
  }

 private:
  struct Workspace {
    explicit Workspace(const KernelReduction& r) {
      const std::size_t k = r.split_.k, q = r.split_.outside();
      detour.assign(k * k * (q + 1), 0);
      closed.assign(q * (q + 1), 0);
      powers.assign(q + 1, 0);
      term.small = Matrix<Zp>(k, Zp(0, r.p_));
      term.coeff = Zp(0, r.p_);
    }
    std::vector<std::size_t> xs;
    std::vector<std::uint64_t> a;           // f restricted to X x X
    std::vector<std::uint64_t> vec, next;
    std::vector<std::uint64_t> columns;     // [v][i] = f(x_i, v)
    std::vector<std::uint64_t> detour;      // [u][v][l]: detours u -> X -> v through l vertices
    std::vector<std::uint64_t> closed;      // [s][i]: anchored closed walks with i arcs
    std::vector<std::uint64_t> powers;
    ReducedTerm term;
  };

  std::uint64_t reduce_dot(std::span<const std::uint64_t> x, const std::uint64_t* column, std::size_t stride) const {
    std::uint64_t acc = 0;
    if (lazy_) {
      for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * column[i * stride];
      return acc % p_;
    }
    for (std::size_t i = 0; i < x.size(); ++i) acc = add_mod(acc, mul_mod(x[i], column[i * stride], p_), p_);
    return acc;
  }

  // out = vec * A over the trailing `size` x `size` block starting at `offset`.
  void step_walks(Workspace& ws, std::size_t s, std::size_t offset) const {
    const std::size_t size = s - offset;
    for (std::size_t c = 0; c < size; ++c) {
      ws.next[c] = reduce_dot({ws.vec.data(), size}, ws.a.data() + offset * s + offset + c, s);
    }
    std::copy_n(ws.next.begin(), size, ws.vec.begin());
  }

  template <class Sink>
  void emit_subset(std::uint64_t mask, Workspace& ws, Sink& sink) const {
    const std::size_t n = split_.n, k = split_.k, q = split_.outside();
    ws.xs.clear();
    for (std::size_t i = 0; i < q; ++i) {
      if ((mask >> i) & 1U) ws.xs.push_back(k + i);
    }
    const std::size_t s = ws.xs.size();
    ws.a.resize(s * s);
    for (std::size_t i = 0; i < s; ++i) {
      for (std::size_t j = 0; j < s; ++j) ws.a[i * s + j] = raw_[ws.xs[i] * n + ws.xs[j]];
    }
    ws.vec.resize(s);
    ws.next.resize(s);
    ws.columns.resize(k * s);
    for (std::size_t v = 0; v < k; ++v) {
      for (std::size_t i = 0; i < s; ++i) ws.columns[v * s + i] = raw_[ws.xs[i] * n + v];
    }

    // detour[u][v][l] = f(u, X) A^{l-1} f(X, v), l = 1..q.
    std::fill(ws.detour.begin(), ws.detour.end(), 0);
    if (s > 0) {
      for (std::size_t u = 0; u < k; ++u) {
        for (std::size_t i = 0; i < s; ++i) ws.vec[i] = raw_[u * n + ws.xs[i]];
        for (std::size_t l = 1; l <= q; ++l) {
          if (l > 1) step_walks(ws, s, 0);
          for (std::size_t v = 0; v < k; ++v) {
            ws.detour[(u * k + v) * (q + 1) + l] = reduce_dot(ws.vec, ws.columns.data() + v * s, 1);
          }
        }
      }
    }

    // closed[a][i] = (A_{X>=x_a}^i)(x_a, x_a), i = 1..q.
    if (problem_ == CountingProblem::permanent) {
      for (std::size_t anchor = 0; anchor < s; ++anchor) {
        const std::size_t size = s - anchor;
        std::fill_n(ws.vec.begin(), size, 0);
        ws.vec[0] = 1;
        for (std::size_t i = 1; i <= q; ++i) {
          step_walks(ws, s, anchor);
          ws.closed[anchor * (q + 1) + i] = ws.vec[0];
        }
      }
    }

    const std::uint64_t sign = ((q - s) & 1U) != 0 ? p_ - 1 : 1;
    ws.term.subset = mask;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      const std::uint64_t r = nodes_[j].v;
      ws.powers[0] = 1;
      for (std::size_t l = 1; l <= q; ++l) ws.powers[l] = mul_mod(ws.powers[l - 1], r, p_);
      for (std::size_t u = 0; u < k; ++u) {
        for (std::size_t v = 0; v < k; ++v) {
          const std::uint64_t* d = ws.detour.data() + (u * k + v) * (q + 1);
          std::uint64_t acc = raw_[u * n + v];
          if (s > 0) acc = add_mod(acc, reduce_dot({ws.powers.data() + 1, q}, d + 1, 1), p_);
          ws.term.small(u, v).v = acc;
        }
      }
      std::uint64_t coeff = mul_mod(sign, weights_[j].v, p_);
      if (problem_ == CountingProblem::permanent) {
        for (std::size_t anchor = 0; anchor < s; ++anchor) {
          const std::uint64_t* c = ws.closed.data() + anchor * (q + 1);
          const std::uint64_t cx = add_mod(1, reduce_dot({ws.powers.data() + 1, q}, c + 1, 1), p_);
          coeff = mul_mod(coeff, cx, p_);
        }
      }
      ws.term.coeff.v = coeff;
      ws.term.node = j;
      sink(static_cast<const ReducedTerm&>(ws.term));
    }
  }

  KernelSplit split_;
  CountingProblem problem_;
  std::uint64_t p_ = 0;
  std::vector<Zp> nodes_;
  std::vector<Zp> weights_;
  std::vector<std::uint64_t> raw_;
  bool lazy_ = false;
};

/// Permanent reduction: ((n-k)n+1) 2^{n-k} terms with sum coeff * per(small) = per(f).
template <class Sink>
void reduce_per(const Instance<Zp>& f, std::size_t k, Sink&& sink) {
  KernelReduction(f, k, CountingProblem::permanent).for_each_term(std::forward<Sink>(sink));
}

/// Hamiltonian-cycle reduction: ((n-k)k+1) 2^{n-k} terms with sum coeff * hc(small) = hc(f).
template <class Sink>
void reduce_hc(const Instance<Zp>& f, std::size_t k, Sink&& sink) {
  KernelReduction(f, k, CountingProblem::hamiltonian_cycles).for_each_term(std::forward<Sink>(sink));
}

}  // namespace hcperm
