#include <gtest/gtest.h>

#include "hcperm/classic.hpp"
#include "hcperm/generate.hpp"
#include "hcperm/modular.hpp"
#include "hcperm/oracle.hpp"
#include "hcperm/selfreduce.hpp"
#include "test_support.hpp"

namespace hcperm {
namespace {

Instance<Zp> constant_zp(std::size_t n, std::uint64_t value, std::uint64_t p) { return {n, Zp(value, p)}; }

std::uint64_t field_for(std::size_t n) { return next_prime_above(n * n); }

Zp sum_over_terms(const Instance<Zp>& f, std::size_t k, CountingProblem problem, std::uint64_t* count = nullptr) {
  Zp total(0, f(0, 0).p);
  std::uint64_t seen = 0;
  KernelReduction(f, k, problem).for_each_term([&](const ReducedTerm& t) {
    ++seen;
    total += t.coeff * (problem == CountingProblem::permanent ? per_ryser(t.small) : hc_ie(t.small));
  });
  if (count) *count = seen;
  return total;
}

TEST(RankedWalks, BaseCaseIsIdentity) {
  const auto f = constant_zp(5, 3, 11);
  const std::vector<std::size_t> xs = {2, 3, 4};
  const auto w = ranked_walks(f, xs, Zp(7, 11), 2);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(w.at(0, a, b).v, a == b ? 1U : 0U);
  }
}

TEST(RankedWalks, SingleStepIsSelfLoopTimesR) {
  Instance<Zp> f(3, Zp(0, 13));
  f(2, 2) = Zp(5, 13);
  const std::vector<std::size_t> xs = {2};
  const auto w = ranked_walks(f, xs, Zp(4, 13), 1);
  EXPECT_EQ(w.at(1, 0, 0).v, 20U % 13);
}

TEST(RankedWalks, CountsLengthTwoWalks) {
  const auto f = constant_zp(4, 1, 17);
  const std::vector<std::size_t> xs = {1, 3};
  const auto w = ranked_walks(f, xs, Zp(1, 17), 2);
  EXPECT_EQ(w.at(2, 0, 0).v, 2U);  // a.a.a and a.b.a
}

TEST(RankedWalks, MatchesExplicitWalkEnumeration) {
  Rng rng(41);
  const std::uint64_t p = 101;
  const auto f = random_zp_matrix(6, p, rng);
  const std::vector<std::size_t> xs = {1, 2, 4, 5};
  const Zp r(9, p);
  const auto w = ranked_walks(f, xs, r, 4);
  for (std::size_t len = 0; len <= 4; ++len) {
    for (std::size_t a = 0; a < xs.size(); ++a) {
      EXPECT_EQ(w.at(len, a, a), testing::closed_walk_sum(f, xs, xs[a], len) * r.pow(len));
    }
  }
}

TEST(FxEval, EmptySubsetLeavesKernelUnchanged) {
  Rng rng(1);
  const auto f = random_zp_matrix(5, 29, rng);
  const KernelSplit split(5, 3);
  const auto out = fx_eval(f, split, {}, Zp(6, 29));
  for (std::size_t u = 0; u < 3; ++u) {
    for (std::size_t v = 0; v < 3; ++v) EXPECT_EQ(out(u, v), f(u, v));
  }
}

TEST(FxEval, ZeroRankKillsDetours) {
  Rng rng(2);
  const auto f = random_zp_matrix(6, 37, rng);
  const KernelSplit split(6, 2);
  const std::vector<std::size_t> xs = {2, 4, 5};
  const auto out = fx_eval(f, split, xs, Zp(0, 37));
  for (std::size_t u = 0; u < 2; ++u) {
    for (std::size_t v = 0; v < 2; ++v) EXPECT_EQ(out(u, v), f(u, v));
  }
}

TEST(FxEval, SingleDetourVertex) {
  const auto f = constant_zp(3, 1, 11);
  const KernelSplit split(3, 2);
  const std::vector<std::size_t> xs = {2};
  const auto out = fx_eval(f, split, xs, Zp(1, 11));
  for (std::size_t u = 0; u < 2; ++u) {
    for (std::size_t v = 0; v < 2; ++v) EXPECT_EQ(out(u, v).v, 2U);
  }
}

TEST(CxEval, EmptyProductIsOne) {
  const auto f = constant_zp(4, 5, 17);
  EXPECT_EQ(cx_eval(f, KernelSplit(4, 2), {}, Zp(3, 17)).v, 1U);
}

TEST(CxEval, SingletonIsOnePlusSelfLoop) {
  Instance<Zp> f(4, Zp(2, 19));
  f(3, 3) = Zp(7, 19);
  const std::vector<std::size_t> xs = {3};
  // n-k = 1: only the self-loop is an anchored closed walk.
  EXPECT_EQ(cx_eval(f, KernelSplit(4, 3), xs, Zp(1, 19)).v, 8U);
}

TEST(CxEval, PairWithUnitWeights) {
  // X = {a, b}, f = 1, r = 1, n-k = 2.
  // C(a): 1 + [a.a] + [a.a.a, a.b.a] = 4; C(b) inside {b}: 1 + 1 + 1 = 3.
  const auto f = constant_zp(4, 1, 17);
  const std::vector<std::size_t> xs = {2, 3};
  EXPECT_EQ(cx_eval(f, KernelSplit(4, 2), xs, Zp(1, 17)).v, 12U);
}

TEST(CxEval, MatchesAnchoredWalkEnumeration) {
  Rng rng(3);
  const std::uint64_t p = 103;
  const auto f = random_zp_matrix(7, p, rng);
  const KernelSplit split(7, 3);
  const Zp r(5, p);
  for (std::uint64_t mask = 0; mask < split.subset_count(); ++mask) {
    const auto xs = split.subset(mask);
    Zp expected(1, p);
    for (std::size_t a = 0; a < xs.size(); ++a) {
      const std::vector<std::size_t> tail(xs.begin() + static_cast<std::ptrdiff_t>(a), xs.end());
      Zp c(1, p);
      for (std::size_t len = 1; len <= split.outside(); ++len) {
        c += testing::closed_walk_sum(f, tail, xs[a], len) * r.pow(len);
      }
      expected *= c;
    }
    EXPECT_EQ(cx_eval(f, split, xs, r), expected) << "mask " << mask;
  }
}

TEST(ExtractionWeights, LinearCase) {
  const std::vector<Zp> pts = {Zp(0, 7), Zp(1, 7)};
  const auto w = extraction_weights(pts, 1);
  EXPECT_EQ(w[0].v, 6U);
  EXPECT_EQ(w[1].v, 1U);
}

TEST(ExtractionWeights, QuadraticInZ5) {
  const std::vector<Zp> pts = {Zp(0, 5), Zp(1, 5), Zp(2, 5)};
  const auto w = extraction_weights(pts, 2);
  EXPECT_EQ(w[0].v, 3U);
  EXPECT_EQ(w[1].v, 4U);
  EXPECT_EQ(w[2].v, 3U);
}

TEST(ExtractionWeights, VandermondeIdentity) {
  for (std::uint64_t p : {5ULL, 11ULL, 101ULL, 65537ULL}) {
    for (std::size_t m = 1; m <= std::min<std::uint64_t>(p, 30); ++m) {
      std::vector<Zp> pts;
      for (std::size_t i = 0; i < m; ++i) pts.emplace_back((i * 7 + 3) % p, p);
      std::sort(pts.begin(), pts.end(), [](Zp a, Zp b) { return a.v < b.v; });
      if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) continue;
      for (std::size_t t = 0; t < m; ++t) {
        const auto w = extraction_weights(pts, t);
        for (std::size_t s = 0; s < m; ++s) {
          Zp acc(0, p);
          for (std::size_t j = 0; j < m; ++j) acc += w[j] * pts[j].pow(s);
          EXPECT_EQ(acc.v, s == t ? 1U : 0U) << "p=" << p << " m=" << m << " t=" << t << " s=" << s;
        }
      }
    }
  }
}

TEST(ExtractionWeights, DuplicatePointsRejected) {
  const std::vector<Zp> pts = {Zp(1, 7), Zp(3, 7), Zp(1, 7)};
  EXPECT_THROW(extraction_weights(pts, 0), InternalError);
}

TEST(Reduction, TermCounts) {
  EXPECT_EQ(reduction_term_count(CountingProblem::permanent, 6, 3), 152U);
  EXPECT_EQ(reduction_term_count(CountingProblem::hamiltonian_cycles, 6, 3), 80U);
  Rng rng(4);
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto f = random_zp_matrix(n, field_for(n), rng);
    for (std::size_t k = 1; k < n; ++k) {
      for (auto problem : {CountingProblem::permanent, CountingProblem::hamiltonian_cycles}) {
        std::uint64_t seen = 0;
        KernelReduction(f, k, problem).for_each_term([&](const ReducedTerm&) { ++seen; });
        const std::uint64_t nodes = problem == CountingProblem::permanent ? (n - k) * n + 1 : (n - k) * k + 1;
        EXPECT_EQ(seen, nodes << (n - k));
      }
    }
  }
}

TEST(Reduction, RefusesSmallField) {
  const auto f = constant_zp(4, 1, 5);  // per with k=1 needs 13 nodes
  EXPECT_THROW(KernelReduction(f, 1, CountingProblem::permanent), InputError);
  EXPECT_THROW(KernelReduction(f, 4, CountingProblem::permanent), InputError);
  EXPECT_THROW(KernelReduction(f, 0, CountingProblem::permanent), InputError);
}

TEST(Reduction, PermanentTwoByTwoOverZ5) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_zp_matrix(2, 5, rng);
    EXPECT_EQ(sum_over_terms(f, 1, CountingProblem::permanent), per_brute(f));
  }
}

TEST(Reduction, DirectedTriangleOverZ7) {
  Instance<Zp> f(3, Zp(0, 7));
  f(0, 1) = f(1, 2) = f(2, 0) = Zp(1, 7);
  EXPECT_EQ(sum_over_terms(f, 2, CountingProblem::hamiltonian_cycles).v, 1U);
}

TEST(Reduction, FullSubsetTermsArePositive) {
  Rng rng(6);
  const auto f = random_zp_matrix(5, 29, rng);
  const KernelReduction red(f, 2, CountingProblem::hamiltonian_cycles);
  const std::uint64_t full = red.subset_count() - 1;
  red.for_each_term(full, full + 1, [&](const ReducedTerm& t) { EXPECT_EQ(t.coeff, red.weights()[t.node]); });
}

TEST(Reduction, ZeroWeightsSumToZero) {
  const auto f = constant_zp(5, 0, 29);
  for (auto problem : {CountingProblem::permanent, CountingProblem::hamiltonian_cycles}) {
    KernelReduction(f, 2, problem).for_each_term([&](const ReducedTerm& t) {
      EXPECT_EQ((t.coeff * (problem == CountingProblem::permanent ? per_ryser(t.small) : hc_ie(t.small))).v, 0U);
    });
  }
}

TEST(Reduction, FastTermsMatchLiteralEvaluation) {
  Rng rng(7);
  for (std::size_t n = 2; n <= 6; ++n) {
    const std::uint64_t p = field_for(n);
    const auto f = random_zp_matrix(n, p, rng);
    for (std::size_t k = 1; k < n; ++k) {
      for (auto problem : {CountingProblem::permanent, CountingProblem::hamiltonian_cycles}) {
        const KernelReduction red(f, k, problem);
        const KernelSplit split(n, k);
        red.for_each_term([&](const ReducedTerm& t) {
          const auto xs = split.subset(t.subset);
          const Zp r = red.nodes()[t.node];
          EXPECT_EQ(t.small, fx_eval(f, split, xs, r));
          Zp coeff = red.weights()[t.node];
          if ((split.outside() - xs.size()) % 2 == 1) coeff = -coeff;
          if (problem == CountingProblem::permanent) coeff *= cx_eval(f, split, xs, r);
          EXPECT_EQ(t.coeff, coeff);
        });
      }
    }
  }
}

TEST(Reduction, PermanentExactnessSweep) {
  Rng rng(8);
  for (std::size_t n = 2; n <= 7; ++n) {
    const std::uint64_t p = field_for(n);
    for (int t = 0; t < 8; ++t) {
      const auto f = random_zp_matrix(n, p, rng);
      const Zp expected = per_brute(f);
      for (std::size_t k = 1; k < n; ++k) {
        EXPECT_EQ(sum_over_terms(f, k, CountingProblem::permanent), expected) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(Reduction, HamiltonianExactnessSweep) {
  Rng rng(9);
  for (std::size_t n = 2; n <= 7; ++n) {
    const std::uint64_t p = field_for(n);
    for (int t = 0; t < 8; ++t) {
      const auto f = random_zp_matrix(n, p, rng);
      const Zp expected = hc_brute(f);
      // k = 1 relies on hc of a single vertex being its self-loop weight.
      for (std::size_t k = 1; k < n; ++k) {
        EXPECT_EQ(sum_over_terms(f, k, CountingProblem::hamiltonian_cycles), expected) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(Reduction, IsolatedOutsideVertexCancelsInPairs) {
  Rng rng(10);
  const std::size_t n = 6, k = 2;
  const std::uint64_t p = field_for(n);
  auto f = random_zp_matrix(n, p, rng);
  const std::size_t isolated = 4;
  for (std::size_t i = 0; i < n; ++i) f(isolated, i) = f(i, isolated) = Zp(0, p);
  const std::uint64_t bit = std::uint64_t{1} << (isolated - k);
  for (auto problem : {CountingProblem::permanent, CountingProblem::hamiltonian_cycles}) {
    const KernelReduction red(f, k, problem);
    std::vector<ReducedTerm> terms;
    red.for_each_term([&](const ReducedTerm& t) { terms.push_back(t); });
    const std::size_t nodes = red.nodes().size();
    Zp with(0, p), without(0, p);
    for (std::uint64_t mask = 0; mask < red.subset_count(); ++mask) {
      if ((mask & bit) == 0) continue;
      for (std::size_t j = 0; j < nodes; ++j) {
        const auto& a = terms[mask * nodes + j];
        const auto& b = terms[(mask ^ bit) * nodes + j];
        EXPECT_EQ(a.small, b.small);
        EXPECT_EQ(a.coeff, -b.coeff);
        const auto count = [&](const ReducedTerm& t) {
          return problem == CountingProblem::permanent ? per_ryser(t.small) : hc_ie(t.small);
        };
        with += a.coeff * count(a);
        without += b.coeff * count(b);
      }
    }
    EXPECT_EQ(with + without, Zp(0, p));
  }
}

TEST(Reduction, RankDegreeBookkeeping) {
  // Recover the full r-polynomials of f_X entries and prod C_X by evaluation
  // at more nodes than needed; coefficients above the degree bounds vanish.
  Rng rng(11);
  const std::uint64_t p = 1009;
  for (std::size_t n = 3; n <= 6; ++n) {
    const auto f = random_zp_matrix(n, p, rng);
    for (std::size_t k = 1; k < n; ++k) {
      const KernelSplit split(n, k);
      const std::size_t q = n - k;
      const std::size_t cx_points = q * q + 3;
      std::vector<Zp> pts;
      for (std::size_t i = 0; i < cx_points; ++i) pts.emplace_back(i, p);
      const auto xs = split.subset(split.subset_count() - 1);
      std::vector<Zp> cx_values, fx_values;
      for (const auto& r : pts) {
        cx_values.push_back(cx_eval(f, split, xs, r));
        fx_values.push_back(fx_eval(f, split, xs, r)(0, k - 1));
      }
      for (std::size_t t = q * q + 1; t < cx_points; ++t) {
        const auto w = extraction_weights(pts, t);
        Zp cx(0, p), fx(0, p);
        for (std::size_t j = 0; j < cx_points; ++j) {
          cx += w[j] * cx_values[j];
          fx += w[j] * fx_values[j];
        }
        EXPECT_EQ(cx.v, 0U);
        EXPECT_EQ(fx.v, 0U);
      }
      for (std::size_t t = q + 1; t <= q * q; ++t) {
        const auto w = extraction_weights(pts, t);
        Zp fx(0, p);
        for (std::size_t j = 0; j < cx_points; ++j) fx += w[j] * fx_values[j];
        EXPECT_EQ(fx.v, 0U);
      }
    }
  }
}

TEST(Reduction, ShardedEmissionMatchesSerial) {
  Rng rng(12);
  const auto f = random_zp_matrix(7, field_for(7), rng);
  const KernelReduction red(f, 3, CountingProblem::permanent);
  std::vector<ReducedTerm> serial, sharded;
  red.for_each_term([&](const ReducedTerm& t) { serial.push_back(t); });
  const std::uint64_t mid = red.subset_count() / 3;
  red.for_each_term(0, mid, [&](const ReducedTerm& t) { sharded.push_back(t); });
  red.for_each_term(mid, red.subset_count(), [&](const ReducedTerm& t) { sharded.push_back(t); });
  ASSERT_EQ(serial.size(), sharded.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].small, sharded[i].small);
    EXPECT_EQ(serial[i].coeff, sharded[i].coeff);
  }
}

}  // namespace
}  // namespace hcperm
