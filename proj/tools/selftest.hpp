#pragma once

// Cross-implementation checks run by `hcperm selftest`.  Every check compares
// two independent routes to the same number on seeded random instances.

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "hcperm/hcperm.hpp"

namespace hcperm::cli {

struct SelftestConfig {
  std::size_t max_n = 8;
  std::uint64_t seed = 1;
  unsigned threads = 2;
  int instances = 20;
};

struct CheckResult {
  std::string name;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
};

class Selftest {
 public:
  explicit Selftest(SelftestConfig config) : cfg_(config) {}

  /// Runs every check, printing one line each; returns the number of failed checks.
  int run(std::ostream& out) {
    add("classic-vs-oracle", [this](CheckResult& r) { classic_vs_oracle(r); });
    add("classic-over-zp", [this](CheckResult& r) { classic_over_zp(r); });
    add("ie-vs-dp", [this](CheckResult& r) { ie_vs_dp(r); });
    add("crt-roundtrip", [this](CheckResult& r) { crt_roundtrip(r); });
    add("extraction-vandermonde", [this](CheckResult& r) { vandermonde(r); });
    add("reduction-per", [this](CheckResult& r) { reduction(r, CountingProblem::permanent); });
    add("reduction-hc", [this](CheckResult& r) { reduction(r, CountingProblem::hamiltonian_cycles); });
    add("tabulated-vs-oracle", [this](CheckResult& r) { tabulated(r); });
    add("tabulated-determinism", [this](CheckResult& r) { determinism(r); });
    add("atsp-vs-oracle", [this](CheckResult& r) { atsp(r); });
    add("matrix-roundtrip", [this](CheckResult& r) { roundtrip(r); });
    int failed = 0;
    std::uint64_t cases = 0;
    for (auto& [result, body] : checks_) {
      try {
        body(result);
      } catch (const std::exception& e) {
        ++result.failures;
        out << "  " << result.name << ": exception: " << e.what() << '\n';
      }
      cases += result.cases;
      if (result.failures != 0) ++failed;
      out << (result.failures == 0 ? "PASS " : "FAIL ") << result.name << " (" << result.cases << " cases, "
          << result.failures << " failures)\n";
    }
    out << "selftest: " << checks_.size() - static_cast<std::size_t>(failed) << " passed, " << failed << " failed, "
        << cases << " cases\n";
    return failed;
  }

 private:
  void add(std::string name, std::function<void(CheckResult&)> body) {
    checks_.emplace_back(CheckResult{std::move(name)}, std::move(body));
  }

  static void expect(CheckResult& r, bool ok) {
    ++r.cases;
    if (!ok) ++r.failures;
  }

  Rng rng(std::uint64_t salt) const { return Rng(cfg_.seed * 1000003 + salt); }
  std::size_t cap(std::size_t limit) const { return std::min(cfg_.max_n, limit); }

  void classic_vs_oracle(CheckResult& r) {
    auto g = rng(1);
    for (std::size_t n = 1; n <= cap(kDefaultOracleCap); ++n) {
      for (int t = 0; t < cfg_.instances; ++t) {
        const auto inst = random_matrix(n, -5, 5, g);
        const BigInt hc = hc_brute(inst);
        expect(r, per_ryser(inst) == per_brute(inst));
        expect(r, hc_ie(inst) == hc);
        expect(r, hc_dp(inst) == hc);
      }
    }
  }

  void classic_over_zp(CheckResult& r) {
    auto g = rng(2);
    for (std::uint64_t p : {101ULL, 103ULL}) {
      for (std::size_t n = 1; n <= cap(kDefaultOracleCap); ++n) {
        const auto inst = random_matrix(n, -50, 50, g);
        const auto red = mod_reduce_instance(inst, p);
        expect(r, per_ryser(red).v == reduce_mod(per_ryser(inst), p));
        expect(r, hc_ie(red).v == reduce_mod(hc_ie(inst), p));
      }
    }
  }

  void ie_vs_dp(CheckResult& r) {
    auto g = rng(3);
    const std::size_t top = std::min<std::size_t>(cfg_.max_n + 8, 16);
    for (std::size_t n = 2; n <= top; ++n) {
      const auto inst = random_zp_matrix(n, 4294967291ULL, g);
      expect(r, hc_ie(inst) == hc_dp(inst));
    }
  }

  void crt_roundtrip(CheckResult& r) {
    const auto plan = select_primes(10, std::max<std::size_t>(cfg_.max_n, 2));
    gmp_randclass rand(gmp_randinit_default);
    rand.seed(static_cast<unsigned long>(cfg_.seed));
    for (int t = 0; t < 1000; ++t) {
      const BigInt x = BigInt(rand.get_z_range(plan.modulus())) + plan.balanced_min();
      std::vector<std::uint64_t> res;
      for (auto p : plan.primes()) res.push_back(reduce_mod(x, p));
      expect(r, crt_reconstruct(res, plan) == x);
    }
  }

  void vandermonde(CheckResult& r) {
    for (std::size_t n = 2; n <= cap(12); ++n) {
      const std::uint64_t p = next_prime_above(n * n);
      for (std::size_t k = 1; k < n; ++k) {
        for (auto problem : {CountingProblem::permanent, CountingProblem::hamiltonian_cycles}) {
          const auto nodes = interpolation_nodes(interpolation_node_count(problem, n, k), p);
          const auto w = extraction_weights(nodes, n - k);
          for (std::size_t s = 0; s < nodes.size(); ++s) {
            Zp acc(0, p);
            for (std::size_t j = 0; j < nodes.size(); ++j) acc += w[j] * nodes[j].pow(s);
            expect(r, acc.v == (s == n - k ? 1U : 0U));
          }
        }
      }
    }
  }

  void reduction(CheckResult& r, CountingProblem problem) {
    auto g = rng(problem == CountingProblem::permanent ? 4 : 5);
    for (std::size_t n = 2; n <= cap(8); ++n) {
      const std::uint64_t p = next_prime_above(n * n);
      for (int t = 0; t < 3; ++t) {
        const auto f = random_zp_matrix(n, p, g);
        const Zp expected = problem == CountingProblem::permanent ? per_brute(f) : hc_brute(f);
        for (std::size_t k = 1; k < n; ++k) {
          Zp total(0, p);
          std::uint64_t terms = 0;
          KernelReduction(f, k, problem).for_each_term([&](const ReducedTerm& term) {
            ++terms;
            total += term.coeff * (problem == CountingProblem::permanent ? per_ryser(term.small) : hc_ie(term.small));
          });
          expect(r, total == expected);
          expect(r, terms == reduction_term_count(problem, n, k));
        }
      }
    }
  }

  void tabulated(CheckResult& r) {
    auto g = rng(6);
    for (std::size_t n = 2; n <= cap(9); ++n) {
      for (int t = 0; t < 4; ++t) {
        const auto inst = random_matrix(n, -10, 10, g);
        TabulationOptions opt;
        opt.verify_residues = true;
        opt.k = 1 + static_cast<std::size_t>(t) % (n - 1);
        expect(r, per_tabulated(inst, opt).value == per_brute(inst));
        expect(r, hc_tabulated(inst, opt).value == hc_brute(inst));
      }
    }
  }

  void determinism(CheckResult& r) {
    auto g = rng(7);
    const std::size_t n = std::max<std::size_t>(cap(12), 3);
    const auto inst = random_matrix(n, 0, 1, g);
    TabulationOptions one, many;
    many.threads = std::max(cfg_.threads, 2U);
    for (auto run : {per_tabulated, hc_tabulated}) {
      const auto a = run(inst, one);
      const auto b = run(inst, many);
      expect(r, a.value == b.value && a.stats.same_counts(b.stats));
    }
  }

  void atsp(CheckResult& r) {
    auto g = rng(8);
    for (std::size_t n = 2; n <= cap(8); ++n) {
      for (int t = 0; t < cfg_.instances; ++t) {
        const auto inst = random_atsp(n, 10, 0.3, g);
        expect(r, atsp_shortest(inst, 10) == tsp_brute(inst));
      }
    }
  }

  void roundtrip(CheckResult& r) {
    auto g = rng(9);
    for (int t = 0; t < 50; ++t) {
      const auto inst = random_matrix(1 + static_cast<std::size_t>(t) % 9, -1000000, 1000000, g);
      expect(r, ingest_matrix(serialize_matrix(inst)) == inst);
    }
  }

  SelftestConfig cfg_;
  std::vector<std::pair<CheckResult, std::function<void(CheckResult&)>>> checks_;
};

}  // namespace hcperm::cli
