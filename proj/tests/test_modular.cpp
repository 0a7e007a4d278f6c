#include <gtest/gtest.h>

#include "hcperm/classic.hpp"
#include "hcperm/generate.hpp"
#include "hcperm/modular.hpp"
#include "hcperm/oracle.hpp"

namespace hcperm {
namespace {

std::vector<std::uint64_t> primes_of(const CrtPlan& plan) { return {plan.primes().begin(), plan.primes().end()}; }

TEST(IsPrime, SmallValues) {
  std::vector<std::uint64_t> found;
  for (std::uint64_t x = 0; x < 40; ++x) {
    if (is_prime(x)) found.push_back(x);
  }
  EXPECT_EQ(found, (std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}));
  EXPECT_TRUE(is_prime(4294967291ULL));
  EXPECT_FALSE(is_prime(4294967295ULL));
  EXPECT_EQ(next_prime_above(16), 17U);
  EXPECT_EQ(next_prime_above(17), 19U);
}

TEST(SelectPrimes, Examples) {
  EXPECT_EQ(primes_of(select_primes(1, 4)), (std::vector<std::uint64_t>{17, 19}));
  EXPECT_EQ(primes_of(select_primes(0, 3)), (std::vector<std::uint64_t>{11}));
  // n = 1, M = 1: |per| can be 1, so the modulus product must exceed 3.
  EXPECT_EQ(primes_of(select_primes(1, 1)), (std::vector<std::uint64_t>{2, 3}));
}

TEST(SelectPrimes, ProductExceedsTwiceTheBound) {
  for (std::size_t n = 1; n <= 20; ++n) {
    for (long m : {0L, 1L, 2L, 10L, 1000L}) {
      const auto plan = select_primes(m, n);
      EXPECT_GT(plan.modulus(), 2 * value_bound(m, n) + 1);
      for (auto p : plan.primes()) EXPECT_GT(p, n * n);
      // Minimality: dropping the last prime breaks the bound.
      BigInt without(1);
      for (std::size_t i = 0; i + 1 < plan.primes().size(); ++i) without *= static_cast<unsigned long>(plan.primes()[i]);
      EXPECT_LE(without, 2 * value_bound(m, n) + 1);
    }
  }
}

TEST(ModReduce, Examples) {
  EXPECT_EQ(mod_reduce_instance(make_instance(1, {-3}), 17)(0, 0).v, 14U);
  EXPECT_EQ(mod_reduce_instance(make_instance(1, {17}), 17)(0, 0).v, 0U);
  const auto r = mod_reduce_instance(make_instance(2, {1, 2, 3, 4}), 3);
  EXPECT_EQ(r(0, 0).v, 1U);
  EXPECT_EQ(r(0, 1).v, 2U);
  EXPECT_EQ(r(1, 0).v, 0U);
  EXPECT_EQ(r(1, 1).v, 1U);
}

TEST(CrtReconstruct, Examples) {
  const CrtPlan plan({3, 5});
  const std::uint64_t a[] = {2, 3};
  EXPECT_EQ(crt_reconstruct(a, plan), -7);
  const std::uint64_t z[] = {0, 0};
  EXPECT_EQ(crt_reconstruct(z, plan), 0);
  const CrtPlan single({101});
  const std::uint64_t s[] = {42};
  EXPECT_EQ(crt_reconstruct(s, single), 42);
}

TEST(CrtReconstruct, ExhaustiveSmallRange) {
  // Brute-force scan of the balanced range [-7, 7] for moduli {3, 5}.
  const CrtPlan plan({3, 5});
  for (long x = -7; x <= 7; ++x) {
    const std::uint64_t r[] = {static_cast<std::uint64_t>(((x % 3) + 3) % 3),
                               static_cast<std::uint64_t>(((x % 5) + 5) % 5)};
    EXPECT_EQ(crt_reconstruct(r, plan), x);
  }
  EXPECT_EQ(plan.balanced_min(), -7);
  EXPECT_EQ(plan.balanced_end(), 8);
}

TEST(CrtReconstruct, RejectsMismatchedResidues) {
  const CrtPlan plan({3, 5});
  const std::uint64_t one[] = {1};
  EXPECT_THROW(crt_reconstruct(one, plan), InternalError);
  const std::uint64_t big[] = {3, 0};
  EXPECT_THROW(crt_reconstruct(big, plan), InternalError);
}

TEST(CrtReconstruct, RoundTripProperty) {
  const auto plan = select_primes(10, 9);
  gmp_randclass rand(gmp_randinit_default);
  rand.seed(99);
  for (int t = 0; t < 1000; ++t) {
    const BigInt x = BigInt(rand.get_z_range(plan.modulus())) + plan.balanced_min();
    std::vector<std::uint64_t> r;
    for (auto p : plan.primes()) r.push_back(reduce_mod(x, p));
    EXPECT_EQ(crt_reconstruct(r, plan), x);
  }
  std::vector<std::uint64_t> r;
  for (auto p : plan.primes()) r.push_back(reduce_mod(plan.balanced_min(), p));
  EXPECT_EQ(crt_reconstruct(r, plan), plan.balanced_min());
  r.clear();
  for (auto p : plan.primes()) r.push_back(reduce_mod(plan.balanced_end() - 1, p));
  EXPECT_EQ(crt_reconstruct(r, plan), plan.balanced_end() - 1);
}

TEST(Modular, BoundHoldsAgainstOracle) {
  Rng rng(8);
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int t = 0; t < 10; ++t) {
      const auto inst = random_matrix(n, -10, 10, rng);
      const BigInt bound = value_bound(max_abs_weight(inst), n);
      EXPECT_LE(abs(per_brute(inst)), bound);
      EXPECT_LE(abs(hc_brute(inst)), bound);
    }
  }
}

TEST(Modular, ReductionIsAHomomorphism) {
  Rng rng(9);
  for (std::uint64_t p : {17ULL, 101ULL, 65521ULL}) {
    for (std::size_t n = 1; n <= 8; ++n) {
      const auto inst = random_matrix(n, -1000, 1000, rng);
      EXPECT_EQ(per_ryser(mod_reduce_instance(inst, p)).v, reduce_mod(per_ryser(inst), p));
    }
  }
}

}  // namespace
}  // namespace hcperm
