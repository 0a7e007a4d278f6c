#include <gtest/gtest.h>

#include "hcperm/generate.hpp"
#include "hcperm/oracle.hpp"
#include "test_support.hpp"

namespace hcperm {
namespace {

Instance<BigInt> ones_off_diagonal(std::size_t n) {
  Instance<BigInt> inst(n, BigInt(1));
  for (std::size_t i = 0; i < n; ++i) inst(i, i) = 0;
  return inst;
}

TEST(PerBrute, Examples) {
  EXPECT_EQ(per_brute(make_instance(3, {1, 0, 0, 0, 1, 0, 0, 0, 1})), 1);
  EXPECT_EQ(per_brute(Instance<BigInt>(4, BigInt(1))), 24);
  EXPECT_EQ(per_brute(make_instance(2, {1, 2, 3, 4})), 10);
}

TEST(HcBrute, Examples) {
  EXPECT_EQ(hc_brute(ones_off_diagonal(3)), 2);
  EXPECT_EQ(hc_brute(make_instance(3, {1, 1, 1, 0, 0, 0, 1, 1, 1})), 0);
  EXPECT_EQ(hc_brute(make_instance(1, {7})), 7);
}

TEST(Oracle, CapIsEnforced) {
  EXPECT_THROW(per_brute(Instance<BigInt>(11, BigInt(1))), LimitError);
  EXPECT_THROW(hc_brute(Instance<BigInt>(4, BigInt(1)), 3), LimitError);
  EXPECT_EQ(per_brute(Instance<BigInt>(3, BigInt(1)), 3), 6);
}

TEST(TspBrute, Examples) {
  AtspInstance all_ones{3, std::vector<std::optional<std::uint64_t>>(9, 1)};
  EXPECT_EQ(tsp_brute(all_ones), 3U);

  const auto asym = ingest_atsp("3\n- 1 2\n2 - 1\n1 2 -\n");
  EXPECT_EQ(tsp_brute(asym), 3U);

  const auto one_way = ingest_atsp("3\n- 1 -\n- - 1\n1 - -\n");
  EXPECT_EQ(tsp_brute(one_way), 3U);
  // Flipping one arc of the triangle leaves no orientation complete.
  const auto flipped = ingest_atsp("3\n- 1 1\n- - 1\n- - -\n");
  EXPECT_EQ(tsp_brute(flipped), std::nullopt);
  const auto path = ingest_atsp("3\n- 1 -\n- - 1\n- - -\n");
  EXPECT_EQ(tsp_brute(path), std::nullopt);
}

TEST(Oracle, PermanentEqualsCycleCoverSum) {
  Rng rng(5);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int t = 0; t < 20; ++t) {
      const auto inst = random_matrix(n, -4, 4, rng);
      EXPECT_EQ(per_brute(inst), testing::cycle_cover_sum(inst));
    }
  }
}

TEST(Oracle, ZeroRowOrColumnGivesZero) {
  Rng rng(6);
  for (std::size_t n = 2; n <= 6; ++n) {
    auto inst = random_matrix(n, 1, 5, rng);
    auto col = inst;
    for (std::size_t j = 0; j < n; ++j) inst(n / 2, j) = 0;
    for (std::size_t i = 0; i < n; ++i) col(i, n - 1) = 0;
    EXPECT_EQ(per_brute(inst), 0);
    EXPECT_EQ(hc_brute(inst), 0);
    EXPECT_EQ(per_brute(col), 0);
    EXPECT_EQ(hc_brute(col), 0);
  }
}

TEST(Oracle, RowScalingIsLinear) {
  Rng rng(7);
  for (std::size_t n = 1; n <= 7; ++n) {
    for (int t = 0; t < 5; ++t) {
      const auto inst = random_matrix(n, -5, 5, rng);
      auto scaled = inst;
      const BigInt c(-3 + t);
      const std::size_t row = static_cast<std::size_t>(t) % n;
      for (std::size_t j = 0; j < n; ++j) scaled(row, j) *= c;
      EXPECT_EQ(per_brute(scaled), c * per_brute(inst));
      EXPECT_EQ(hc_brute(scaled), c * hc_brute(inst));
    }
  }
}

TEST(Oracle, HcCountsCyclicOrders) {
  // (n-1)! Hamiltonian cycles in the complete digraph.
  EXPECT_EQ(hc_brute(ones_off_diagonal(5)), 24);
  EXPECT_EQ(hc_brute(ones_off_diagonal(6)), 120);
}

}  // namespace
}  // namespace hcperm
