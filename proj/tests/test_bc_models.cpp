#include <gtest/gtest.h>

#include <cmath>

#include "netbound/bc_models.hpp"

using namespace netbound;

namespace {
BcSpec bc(std::vector<double> g) { return BcSpec{std::move(g), std::nullopt, std::nullopt}; }
}  // namespace

TEST(BcOneShot, Variants) {
  const BcSpec s = bc({1, 4});
  EXPECT_NEAR(bc_upper_oneshot(s, 1).sum_rate, 0.5 * std::log2(6.0), 1e-12);
  const auto v2 = bc_upper_oneshot(s, 2);
  EXPECT_NEAR(v2.individual[0], 0.5, 1e-12);
  EXPECT_NEAR(v2.individual[1], 0.5 * std::log2(5.0), 1e-12);
  EXPECT_NEAR(bc_upper_oneshot(bc({3}), 1).sum_rate, 1.0, 1e-12);
  EXPECT_NEAR(bc_upper_oneshot(bc({3}), 2).individual[0], 1.0, 1e-12);
  EXPECT_THROW(bc_upper_oneshot(s, 3), DomainError);
}

TEST(BcUpperNew, Permutations) {
  const BcSpec s = bc({1, 4});
  const auto a = bc_upper_new(s, {0, 1});
  EXPECT_NEAR(a.sum_rate, 0.5 * std::log2(6.0), 1e-12);
  EXPECT_NEAR(a.individual[0], 0.5, 1e-12);
  EXPECT_NEAR(a.individual[1], 0.5 * std::log2(6.0), 1e-12);
  const auto b = bc_upper_new(s, {1, 0});
  EXPECT_NEAR(b.individual[1], 0.5 * std::log2(5.0), 1e-12);
  EXPECT_NEAR(b.individual[0], 0.5 * std::log2(6.0), 1e-12);
  EXPECT_NEAR(bc_upper_new(bc({3}), {0}).individual[0], 1.0, 1e-12);
  EXPECT_THROW(bc_upper_new(s, {0, 0}), DomainError);
}

TEST(BcLower, TwoLayerSuperposition) {
  const auto m = bc_lower_superposition(bc({1, 4}), {0.5, 0.5});
  ASSERT_EQ(m.rates.size(), 2u);
  EXPECT_NEAR(m.rates[0].rate, 0.20751874963942188, 1e-12);
  EXPECT_EQ(m.rates[0].table_index, 3u);
  EXPECT_EQ(m.rates[0].targets, (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(m.rates[1].rate, 0.792481250360578, 1e-12);
  EXPECT_EQ(m.rates[1].table_index, 2u);
  EXPECT_EQ(m.rates[1].targets, (std::vector<std::size_t>{1}));
  EXPECT_NEAR(m.sum_rate, 1.0, 1e-12);
}

TEST(BcLower, LabelsFollowCallerOrder) {
  const auto m = bc_lower_superposition(bc({4, 1}), {0.5, 0.5});
  EXPECT_EQ(m.order, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(m.rates[1].targets, (std::vector<std::size_t>{0}));
  EXPECT_EQ(m.rates[1].mask, 1u);
  EXPECT_NEAR(m.rates[0].rate, 0.20751874963942188, 1e-12);
}

TEST(BcLower, DegenerateAllocations) {
  const auto top = bc_lower_superposition(bc({1, 2, 5}), {0, 0, 1});
  EXPECT_NEAR(top.sum_rate, awgn_capacity(5), 1e-12);
  EXPECT_NEAR(top.rates[2].rate, awgn_capacity(5), 1e-12);
  EXPECT_EQ(top.rates[2].targets.size(), 1u);
  EXPECT_NEAR(bc_lower_superposition(bc({3}), {1}).sum_rate, 1.0, 1e-12);
  EXPECT_THROW(bc_lower_superposition(bc({1, 2}), {0.5, 0.6}), DomainError);
}

TEST(BcGap, Examples) {
  EXPECT_NEAR(bc_gap(bc({1, 2, 100})), 0.02111411769464873, 1e-12);
  EXPECT_NEAR(bc_gap(bc({1, 1, 1})), 0.5, 1e-12);
  EXPECT_NEAR(bc_gap(bc({9})), 0.0, 1e-15);
}

TEST(SimplexGrid, CountsAndOrder) {
  const auto g = simplex_grid(3, 4);
  EXPECT_EQ(g.size(), 15u);  // C(6,2)
  EXPECT_EQ(g.front(), (std::vector<double>{1, 0, 0}));
  for (const auto& b : g) EXPECT_NEAR(b[0] + b[1] + b[2], 1.0, 1e-12);
}
