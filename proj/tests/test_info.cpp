#include <gtest/gtest.h>

#include <cmath>

#include "netbound/info.hpp"

using namespace netbound;

TEST(AwgnCapacity, SmallValues) {
  EXPECT_DOUBLE_EQ(awgn_capacity(0), 0.0);
  EXPECT_DOUBLE_EQ(awgn_capacity(1), 0.5);
  EXPECT_DOUBLE_EQ(awgn_capacity(3), 1.0);
  EXPECT_THROW(awgn_capacity(-1), DomainError);
}

TEST(QscCapacity, KnownPoints) {
  EXPECT_NEAR(qsc_capacity(2, 0), 1.0, 1e-15);
  EXPECT_NEAR(qsc_capacity(8, 0.1), 2.2502689142049586, 1e-12);
  EXPECT_NEAR(qsc_capacity(4, 0.75), 0.0, 1e-15);
  EXPECT_THROW(qsc_capacity(1, 0.1), DomainError);
  EXPECT_THROW(qsc_capacity(4, 0.8), DomainError);
}

TEST(DmcCapacity, BinarySymmetric) {
  EXPECT_NEAR(dmc_capacity(bsc_matrix(0.11)), bsc_capacity(0.11), 1e-8);
  EXPECT_NEAR(bsc_capacity(0.11), 0.500084041835472, 1e-12);
}

TEST(DmcCapacity, IdentityChannel) {
  const Table id{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  EXPECT_NEAR(dmc_capacity(id), std::log2(3.0), 1e-8);
}

TEST(DmcCapacity, MatchesQaryFormula) { EXPECT_NEAR(dmc_capacity(qsc_matrix(8, 0.1), 1e-11), qsc_capacity(8, 0.1), 1e-8); }

TEST(DmcCapacity, ZChannelNeedsNonUniformInput) {
  // Z channel with crossover 1/2: log2(1 + (1-p) p^(p/(1-p))) = log2(5/4)
  const Table z{{1, 0}, {0.5, 0.5}};
  const auto r = blahut_arimoto(z, 1e-11);
  EXPECT_NEAR(r.capacity, 0.32192809488736235, 1e-8);
}

TEST(MutualInformation, IndependentAndCopy) {
  EXPECT_NEAR(mutual_information({{0.25, 0.25}, {0.25, 0.25}}), 0.0, 1e-15);
  EXPECT_NEAR(mutual_information({{0.5, 0}, {0, 0.5}}), 1.0, 1e-15);
}
