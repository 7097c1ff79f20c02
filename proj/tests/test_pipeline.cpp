#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "netbound/experiments.hpp"

using namespace netbound;

TEST(CombineBounds, TakesTightestOfEachSide) {
  const std::vector<std::string> names{"a", "b"};
  const std::vector<netbound::Run> outer{{"o1", {2.0, 5.0}}, {"o2", {3.0, 4.0}}};
  const std::vector<netbound::Run> inner{{"i1", {1.0, std::nan("")}}, {"i2", {1.5, 0.5}}};
  const auto r = combine_bounds(names, outer, inner);
  EXPECT_EQ(r.metrics[0].outer, 2.0);
  EXPECT_EQ(r.metrics[0].outer_params, "o1");
  EXPECT_EQ(r.metrics[1].outer_params, "o2");
  EXPECT_EQ(r.metrics[0].inner_params, "i2");
  EXPECT_EQ(r.metrics[1].inner, 0.5);
  EXPECT_THROW(combine_bounds(names, {{"x", {1.0}}}, {}), DomainError);
}

TEST(RateRegionHull, DropsDominatedPoints) {
  const auto h = rate_region_hull({{1, 0}, {0, 1}, {0.4, 0.4}, {0.6, 0.6}});
  const std::vector<std::array<double, 2>> want{{0, 0}, {0, 1}, {0.6, 0.6}, {1, 0}};
  EXPECT_EQ(h, want);
}

TEST(ComputeBounds, SingleLinkIsTight) {
  NoisyNetwork net;
  net.nodes = {"A", "B"};
  net.links = {{"A", "B", LinkKind::awgn, 3, 0, 0, 0}};
  net.demands = {{DemandKind::unicast, "A", {"B"}}};
  const auto r = compute_bounds(net);
  EXPECT_NEAR(r.report.metrics[0].inner, 1.0, 1e-9);
  EXPECT_NEAR(r.report.metrics[0].outer, 1.0, 1e-12);
}

TEST(ComputeBounds, RelaySandwichAndUnknownMetric) {
  const auto net = relay_network(1, 10, 10);
  const auto r = compute_bounds(net);
  for (const auto& m : r.report.metrics) EXPECT_LE(m.inner, m.outer + 1e-9) << m.name;
  EXPECT_NEAR(r.report.metrics[0].inner, 1.5, 0.1);
  SearchOptions opt;
  opt.metrics = {"nope"};
  EXPECT_THROW(compute_bounds(net, opt), InputError);
}

TEST(ComputeBounds, HullForTwoDemands) {
  const auto net = multicast_network(MulticastParams{2, -3, 8, 0.1}, 3.0);
  SearchOptions opt;
  opt.hull = true;
  const auto r = compute_bounds(net, opt);
  EXPECT_GE(r.report.hull.size(), 3u);
}

TEST(Grid, InclusiveEndpoints) {
  EXPECT_EQ(grid(-10, 30, 1).size(), 41u);
  EXPECT_EQ(grid(0, 1, 0.1).size(), 11u);
  EXPECT_THROW(grid(0, 1, 0), InputError);
}

TEST(RelayExperiment, WeakRelayAndStrongRelay) {
  const auto weak = relay_point(0, 10, -5, 128);
  EXPECT_EQ(weak.eq_lower, 0.5);
  EXPECT_LE(weak.eq_lower, weak.eq_upper);
  const auto strong = relay_point(0, 10, 30, 128);
  EXPECT_LE(strong.df - strong.eq_lower, 0.35);
  EXPECT_LE(strong.eq_upper - strong.cutset, 0.05);
}

TEST(LayeredExperiment, ClosedForms) {
  const auto small = layered_closed_form(4, 1, 0.5);
  EXPECT_NEAR(small.inner, 0.125, 1e-15);
  EXPECT_NEAR(small.capacity, 0.125, 1e-15);
  EXPECT_TRUE(small.small_regime);
  const auto big = layered_closed_form(4, 10, 0.5);
  EXPECT_NEAR(big.inner, awgn_capacity(10) / 4, 1e-15);
  EXPECT_LT(awgn_capacity(10) / 4, awgn_capacity(20) / 5);
  const auto two = layered_closed_form(2, 10, 0.5);
  EXPECT_FALSE(two.small_regime);
  EXPECT_NEAR(two.inner, awgn_capacity(20) / 3, 1e-15);
  EXPECT_NEAR(layered_closed_form(2, 1e-6, 0.5).inner, awgn_capacity(1e-6) / 2, 1e-15);
}

TEST(LayeredExperiment, FlowsMatchClosedForms) {
  for (const auto& r : layered_rows(4, 0.0, {0.0, 0.5, 1.0})) {
    EXPECT_NEAR(r.outer_sym, 0.125, 1e-9);
    EXPECT_NEAR(r.inner_sym, 0.125, 1e-9);
  }
  for (const auto& r : layered_rows(2, 10.0, {0.5})) EXPECT_NEAR(r.inner_sym, r.closed.inner, 1e-9);
}

TEST(MulticastExperiment, LadderAndSideLink) {
  const MulticastParams mp;
  const auto [g1, g2] = multicast_ladder(mp, 2.0);
  EXPECT_NEAR(g1.back(), 2.0 - std::pow(10.0, -0.3) * 2.0, 1e-12);
  EXPECT_NEAR(g2.front(), 2.0 + 0.1 * std::pow(10.0, -0.3) * 2.0, 1e-12);
  const auto r = multicast_point(mp, 5.0);
  EXPECT_NEAR(r.C12, 2.2502689142, 1e-9);
  EXPECT_LE(r.eq_lower_sum, r.eq_upper_sum + 1e-9);
  EXPECT_GE(r.coop, r.mac);
}

TEST(Csv, DeterministicAndSelfDescribing) {
  const auto rows = relay_sweep(0, 10, {-3, 3}, 16);
  std::ostringstream a, b;
  write_relay_csv(a, rows, "netbound repro relay");
  write_relay_csv(b, relay_sweep(0, 10, {-3, 3}, 16), "netbound repro relay");
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("# netbound ", 0), 0u);
  EXPECT_NE(a.str().find("gamma_sr_db,eq_upper,eq_lower,cutset,df,cf,gamma_sd_db,gamma_rd_db,beta_steps"), std::string::npos);
}

TEST(ParallelMap, KeepsOrderAndPropagatesErrors) {
  std::vector<int> v(100);
  for (int i = 0; i < 100; ++i) v[std::size_t(i)] = i;
  const auto sq = parallel_map(v, [](int x) { return x * x; });
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sq[std::size_t(i)], i * i);
  EXPECT_THROW(parallel_map(v, [](int x) { return x == 42 ? throw InputError("bad") : x; }), InputError);
}
