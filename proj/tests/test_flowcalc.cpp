#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "netbound/flowcalc.hpp"
#include "netbound/lp.hpp"
#include "support.hpp"

using namespace netbound;

namespace {

NoiselessNetwork nodes(std::initializer_list<const char*> ids) {
  NoiselessNetwork n;
  for (const char* id : ids) n.add_node(id, NodeKind::terminal);
  return n;
}

Demand unicast(const char* s, const char* t) { return {DemandKind::unicast, s, {t}}; }

// Source S multicasts to T1 and T2 through the single bottleneck C->D.
NoiselessNetwork butterfly() {
  auto n = nodes({"S", "A", "B", "C", "D", "T1", "T2"});
  for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
           {"S", "A"}, {"S", "B"}, {"A", "C"}, {"B", "C"}, {"C", "D"}, {"A", "T1"}, {"B", "T2"}, {"D", "T1"}, {"D", "T2"}})
    n.add_pipe(a, {b}, 1.0, std::string(a) + b);
  return n;
}

}  // namespace

TEST(LinearProgram, SmallKnownOptimum) {
  LinearProgram lp;
  lp.nvars = 2;
  lp.objective = {3, 2};
  lp.add_row({{0, 1}, {1, 1}}, 4);
  lp.add_row({{0, 1}, {1, 3}}, 6);
  lp.add_row({{0, 1}}, 3);
  const auto r = lp_maximize(lp);
  ASSERT_EQ(r.status, LpStatus::optimal);
  EXPECT_NEAR(r.value, 11.0, 1e-12);
  EXPECT_NEAR(r.x[0], 3.0, 1e-12);
  EXPECT_NEAR(r.x[1], 1.0, 1e-12);
}

TEST(LinearProgram, MatchesReferenceSolver) {
  // value from a HiGHS solve of the same data
  const std::vector<std::vector<double>> A{{2, 3, 4, 5, 0}, {0, 4, 5, 1, 1}, {5, 2, 1, 4, 1},
                                           {2, 3, 3, 0, 0}, {5, 4, 5, 3, 4}, {1, 2, 4, 0, 1}};
  const std::vector<double> b{6, 11, 19, 7, 10, 11};
  LinearProgram lp;
  lp.nvars = 5;
  lp.objective = {7, 2, 4, 2, 1};
  for (std::size_t i = 0; i < A.size(); ++i) {
    LinearProgram::Row row;
    for (std::size_t j = 0; j < 5; ++j)
      if (A[i][j] != 0) row.push_back({j, A[i][j]});
    lp.add_row(row, b[i]);
  }
  EXPECT_NEAR(lp_maximize(lp).value, 14.0, 1e-10);
}

TEST(LinearProgram, DetectsUnbounded) {
  LinearProgram lp;
  lp.nvars = 2;
  lp.objective = {1, 1};
  lp.add_row({{0, 1}}, 1);
  EXPECT_EQ(lp_maximize(lp).status, LpStatus::unbounded);
}

TEST(MaxFlow, AgreesWithEnumeratedCuts) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto net = testsupport::random_p2p(rng, 2 + std::size_t(t % 9), 0.4, t % 4 == 0 ? 0.15 : 0.0);
    const auto& s = net.nodes.front().id;
    const auto& d = net.nodes.back().id;
    const double f = max_flow_sets(net, {s}, {d}).rate, c = testsupport::brute_min_cut(net, s, d);
    if (is_unbounded(c)) {
      EXPECT_TRUE(is_unbounded(f));
    } else {
      EXPECT_NEAR(f, c, 1e-9 * std::max(1.0, c));
    }
  }
}

TEST(MaxFlow, CutWitnessAndFlows) {
  auto n = nodes({"S", "A", "T"});
  n.add_pipe("S", {"A"}, 2.0, "sa");
  n.add_pipe("A", {"T"}, 1.5, "at");
  n.add_pipe("S", {"T"}, 0.5, "st");
  const auto r = max_flow(n, unicast("S", "T"));
  EXPECT_NEAR(r.rate, 2.0, 1e-12);
  EXPECT_NEAR(r.cut.capacity, 2.0, 1e-12);
  EXPECT_NEAR(r.pipe_flow[1], 1.5, 1e-12);
}

TEST(MaxFlow, UnboundedPathAndHyperArcs) {
  auto n = nodes({"S", "A", "T"});
  n.add_pipe("S", {"A"}, kUnbounded, "sa");
  n.add_pipe("A", {"T"}, kUnbounded, "at");
  EXPECT_TRUE(is_unbounded(max_flow(n, unicast("S", "T")).rate));
  n.add_pipe("S", {"A", "T"}, 1.0, "hyper");
  EXPECT_THROW(max_flow(n, unicast("S", "T")), WrongNetworkError);
}

TEST(OuterBounds, SharedBottleneck) {
  auto n = nodes({"S1", "S2", "M", "T1", "T2"});
  n.add_pipe("S1", {"M"}, 3, "a");
  n.add_pipe("S2", {"M"}, 3, "b");
  n.add_pipe("M", {"T1"}, 1, "c");
  n.add_pipe("M", {"T2"}, 1, "d");
  n.add_pipe("S1", {"T1"}, 0.5, "e");
  const auto ob = outer_bounds(n, {unicast("S1", "T1"), unicast("S2", "T2")});
  EXPECT_NEAR(ob.individual[0], 1.5, 1e-12);
  EXPECT_NEAR(ob.individual[1], 1.0, 1e-12);
  EXPECT_NEAR(ob.sum, 2.5, 1e-9);
  EXPECT_NEAR(ob.symmetric, 1.0, 1e-9);
}

TEST(HyperInner, ButterflyNeedsCoding) {
  const auto n = butterfly();
  const std::vector<Demand> d{{DemandKind::multicast, "S", {"T1", "T2"}}};
  const auto r = hyper_inner(n, d, InnerObjective::sum);
  EXPECT_NEAR(r.rates[0], 2.0, 1e-9);
  EXPECT_TRUE(check_inner_witness(n, d, r).empty());
}

TEST(HyperInner, HyperArcCarriesOneMessage) {
  auto n = nodes({"S", "A", "B", "T"});
  n.add_pipe("S", {"A", "B"}, 1.0, "hyper");
  n.add_pipe("A", {"T"}, 1.0, "at");
  n.add_pipe("B", {"T"}, 1.0, "bt");
  const std::vector<Demand> d{unicast("S", "T")};
  const auto r = hyper_inner(n, d, InnerObjective::each);
  EXPECT_NEAR(r.rates[0], 1.0, 1e-9);
  EXPECT_TRUE(check_inner_witness(n, d, r).empty());
}

TEST(HyperInner, JointConstraintLimitsSum) {
  auto n = nodes({"S", "A", "B", "T"});
  n.add_pipe("S", {"A"}, kUnbounded, "sa");
  n.add_pipe("S", {"B"}, kUnbounded, "sb");
  const auto e1 = n.add_pipe("A", {"T"}, 1.0, "at");
  const auto e2 = n.add_pipe("B", {"T"}, 1.0, "bt");
  n.joint.push_back({{e1, e2}, 1.5, "joint at T"});
  const std::vector<Demand> d{unicast("S", "T")};
  const auto r = hyper_inner(n, d, InnerObjective::each);
  EXPECT_NEAR(r.rates[0], 1.5, 1e-9);
  EXPECT_TRUE(check_inner_witness(n, d, r).empty());
}

TEST(HyperInner, TwoSessionsShareCapacity) {
  auto n = nodes({"S1", "S2", "M", "T1", "T2"});
  n.add_pipe("S1", {"M"}, 2, "a");
  n.add_pipe("S2", {"M"}, 2, "b");
  n.add_pipe("M", {"T1", "T2"}, 1, "hyper");
  const std::vector<Demand> d{unicast("S1", "T1"), unicast("S2", "T2")};
  const auto sym = hyper_inner(n, d, InnerObjective::symmetric);
  EXPECT_NEAR(sym.rates[0], 0.5, 1e-9);
  EXPECT_NEAR(sym.rates[1], 0.5, 1e-9);
  const auto first = hyper_inner(n, d, InnerObjective::each, 0);
  EXPECT_NEAR(first.rates[0], 1.0, 1e-9);
  EXPECT_TRUE(check_inner_witness(n, d, sym).empty());
}

TEST(HyperInner, WitnessCheckCatchesTampering) {
  const auto n = butterfly();
  const std::vector<Demand> d{{DemandKind::multicast, "S", {"T1", "T2"}}};
  auto r = hyper_inner(n, d, InnerObjective::sum);
  r.rates[0] += 0.1;
  EXPECT_FALSE(check_inner_witness(n, d, r).empty());
}
