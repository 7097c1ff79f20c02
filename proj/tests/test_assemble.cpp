#include <gtest/gtest.h>

#include <cmath>

#include "netbound/assemble.hpp"
#include "netbound/experiments.hpp"
#include "netbound/flowcalc.hpp"

using namespace netbound;

namespace {

std::size_t component(const Decomposition& d, ComponentKind k) {
  for (std::size_t c = 0; c < d.components.size(); ++c)
    if (d.components[c].kind == k) return c;
  return d.components.size();
}

const BitPipe* find_pipe(const NoiselessNetwork& n, const std::string& tail, const std::string& head) {
  for (const auto& p : n.pipes)
    if (p.tail == tail && p.heads.size() == 1 && p.heads[0] == head) return &p;
  return nullptr;
}

}  // namespace

TEST(BuildUpper, SingleLinkIsOnePipe) {
  NoisyNetwork net;
  net.nodes = {"A", "B"};
  net.links = {{"A", "B", LinkKind::awgn, 3, 0, 0, 0}};
  const auto dec = decompose(net);
  const auto up = build_upper(net, dec, default_upper_params(dec));
  ASSERT_EQ(up.pipes.size(), 1u);
  EXPECT_DOUBLE_EQ(up.pipes[0].rate, 1.0);
}

TEST(BuildUpper, RelayTopology) {
  const auto net = relay_network(1, 10, 10);
  const auto dec = decompose(net);
  const auto up = build_upper(net, dec, uniform_upper_params(dec, 0.5, true));
  EXPECT_TRUE(validate_bounding_network(up, Role::upper).empty());
  ASSERT_EQ(up.pipes.size(), 5u);
  const double a = relay_alpha_closed_form(1, 10, 10);
  // broadcast side, strongest effective receiver first
  const auto* s = find_pipe(up, "S", aux_bc("S"));
  ASSERT_NE(s, nullptr);
  const double strong = std::max(10.0, 1.0 / a), weak = std::min(10.0, 1.0 / a);
  EXPECT_NEAR(s->rate, awgn_capacity(strong + weak), 1e-9);
  const auto* br = find_pipe(up, aux_bc("S"), "R");
  ASSERT_NE(br, nullptr);
  EXPECT_NEAR(br->rate, awgn_capacity(10.0 > 1.0 / a ? 10.0 : 10.0 + 1.0 / a), 1e-9);
  // multiple-access side at noise share 0.5
  const auto [mac, part] = mac_upper_new(MacSpec{{1, 10}, {}, {}}, 0.5);
  const auto* md = find_pipe(up, aux_mac("D"), "D");
  ASSERT_NE(md, nullptr);
  EXPECT_NEAR(md->rate, mac.sum_rate, 1e-12);
  const auto* rm = find_pipe(up, "R", aux_mac("D"));
  ASSERT_NE(rm, nullptr);
  EXPECT_NEAR(rm->rate, mac.individual[1], 1e-12);
  const auto* shared = find_pipe(up, aux_bc("S"), aux_mac("D"));
  ASSERT_NE(shared, nullptr);
  const double bc_d = awgn_capacity(1.0 / a > 10.0 ? 1.0 / a : 10.0 + 1.0 / a);
  EXPECT_NEAR(shared->rate, std::max(bc_d, mac.individual[0]), 1e-9);
}

TEST(BuildUpper, LayeredBottleneckAlwaysPresent) {
  const double g = 1.5;
  const auto net = layered_network(4, g);
  const auto dec = decompose(net);
  for (double a : {0.0, 0.3, 1.0}) {
    const auto up = build_upper(net, dec, uniform_upper_params(dec, a, true));
    const auto* p = find_pipe(up, "S4", "R1");
    ASSERT_NE(p, nullptr);
    EXPECT_NEAR(p->rate, awgn_capacity(g), 1e-12);
  }
}

TEST(BuildUpper, MissingParametersRaise) {
  const auto net = relay_network(1, 10, 10);
  const auto dec = decompose(net);
  EXPECT_THROW(build_upper(net, dec, UpperParams{}), ConfigError);
  EXPECT_THROW(build_lower(net, dec, LowerParams{}), ConfigError);
}

TEST(InterferenceLedger, RelayHalfPowerOnRelayLayer) {
  const auto net = relay_network(1, 10, 10);
  const auto dec = decompose(net);
  const auto bc = component(dec, ComponentKind::bc), mac = component(dec, ComponentKind::mac);
  LowerParams p;
  p.bc_betas[bc] = {0.5, 0.5};
  p.mac_order[mac] = {1, 0};  // relay first, then the source
  const auto& mc = dec.components[mac];
  ASSERT_EQ(mc.inputs, (std::vector<std::string>{"S", "R"}));
  const auto led = interference_ledger(net, dec, p);
  EXPECT_NEAR(led.undecoded.at({"S", "D"}), 0.5, 1e-15);
  EXPECT_NEAR(led.total.at("D"), 0.5, 1e-15);
  const auto eff = effective_mac_snrs(mc, led);
  EXPECT_NEAR(eff[0], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(eff[1], 10.0 / 1.5, 1e-12);
  EXPECT_NEAR(mac_lower(MacSpec{eff, {}, {}}, {1, 0}).sum_rate, 1.5, 1e-12);
  const auto low = build_lower(net, dec, p);
  EXPECT_TRUE(validate_bounding_network(low, Role::lower).empty());
}

TEST(InterferenceLedger, AllDecodedMeansNoInterference) {
  const auto net = relay_network(1, 10, 10);
  const auto dec = decompose(net);
  LowerParams p;
  p.bc_betas[component(dec, ComponentKind::bc)] = {1.0, 0.0};
  const auto led = interference_ledger(net, dec, p);
  for (const auto& [k, v] : led.undecoded) EXPECT_EQ(v, 0.0);
  for (const auto& [k, v] : led.total) EXPECT_EQ(v, 0.0);
}

TEST(InterferenceLedger, PureInterferer) {
  NoisyNetwork net;
  net.nodes = {"T", "U", "R1", "R2"};
  net.links = {{"T", "R1", LinkKind::awgn, 1, 0, 0, 0},
               {"T", "R2", LinkKind::awgn, 5, 0, 0, 0},
               {"U", "R1", LinkKind::awgn, 2, 0, 0, 0}};
  const auto dec = decompose(net);
  LowerParams p;
  p.bc_betas[component(dec, ComponentKind::bc)] = {0.0, 1.0};  // only the strong receiver decodes T
  const auto led = interference_ledger(net, dec, p);
  EXPECT_NEAR(led.total.at("R1"), 1.0, 1e-15);
  EXPECT_NEAR(led.total.at("R2"), 0.0, 1e-15);
}

TEST(BuildLower, RelayLayerRatesAndJointRegion) {
  const auto net = relay_network(1, 10, 10);
  const auto dec = decompose(net);
  LowerParams p;
  p.bc_betas[component(dec, ComponentKind::bc)] = {0.5, 0.5};
  const auto low = build_lower(net, dec, p);
  // layer 1 reaches D and R; at D the undecoded half of the source power is noise
  const BitPipe* common = nullptr;
  for (const auto& e : low.pipes)
    if (e.heads.size() == 2) common = &e;
  ASSERT_NE(common, nullptr);
  EXPECT_NEAR(common->rate, std::min(awgn_capacity(0.5 / 1.5), awgn_capacity(5.0 / 1.0)), 1e-12);
  // one joint constraint at D (layer 1 with the relay) and one at R (both layers)
  ASSERT_EQ(low.joint.size(), 2u);
  for (const auto& j : low.joint) {
    const double want = j.provenance == "joint decoding at D" ? awgn_capacity(10.5 / 1.5) : awgn_capacity(10.0);
    EXPECT_NEAR(j.cap, want, 1e-12) << j.provenance;
  }
}

TEST(BuildLower, WeakRelayIsSwitchedOff) {
  const auto net = relay_network(1, 0.5, 10);
  const auto dec = decompose(net);
  LowerParams p;
  // all power to the strongest receiver, which is D
  p.bc_betas[component(dec, ComponentKind::bc)] = {0.0, 1.0};
  const auto low = build_lower(net, dec, p);
  const auto r = hyper_inner(low, net.demands, InnerObjective::each);
  EXPECT_NEAR(r.rates[0], 0.5, 1e-9);
}
