#pragma once

#include <random>
#include <string>
#include <vector>

#include "netbound/netmodel.hpp"

namespace testsupport {

using netbound::kUnbounded;
using netbound::NoiselessNetwork;

// Minimum over all cuts separating `src` from `dst`, by enumeration.
inline double brute_min_cut(const NoiselessNetwork& net, const std::string& src, const std::string& dst) {
  const std::size_t n = net.nodes.size();
  const auto s = std::size_t(net.node_index(src)), t = std::size_t(net.node_index(dst));
  double best = kUnbounded;
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    if (!(mask >> s & 1) || (mask >> t & 1)) continue;
    double cut = 0;
    for (const auto& p : net.pipes) {
      const auto a = std::size_t(net.node_index(p.tail)), b = std::size_t(net.node_index(p.heads[0]));
      if ((mask >> a & 1) && !(mask >> b & 1)) cut += p.rate;
    }
    best = std::min(best, cut);
  }
  return best;
}

inline NoiselessNetwork random_p2p(std::mt19937_64& rng, std::size_t nodes, double edge_prob, double inf_prob) {
  NoiselessNetwork net;
  for (std::size_t i = 0; i < nodes; ++i) net.add_node("v" + std::to_string(i), netbound::NodeKind::terminal);
  std::uniform_real_distribution<double> u(0, 1), rate(0.1, 5.0);
  for (std::size_t a = 0; a < nodes; ++a)
    for (std::size_t b = 0; b < nodes; ++b)
      if (a != b && u(rng) < edge_prob)
        net.add_pipe(net.nodes[a].id, {net.nodes[b].id}, u(rng) < inf_prob ? kUnbounded : rate(rng), "random");
  return net;
}

// Uniform point on the probability simplex.
inline std::vector<double> simplex_point(std::mt19937_64& rng, std::size_t k) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(k);
  double s = 0;
  for (auto& v : p) s += v = e(rng);
  for (auto& v : p) v /= s;
  return p;
}

}  // namespace testsupport
