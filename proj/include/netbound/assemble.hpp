#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netbound/bc_models.hpp"
#include "netbound/decouple.hpp"
#include "netbound/mac_models.hpp"
#include "netbound/netmodel.hpp"

namespace netbound {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Keys are indices into Decomposition::components.
struct UpperParams {
  std::map<std::size_t, double> mac_alpha;
  std::map<std::size_t, std::vector<std::size_t>> bc_perm;  // over the component's outputs
};

struct LowerParams {
  std::map<std::size_t, std::vector<double>> bc_betas;         // per layer, weakest receiver first
  std::map<std::size_t, std::vector<std::size_t>> mac_order;  // over the component's inputs; given => successive decoding
};

inline std::string aux_bc(const std::string& tx) { return "~B:" + tx; }
inline std::string aux_mac(const std::string& rx) { return "~M:" + rx; }
inline std::string aux_sic(const std::string& tx, const std::string& rx) { return "~A:" + tx + ">" + rx; }

inline std::vector<std::size_t> order_by_snr(const std::vector<double>& g, bool descending) {
  auto o = ascending_order(g);
  if (descending) std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return g[a] > g[b]; });
  return o;
}

inline UpperParams uniform_upper_params(const Decomposition& dec, double alpha, bool descending) {
  UpperParams p;
  for (std::size_t c = 0; c < dec.components.size(); ++c) {
    const auto& comp = dec.components[c];
    if (comp.kind == ComponentKind::mac) p.mac_alpha[c] = alpha;
    if (comp.kind == ComponentKind::bc) p.bc_perm[c] = order_by_snr(comp.effective, descending);
  }
  return p;
}

inline UpperParams default_upper_params(const Decomposition& dec) { return uniform_upper_params(dec, 1.0, true); }

inline LowerParams default_lower_params(const Decomposition& dec) {
  LowerParams p;
  for (std::size_t c = 0; c < dec.components.size(); ++c)
    if (dec.components[c].kind == ComponentKind::bc) {
      const std::size_t m = dec.components[c].outputs.size();
      p.bc_betas[c] = std::vector<double>(m, 1.0 / double(m));
    }
  return p;
}

inline std::string join(const std::vector<std::string>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

inline NoiselessNetwork terminal_network(const NoisyNetwork& net) {
  NoiselessNetwork out;
  for (const auto& id : net.nodes) out.add_node(id, NodeKind::terminal);
  return out;
}

inline void add_p2p_pipe(NoiselessNetwork& out, const NoisyNetwork& net, const DecoupledComponent& c) {
  const auto& l = net.links[c.links[0]];
  out.add_pipe(l.from, {l.to}, link_capacity(l), std::string("p2p ") + to_string(l.kind) + " link " + l.from + "->" + l.to);
}

inline NoiselessNetwork build_upper(const NoisyNetwork& net, const Decomposition& dec, const UpperParams& params) {
  NoiselessNetwork out = terminal_network(net);
  const auto& comps = dec.components;
  // MAC-side individual rate per link, needed where a BC meets a MAC.
  std::map<std::size_t, double> mac_side;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    if (comp.kind != ComponentKind::mac) continue;
    auto it = params.mac_alpha.find(c);
    if (it == params.mac_alpha.end()) throw ConfigError("build_upper: no noise share for MAC at " + comp.outputs[0]);
    const auto [rates, part] = mac_upper_new(MacSpec{comp.gammas, {}, {}}, it->second);
    const std::string& rx = comp.outputs[0];
    const std::string m = aux_mac(rx);
    out.add_node(m, NodeKind::auxiliary);
    std::ostringstream a;
    a << it->second;
    out.add_pipe(m, {rx}, rates.sum_rate, "mac upper at " + rx + ": sum, noise share " + a.str());
    for (std::size_t k = 0; k < comp.inputs.size(); ++k) {
      mac_side[comp.links[k]] = rates.individual[k];
      if (comp.partner[k] >= 0) continue;
      out.add_pipe(comp.inputs[k], {m}, rates.individual[k], "mac upper at " + rx + ": input " + comp.inputs[k]);
    }
  }
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    if (comp.kind == ComponentKind::p2p) {
      add_p2p_pipe(out, net, comp);
      continue;
    }
    if (comp.kind != ComponentKind::bc) continue;
    auto it = params.bc_perm.find(c);
    if (it == params.bc_perm.end()) throw ConfigError("build_upper: no ordering for BC at " + comp.inputs[0]);
    const auto rates = bc_upper_new(BcSpec{comp.effective, {}, {}}, it->second);
    const std::string& tx = comp.inputs[0];
    const std::string b = aux_bc(tx);
    out.add_node(b, NodeKind::auxiliary);
    out.add_pipe(tx, {b}, rates.sum_rate, "bc upper at " + tx + ": all receivers");
    for (std::size_t j = 0; j < comp.outputs.size(); ++j) {
      const std::string& rx = comp.outputs[j];
      if (comp.partner[j] >= 0) {
        const double r = std::max(rates.individual[j], mac_side.at(comp.links[j]));
        out.add_pipe(b, {aux_mac(rx)}, r, "shared link " + tx + "->" + rx + ": max of bc and mac constraints");
      } else {
        out.add_pipe(b, {rx}, rates.individual[j], "bc upper at " + tx + ": receiver " + rx);
      }
    }
  }
  return out;
}

struct InterferenceLedger {
  using Key = std::pair<std::string, std::string>;  // (input, output)
  std::map<Key, double> undecoded;   // power of messages an output is not meant to decode
  std::map<std::string, double> total;  // per output, sum of undecoded power
  std::map<Key, double> extrinsic;      // interference seen while decoding an input
};

namespace detail {

struct BcLayout {
  std::vector<std::size_t> order;  // component output indices, SNR ascending
  std::vector<std::size_t> pos;    // output index -> position in order
};

inline BcLayout bc_layout(const DecoupledComponent& c) {
  BcLayout l;
  l.order = ascending_order(c.gammas);
  l.pos.assign(c.outputs.size(), 0);
  for (std::size_t p = 0; p < l.order.size(); ++p) l.pos[l.order[p]] = p;
  return l;
}

inline const std::vector<double>& betas_for(const LowerParams& params, std::size_t c, const DecoupledComponent& comp) {
  auto it = params.bc_betas.find(c);
  if (it == params.bc_betas.end()) throw ConfigError("lower model: no power split for BC at " + comp.inputs[0]);
  if (it->second.size() != comp.outputs.size())
    throw ConfigError("lower model: power split for BC at " + comp.inputs[0] + " has wrong length");
  double s = 0;
  for (double b : it->second) {
    if (!(b >= 0)) throw ConfigError("lower model: negative power share at " + comp.inputs[0]);
    s += b;
  }
  if (std::abs(s - 1.0) > 1e-9) throw ConfigError("lower model: power split at " + comp.inputs[0] + " must sum to 1");
  return it->second;
}

inline double tail_sum(const std::vector<double>& b, std::size_t from) {
  double s = 0;
  for (std::size_t t = from; t < b.size(); ++t) s += b[t];
  return s;
}

}  // namespace detail

// Decoding order actually used at a MAC: the given one, or strongest
// remaining signal first.
inline std::vector<std::size_t> mac_decode_order(const Decomposition& dec, std::size_t c, const LowerParams& params,
                                                 const InterferenceLedger* ledger) {
  const auto& comp = dec.components[c];
  auto it = params.mac_order.find(c);
  if (it != params.mac_order.end()) {
    const auto& o = it->second;
    std::vector<bool> seen(comp.inputs.size(), false);
    if (o.size() != comp.inputs.size()) throw ConfigError("decode order at " + comp.outputs[0] + " has wrong length");
    for (auto k : o) {
      if (k >= comp.inputs.size() || seen[k])
        throw ConfigError("decode order at " + comp.outputs[0] + " references an absent input");
      seen[k] = true;
    }
    return o;
  }
  std::vector<double> g = comp.gammas;
  if (ledger)
    for (std::size_t k = 0; k < g.size(); ++k) g[k] -= ledger->undecoded.at({comp.inputs[k], comp.outputs[0]});
  return order_by_snr(g, true);
}

inline InterferenceLedger interference_ledger(const NoisyNetwork& net, const Decomposition& dec,
                                              const LowerParams& params) {
  InterferenceLedger led;
  for (const auto& l : net.links)
    if (is_gaussian(l) && l.snr > 0) {
      led.undecoded[{l.from, l.to}] = 0.0;
      led.total.emplace(l.to, 0.0);
    }
  for (std::size_t c = 0; c < dec.components.size(); ++c) {
    const auto& comp = dec.components[c];
    if (comp.kind != ComponentKind::bc) continue;
    const auto& beta = detail::betas_for(params, c, comp);
    const auto lay = detail::bc_layout(comp);
    for (std::size_t j = 0; j < comp.outputs.size(); ++j)
      led.undecoded[{comp.inputs[0], comp.outputs[j]}] = comp.gammas[j] * detail::tail_sum(beta, lay.pos[j] + 1);
  }
  for (const auto& [key, v] : led.undecoded) led.total[key.second] += v;
  for (const auto& [key, v] : led.undecoded) led.extrinsic[key] = 0.0;
  for (std::size_t c = 0; c < dec.components.size(); ++c) {
    const auto& comp = dec.components[c];
    if (comp.kind != ComponentKind::mac) continue;
    const auto order = mac_decode_order(dec, c, params, &led);
    const std::string& rx = comp.outputs[0];
    for (std::size_t p = 0; p < order.size(); ++p) {
      double v = 0;
      for (std::size_t q = 0; q < order.size(); ++q) {
        if (q == p) continue;
        const auto k = order[q];
        v += q < p ? led.undecoded[{comp.inputs[k], rx}] : comp.gammas[k];
      }
      led.extrinsic[{comp.inputs[order[p]], rx}] = v;
    }
  }
  return led;
}

// Per-input SNR at a MAC after removing undecodable power and treating the
// rest of the undecodable power as noise.
inline std::vector<double> effective_mac_snrs(const DecoupledComponent& comp, const InterferenceLedger& led) {
  std::vector<double> out;
  const std::string& rx = comp.outputs[0];
  const double noise = 1.0 + led.total.at(rx);
  for (std::size_t k = 0; k < comp.inputs.size(); ++k)
    out.push_back((comp.gammas[k] - led.undecoded.at({comp.inputs[k], rx})) / noise);
  return out;
}

inline constexpr std::size_t kMaxJointUsers = 12;

inline NoiselessNetwork build_lower(const NoisyNetwork& net, const Decomposition& dec, const LowerParams& params) {
  NoiselessNetwork out = terminal_network(net);
  const auto& comps = dec.components;
  const auto led = interference_ledger(net, dec, params);

  // MACs decoded successively, keyed by receiver, with the per-input rates.
  std::map<std::string, std::map<std::string, double>> sic_rate;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    if (comp.kind != ComponentKind::mac || !params.mac_order.count(c)) continue;
    const auto order = mac_decode_order(dec, c, params, &led);
    const auto eff = effective_mac_snrs(comp, led);
    const auto r = mac_lower(MacSpec{eff, {}, {}}, order);
    for (std::size_t k = 0; k < comp.inputs.size(); ++k) sic_rate[comp.outputs[0]][comp.inputs[k]] = r.individual[k];
  }
  auto successive = [&](const std::string& rx) { return sic_rate.count(rx) > 0; };

  struct Virtual {
    std::size_t pipe;
    double power;
  };
  std::map<std::string, std::vector<Virtual>> users;  // per receiver, jointly decoded
  std::set<std::pair<std::string, std::string>> sic_aux;

  auto sic_head = [&](const std::string& tx, const std::string& rx) {
    const std::string a = aux_sic(tx, rx);
    if (sic_aux.insert({tx, rx}).second) out.add_node(a, NodeKind::auxiliary);
    return a;
  };

  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    if (comp.kind == ComponentKind::p2p) {
      add_p2p_pipe(out, net, comp);
      continue;
    }
    if (comp.kind == ComponentKind::mac) {
      const std::string& rx = comp.outputs[0];
      const double noise = 1.0 + led.total.at(rx);
      for (std::size_t k = 0; k < comp.inputs.size(); ++k) {
        if (comp.partner[k] >= 0) continue;  // carried by the BC layers of that input
        const std::string& tx = comp.inputs[k];
        if (successive(rx)) {
          out.add_pipe(tx, {rx}, sic_rate[rx][tx], "mac lower at " + rx + ": successive decoding of " + tx);
        } else {
          const auto e = out.add_pipe(tx, {rx}, awgn_capacity(comp.gammas[k] / noise),
                                      "mac lower at " + rx + ": input " + tx);
          users[rx].push_back({e, comp.gammas[k]});
        }
      }
      continue;
    }
    // Superposition layers of a BC.
    const std::string& tx = comp.inputs[0];
    const auto& beta = detail::betas_for(params, c, comp);
    const auto lay = detail::bc_layout(comp);
    const std::size_t m = comp.outputs.size();
    for (std::size_t l = 0; l < m; ++l) {
      if (beta[l] <= 0) continue;
      std::vector<std::string> heads, names;
      double rate = kUnbounded;
      std::vector<std::pair<std::string, double>> joint_at;
      for (std::size_t p = l; p < m; ++p) {
        const std::size_t j = lay.order[p];
        const std::string& rx = comp.outputs[j];
        const double g = comp.gammas[j];
        names.push_back(rx);
        if (successive(rx) && comp.partner[j] >= 0) {
          heads.push_back(sic_head(tx, rx));
          const double pi = led.extrinsic.at({tx, rx});
          rate = std::min(rate, awgn_capacity(g * beta[l] / (1.0 + pi + g * detail::tail_sum(beta, l + 1))));
        } else {
          heads.push_back(rx);
          rate = std::min(rate, awgn_capacity(g * beta[l] / (1.0 + led.total.at(rx))));
          joint_at.push_back({rx, g * beta[l]});
        }
      }
      const auto e = out.add_pipe(tx, heads, rate,
                                  "bc lower at " + tx + ": layer " + std::to_string(l + 1) + " to {" + join(names) + "}");
      for (const auto& [rx, pw] : joint_at) users[rx].push_back({e, pw});
    }
  }
  for (const auto& [tx, rx] : sic_aux)
    out.add_pipe(aux_sic(tx, rx), {rx}, sic_rate[rx][tx], "mac lower at " + rx + ": successive decoding of " + tx);

  for (const auto& [rx, vu] : users) {
    if (vu.size() < 2) continue;
    if (vu.size() > kMaxJointUsers)
      throw ConfigError("build_lower: too many jointly decoded signals at " + rx + "; give a decode order");
    const double noise = 1.0 + led.total.at(rx);
    const std::uint32_t full = (1u << vu.size()) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      if (std::popcount(mask) < 2) continue;
      JointConstraint jc;
      double pw = 0;
      for (std::size_t k = 0; k < vu.size(); ++k)
        if (mask >> k & 1) {
          jc.pipes.push_back(vu[k].pipe);
          pw += vu[k].power;
        }
      jc.cap = awgn_capacity(pw / noise);
      jc.provenance = "joint decoding at " + rx;
      out.joint.push_back(jc);
    }
  }
  return out;
}

}  // namespace netbound
