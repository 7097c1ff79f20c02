#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "netbound/info.hpp"
#include "netbound/lp.hpp"
#include "netbound/netmodel.hpp"

namespace netbound {

struct WrongNetworkError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Dinic's algorithm on real capacities.
class FlowGraph {
 public:
  explicit FlowGraph(std::size_t n) : adj_(n) {}

  std::size_t add_edge(std::size_t u, std::size_t v, double cap) {
    edges_.push_back({v, cap, 0});
    adj_[u].push_back(edges_.size() - 1);
    edges_.push_back({u, 0, 0});
    adj_[v].push_back(edges_.size() - 1);
    return edges_.size() - 2;
  }

  std::size_t size() const { return adj_.size(); }

  double max_flow(std::size_t s, std::size_t t) {
    double scale = 0;
    for (const auto& e : edges_) scale = std::max(scale, e.cap);
    eps_ = 1e-13 * std::max(1.0, scale);
    double total = 0;
    if (s == t) return kUnbounded;
    while (bfs(s, t)) {
      it_.assign(adj_.size(), 0);
      while (true) {
        const double f = dfs(s, t, std::numeric_limits<double>::infinity());
        if (f <= eps_) break;
        total += f;
      }
    }
    return total;
  }

  // Nodes reachable from s in the residual graph after max_flow.
  std::vector<bool> source_side(std::size_t s) const {
    std::vector<bool> seen(adj_.size(), false);
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto id : adj_[u]) {
        const auto& e = edges_[id];
        if (!seen[e.to] && e.cap - e.flow > eps_) {
          seen[e.to] = true;
          stack.push_back(e.to);
        }
      }
    }
    return seen;
  }

  double flow_on(std::size_t id) const { return std::max(0.0, edges_[id].flow); }

 private:
  struct Edge {
    std::size_t to;
    double cap, flow;
  };
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
  double eps_ = 1e-13;

  bool bfs(std::size_t s, std::size_t t) {
    level_.assign(adj_.size(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (auto id : adj_[u]) {
        const auto& e = edges_[id];
        if (level_[e.to] < 0 && e.cap - e.flow > eps_) {
          level_[e.to] = level_[u] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(std::size_t u, std::size_t t, double pushed) {
    if (u == t) return pushed;
    for (auto& i = it_[u]; i < adj_[u].size(); ++i) {
      const auto id = adj_[u][i];
      auto& e = edges_[id];
      if (level_[e.to] != level_[u] + 1 || e.cap - e.flow <= eps_) continue;
      const double f = dfs(e.to, t, std::min(pushed, e.cap - e.flow));
      if (f > eps_) {
        e.flow += f;
        edges_[id ^ 1].flow -= f;
        return f;
      }
    }
    return 0;
  }
};

struct CutWitness {
  std::vector<std::string> source_side;
  double capacity = 0;
};

struct FlowResult {
  Demand demand;
  double rate = 0;
  CutWitness cut;
  std::vector<double> pipe_flow;  // per pipe (p2p networks)
};

inline void require_p2p(const NoiselessNetwork& net, const char* who) {
  for (const auto& p : net.pipes)
    if (p.heads.size() != 1) throw WrongNetworkError(std::string(who) + ": hyper-arc present (" + p.provenance + ")");
}

inline double finite_total(const NoiselessNetwork& net) {
  double s = 0;
  for (const auto& p : net.pipes)
    if (!is_unbounded(p.rate)) s += p.rate;
  return s;
}

// Max flow between node sets. Sources and sinks are tied to super nodes by
// uncapacitated edges.
inline FlowResult max_flow_sets(const NoiselessNetwork& net, const std::vector<std::string>& sources,
                                const std::vector<std::string>& sinks) {
  require_p2p(net, "max_flow");
  const std::size_t n = net.nodes.size();
  auto index = [&](const std::string& id) {
    const int k = net.node_index(id);
    if (k < 0) throw InputError("max_flow: unknown node '" + id + "'");
    return std::size_t(k);
  };
  FlowResult res;
  // A path of unbounded pipes makes the flow unbounded.
  {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack;
    for (const auto& s : sources) {
      seen[index(s)] = true;
      stack.push_back(index(s));
    }
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (const auto& p : net.pipes) {
        if (!is_unbounded(p.rate) || index(p.tail) != u) continue;
        const auto v = index(p.heads[0]);
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    for (const auto& t : sinks)
      if (seen[index(t)]) {
        res.rate = kUnbounded;
        res.cut.capacity = kUnbounded;
        res.pipe_flow.assign(net.pipes.size(), 0.0);
        return res;
      }
  }
  const double big = finite_total(net) + 1.0;
  FlowGraph g(n + 2);
  const std::size_t S = n, T = n + 1;
  std::vector<std::size_t> ids;
  for (const auto& p : net.pipes)
    ids.push_back(g.add_edge(index(p.tail), index(p.heads[0]), is_unbounded(p.rate) ? big : p.rate));
  const double inf_edge = 4 * big;
  for (const auto& s : sources) g.add_edge(S, index(s), inf_edge);
  for (const auto& t : sinks) g.add_edge(index(t), T, inf_edge);
  res.rate = g.max_flow(S, T);
  const auto side = g.source_side(S);
  for (std::size_t i = 0; i < n; ++i)
    if (side[i]) res.cut.source_side.push_back(net.nodes[i].id);
  for (const auto& p : net.pipes)
    if (side[index(p.tail)] && !side[index(p.heads[0])]) res.cut.capacity += p.rate;
  for (auto id : ids) res.pipe_flow.push_back(g.flow_on(id));
  return res;
}

inline FlowResult max_flow(const NoiselessNetwork& net, const Demand& d) {
  if (d.sinks.size() != 1) throw DomainError("max_flow: unicast demand expected");
  auto r = max_flow_sets(net, {d.source}, {d.sinks[0]});
  r.demand = d;
  return r;
}

inline double multicast_outer(const NoiselessNetwork& net, const Demand& d) {
  double best = kUnbounded;
  for (const auto& t : d.sinks) best = std::min(best, max_flow_sets(net, {d.source}, {t}).rate);
  return best;
}

struct RateConstraint {
  std::vector<std::size_t> demands;
  double cap = 0;
  std::string origin;
};

struct OuterBounds {
  std::vector<double> individual;
  double symmetric = kUnbounded;
  double sum = kUnbounded;
  std::vector<RateConstraint> constraints;
};

namespace detail {

inline std::vector<std::vector<std::size_t>> p2p_adjacency(const NoiselessNetwork& net, int skip) {
  std::vector<std::vector<std::size_t>> adj(net.nodes.size());
  for (std::size_t k = 0; k < net.pipes.size(); ++k) {
    if (int(k) == skip) continue;
    const auto& p = net.pipes[k];
    if (p.rate <= 0) continue;
    for (const auto& h : p.heads) adj[std::size_t(net.node_index(p.tail))].push_back(std::size_t(net.node_index(h)));
  }
  return adj;
}

inline std::vector<bool> reach(const std::vector<std::vector<std::size_t>>& adj, std::size_t s) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> st{s};
  seen[s] = true;
  while (!st.empty()) {
    const auto u = st.back();
    st.pop_back();
    for (auto v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        st.push_back(v);
      }
  }
  return seen;
}

inline bool acyclic(const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<int> indeg(adj.size(), 0);
  for (const auto& a : adj)
    for (auto v : a) indeg[v]++;
  std::vector<std::size_t> q;
  for (std::size_t i = 0; i < adj.size(); ++i)
    if (!indeg[i]) q.push_back(i);
  std::size_t seen = 0;
  while (!q.empty()) {
    const auto u = q.back();
    q.pop_back();
    ++seen;
    for (auto v : adj[u])
      if (--indeg[v] == 0) q.push_back(v);
  }
  return seen == adj.size();
}

// Members of strongly connected components of size one.
inline std::vector<std::size_t> acyclic_members(const std::vector<std::size_t>& items,
                                                const std::vector<std::vector<bool>>& rel) {
  const std::size_t k = items.size();
  // transitive closure, k is small
  auto c = rel;
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < k; ++i)
      if (c[i][m])
        for (std::size_t j = 0; j < k; ++j)
          if (c[m][j]) c[i][j] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) {
    bool cyc = false;
    for (std::size_t j = 0; j < k && !cyc; ++j) cyc = i != j && c[i][j] && c[j][i];
    if (!cyc) out.push_back(items[i]);
  }
  return out;
}

}  // namespace detail

// Cut-based outer bounds on a point-to-point network: per-demand max-flow,
// cuts between demand groups, and single-pipe sharing cuts for unicast
// demands on acyclic networks.
inline OuterBounds outer_bounds(const NoiselessNetwork& net, const std::vector<Demand>& demands) {
  require_p2p(net, "outer_bounds");
  const std::size_t D = demands.size();
  OuterBounds ob;
  auto add = [&](std::vector<std::size_t> ks, double cap, std::string why) {
    if (is_unbounded(cap)) return;
    ob.constraints.push_back({std::move(ks), cap, std::move(why)});
  };
  for (std::size_t d = 0; d < D; ++d)
    for (const auto& t : demands[d].sinks)
      add({d}, max_flow_sets(net, {demands[d].source}, {t}).rate, "max-flow " + demands[d].source + "->" + t);
  if (D >= 2 && D <= 10) {
    for (std::uint32_t mask = 1; mask < (1u << D); ++mask) {
      if (std::popcount(mask) < 2) continue;
      std::vector<std::size_t> ks;
      std::vector<std::string> srcs;
      bool all_unicast = true;
      for (std::size_t d = 0; d < D; ++d)
        if (mask >> d & 1) {
          ks.push_back(d);
          srcs.push_back(demands[d].source);
          all_unicast = all_unicast && demands[d].kind == DemandKind::unicast;
        }
      if (all_unicast) {
        std::vector<std::string> sinks;
        for (auto d : ks) sinks.push_back(demands[d].sinks[0]);
        add(ks, max_flow_sets(net, srcs, sinks).rate, "group cut");
      }
      // sinks shared by every demand of the group
      for (const auto& t : demands[ks[0]].sinks) {
        bool common = true;
        for (auto d : ks)
          common = common && std::find(demands[d].sinks.begin(), demands[d].sinks.end(), t) != demands[d].sinks.end();
        if (common) add(ks, max_flow_sets(net, srcs, {t}).rate, "common-sink cut at " + t);
      }
    }
  }
  const auto full = detail::p2p_adjacency(net, -1);
  if (D >= 2 && detail::acyclic(full)) {
    for (std::size_t e = 0; e < net.pipes.size(); ++e) {
      if (is_unbounded(net.pipes[e].rate)) continue;
      const auto adj = detail::p2p_adjacency(net, int(e));
      std::vector<std::vector<bool>> from(D);
      std::vector<std::size_t> cut;
      for (std::size_t d = 0; d < D; ++d) {
        if (demands[d].kind != DemandKind::unicast) continue;
        from[d] = detail::reach(adj, std::size_t(net.node_index(demands[d].source)));
        if (!from[d][std::size_t(net.node_index(demands[d].sinks[0]))]) cut.push_back(d);
      }
      if (cut.size() < 2) continue;
      std::vector<std::vector<bool>> rel(cut.size(), std::vector<bool>(cut.size(), false));
      for (std::size_t a = 0; a < cut.size(); ++a)
        for (std::size_t b = 0; b < cut.size(); ++b)
          rel[a][b] = a != b && from[cut[a]][std::size_t(net.node_index(demands[cut[b]].sinks[0]))];
      auto ks = detail::acyclic_members(cut, rel);
      if (ks.size() >= 2) add(ks, net.pipes[e].rate, "sharing cut at " + net.pipes[e].provenance);
    }
  }
  ob.individual.assign(D, kUnbounded);
  for (const auto& c : ob.constraints) {
    ob.symmetric = std::min(ob.symmetric, c.cap / double(c.demands.size()));
    for (auto d : c.demands) ob.individual[d] = std::min(ob.individual[d], c.cap);
  }
  if (D == 0) ob.symmetric = 0;
  bool bounded = true;
  for (double v : ob.individual) bounded = bounded && !is_unbounded(v);
  if (!bounded || D == 0) {
    ob.sum = D == 0 ? 0 : kUnbounded;
    return ob;
  }
  LinearProgram lp;
  lp.nvars = D;
  lp.objective.assign(D, 1.0);
  for (const auto& c : ob.constraints) {
    LinearProgram::Row r;
    for (auto d : c.demands) r.push_back({d, 1.0});
    lp.add_row(r, std::max(0.0, c.cap));
  }
  const auto sol = lp_maximize(lp);
  if (sol.status != LpStatus::optimal) throw NumericalError("outer_bounds: sum-rate LP failed");
  ob.sum = sol.value;
  return ob;
}

// ---------------------------------------------------------------------------
// Inner bounds on networks with hyper-arcs.

enum class InnerObjective { each, symmetric, sum };

struct SessionWitness {
  std::vector<double> reserved;  // per pipe: capacity reserved for this session
  // Per sink: flow entering each pipe, and per pipe and head the flow leaving it.
  std::vector<std::vector<double>> into;
  std::vector<std::vector<std::vector<double>>> out;
};

struct InnerResult {
  std::vector<double> rates;
  std::vector<SessionWitness> witness;
  int lp_rounds = 0;
};

inline constexpr double kLpCeiling = 1e6;
inline constexpr double kLpUnboundedMark = 1e5;

namespace detail {

struct SplitFlow {
  double value = 0;
  std::vector<double> into;
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> cut;  // pipes whose reservation edge is cut
};

// Max-flow where each pipe is tail -> hub (capacity u) -> every head.
inline SplitFlow split_max_flow(const NoiselessNetwork& net, const std::vector<double>& u, std::size_t s,
                                std::size_t t, const std::vector<char>& usable) {
  const std::size_t n = net.nodes.size(), P = net.pipes.size();
  FlowGraph g(n + P);
  std::vector<std::size_t> in_id(P, 0);
  std::vector<std::vector<std::size_t>> out_id(P);
  double big = 1.0;
  for (std::size_t e = 0; e < P; ++e)
    if (usable[e]) big += u[e];
  for (std::size_t e = 0; e < P; ++e) {
    if (!usable[e]) continue;
    const auto& p = net.pipes[e];
    in_id[e] = g.add_edge(std::size_t(net.node_index(p.tail)), n + e, u[e]);
    for (const auto& h : p.heads) out_id[e].push_back(g.add_edge(n + e, std::size_t(net.node_index(h)), big));
  }
  SplitFlow r;
  r.value = g.max_flow(s, t);
  const auto side = g.source_side(s);
  r.into.assign(P, 0.0);
  r.out.assign(P, {});
  for (std::size_t e = 0; e < P; ++e) {
    r.out[e].assign(net.pipes[e].heads.size(), 0.0);
    if (!usable[e]) continue;
    r.into[e] = g.flow_on(in_id[e]);
    for (std::size_t h = 0; h < out_id[e].size(); ++h) r.out[e][h] = g.flow_on(out_id[e][h]);
    if (side[std::size_t(net.node_index(net.pipes[e].tail))] && !side[n + e]) r.cut.push_back(e);
  }
  return r;
}

}  // namespace detail

// Checks a witness against the network; returns a list of violations.
inline std::vector<std::string> check_inner_witness(const NoiselessNetwork& net, const std::vector<Demand>& demands,
                                                    const InnerResult& res, double tol = 1e-9) {
  std::vector<std::string> bad;
  const std::size_t P = net.pipes.size(), n = net.nodes.size();
  std::vector<double> load(P, 0.0);
  for (std::size_t s = 0; s < demands.size(); ++s) {
    const auto& w = res.witness[s];
    for (std::size_t e = 0; e < P; ++e) {
      if (w.reserved[e] < -tol) bad.push_back("negative reservation");
      load[e] += w.reserved[e];
    }
    const auto src = std::size_t(net.node_index(demands[s].source));
    for (std::size_t k = 0; k < demands[s].sinks.size(); ++k) {
      const auto snk = std::size_t(net.node_index(demands[s].sinks[k]));
      std::vector<double> bal(n, 0.0);
      for (std::size_t e = 0; e < P; ++e) {
        const double in = w.into[k][e];
        double outsum = 0;
        for (std::size_t h = 0; h < net.pipes[e].heads.size(); ++h) {
          const double f = w.out[k][e][h];
          if (f < -tol) bad.push_back("negative flow");
          outsum += f;
          bal[std::size_t(net.node_index(net.pipes[e].heads[h]))] += f;
        }
        bal[std::size_t(net.node_index(net.pipes[e].tail))] -= in;
        if (in < -tol) bad.push_back("negative flow");
        if (std::abs(in - outsum) > tol) bad.push_back("flow not conserved inside pipe " + net.pipes[e].provenance);
        if (in > w.reserved[e] + tol) bad.push_back("flow exceeds reservation on " + net.pipes[e].provenance);
      }
      for (std::size_t v = 0; v < n; ++v) {
        double want = 0;
        if (v == src) want = -res.rates[s];
        if (v == snk) want = res.rates[s];
        if (v == src && v == snk) want = 0;
        if (is_unbounded(res.rates[s])) continue;
        if (std::abs(bal[v] - want) > tol * std::max(1.0, std::abs(res.rates[s])))
          bad.push_back("conservation violated at " + net.nodes[v].id + " for session " + std::to_string(s));
      }
    }
  }
  for (std::size_t e = 0; e < P; ++e)
    if (!is_unbounded(net.pipes[e].rate) && load[e] > net.pipes[e].rate + tol)
      bad.push_back("capacity exceeded on " + net.pipes[e].provenance);
  for (const auto& j : net.joint) {
    double s = 0;
    for (auto e : j.pipes) s += load[e];
    if (s > j.cap + tol) bad.push_back("joint constraint exceeded: " + j.provenance);
  }
  return bad;
}

// Achievable rates on a network with hyper-arcs. Each session reserves a
// share of every pipe and codes within its share; the rate of a session is
// the smallest max-flow to any of its sinks. `focus` selects the demand for
// InnerObjective::each.
inline InnerResult hyper_inner(const NoiselessNetwork& net, const std::vector<Demand>& demands, InnerObjective obj,
                               std::size_t focus = 0) {
  if (demands.empty()) throw DomainError("hyper_inner: no demands");
  const std::size_t S = demands.size(), P = net.pipes.size(), n = net.nodes.size();
  for (const auto& d : demands)
    if (net.node_index(d.source) < 0) throw InputError("hyper_inner: unknown node '" + d.source + "'");
  // Pipes a session can use: reachable from its source and reaching a sink.
  std::vector<std::vector<std::size_t>> fwd(n), bwd(n);
  for (std::size_t e = 0; e < P; ++e)
    for (const auto& h : net.pipes[e].heads) {
      fwd[std::size_t(net.node_index(net.pipes[e].tail))].push_back(std::size_t(net.node_index(h)));
      bwd[std::size_t(net.node_index(h))].push_back(std::size_t(net.node_index(net.pipes[e].tail)));
    }
  std::vector<std::vector<char>> usable(S, std::vector<char>(P, 0));
  std::vector<std::vector<long>> var(S, std::vector<long>(P, -1));
  LinearProgram lp;
  lp.nvars = S;
  for (std::size_t s = 0; s < S; ++s) {
    const auto src = std::size_t(net.node_index(demands[s].source));
    const auto a = detail::reach(fwd, src);
    std::vector<bool> b(n, false);
    for (const auto& t : demands[s].sinks) {
      const int ti = net.node_index(t);
      if (ti < 0) throw InputError("hyper_inner: unknown node '" + t + "'");
      const auto r = detail::reach(bwd, std::size_t(ti));
      for (std::size_t v = 0; v < n; ++v) b[v] = b[v] || r[v];
    }
    for (std::size_t e = 0; e < P; ++e) {
      const auto& p = net.pipes[e];
      const bool ok = a[std::size_t(net.node_index(p.tail))] && p.rate > 0;
      bool head_ok = false;
      for (const auto& h : p.heads) head_ok = head_ok || b[std::size_t(net.node_index(h))];
      if (ok && head_ok) {
        usable[s][e] = 1;
        var[s][e] = long(lp.nvars++);
      }
    }
  }
  std::size_t tvar = 0;
  if (obj == InnerObjective::symmetric) tvar = lp.nvars++;
  lp.objective.assign(lp.nvars, 0.0);
  if (obj == InnerObjective::each) lp.objective[focus] = 1.0;
  if (obj == InnerObjective::sum)
    for (std::size_t s = 0; s < S; ++s) lp.objective[s] = 1.0;
  if (obj == InnerObjective::symmetric) {
    lp.objective[tvar] = 1.0;
    for (std::size_t s = 0; s < S; ++s) lp.add_row({{tvar, 1.0}, {s, -1.0}}, 0.0);
  }
  for (std::size_t e = 0; e < P; ++e) {
    LinearProgram::Row r;
    for (std::size_t s = 0; s < S; ++s)
      if (var[s][e] >= 0) r.push_back({std::size_t(var[s][e]), 1.0});
    if (r.empty()) continue;
    lp.add_row(r, is_unbounded(net.pipes[e].rate) ? kLpCeiling : net.pipes[e].rate);
  }
  for (const auto& j : net.joint) {
    LinearProgram::Row r;
    for (auto e : j.pipes)
      for (std::size_t s = 0; s < S; ++s)
        if (var[s][e] >= 0) r.push_back({std::size_t(var[s][e]), 1.0});
    if (!r.empty()) lp.add_row(r, j.cap);
  }
  for (std::size_t s = 0; s < S; ++s) lp.add_row({{s, 1.0}}, kLpCeiling);
  std::set<std::pair<std::size_t, std::vector<std::size_t>>> have;
  auto add_cut = [&](std::size_t s, std::vector<std::size_t> pipes) {
    std::sort(pipes.begin(), pipes.end());
    if (!have.insert({s, pipes}).second) return false;
    LinearProgram::Row r{{s, 1.0}};
    for (auto e : pipes)
      if (var[s][e] >= 0) r.push_back({std::size_t(var[s][e]), -1.0});
    lp.add_row(r, 0.0);
    return true;
  };
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<std::size_t> outp;
    for (std::size_t e = 0; e < P; ++e)
      if (usable[s][e] && net.pipes[e].tail == demands[s].source) outp.push_back(e);
    add_cut(s, outp);
    for (const auto& t : demands[s].sinks) {
      std::vector<std::size_t> inp;
      for (std::size_t e = 0; e < P; ++e)
        if (usable[s][e] && std::find(net.pipes[e].heads.begin(), net.pipes[e].heads.end(), t) != net.pipes[e].heads.end())
          inp.push_back(e);
      add_cut(s, inp);
    }
  }
  InnerResult res;
  LpResult sol;
  std::vector<std::vector<double>> u(S, std::vector<double>(P, 0.0));
  for (int round = 0;; ++round) {
    if (round > 2000) throw NumericalError("hyper_inner: cutting planes did not settle");
    sol = lp_maximize(lp);
    if (sol.status != LpStatus::optimal) throw NumericalError("hyper_inner: LP failed");
    res.lp_rounds = round + 1;
    bool added = false;
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t e = 0; e < P; ++e) u[s][e] = var[s][e] >= 0 ? sol.x[std::size_t(var[s][e])] : 0.0;
      const double r = sol.x[s];
      if (r <= 1e-12) continue;
      for (const auto& t : demands[s].sinks) {
        const auto f = detail::split_max_flow(net, u[s], std::size_t(net.node_index(demands[s].source)),
                                              std::size_t(net.node_index(t)), usable[s]);
        if (f.value < r - 1e-9 * std::max(1.0, r)) added = add_cut(s, f.cut) || added;
      }
    }
    if (!added) break;
  }
  res.rates.assign(S, 0.0);
  res.witness.resize(S);
  for (std::size_t s = 0; s < S; ++s) {
    auto& w = res.witness[s];
    w.reserved = u[s];
    const auto src = std::size_t(net.node_index(demands[s].source));
    std::vector<detail::SplitFlow> flows;
    double rate = sol.x[s] <= 1e-12 ? 0.0 : kUnbounded;
    if (rate > 0)
      for (const auto& t : demands[s].sinks) {
        flows.push_back(detail::split_max_flow(net, u[s], src, std::size_t(net.node_index(t)), usable[s]));
        rate = std::min(rate, flows.back().value);
      }
    res.rates[s] = rate >= kLpUnboundedMark ? kUnbounded : rate;
    for (std::size_t k = 0; k < demands[s].sinks.size(); ++k) {
      if (flows.empty()) {
        w.into.push_back(std::vector<double>(P, 0.0));
        std::vector<std::vector<double>> o;
        for (const auto& p : net.pipes) o.push_back(std::vector<double>(p.heads.size(), 0.0));
        w.out.push_back(o);
        continue;
      }
      auto f = flows[k];
      const double scale = f.value > 0 && !is_unbounded(res.rates[s]) ? rate / f.value : 1.0;
      for (auto& v : f.into) v *= scale;
      for (auto& o : f.out)
        for (auto& v : o) v *= scale;
      w.into.push_back(f.into);
      w.out.push_back(f.out);
    }
  }
  return res;
}

}  // namespace netbound
