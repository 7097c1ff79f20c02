#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netbound/info.hpp"
#include "netbound/netmodel.hpp"

namespace netbound {

struct GaussPartition {
  Table alphas;                 // alphas[i][j], zero where input i does not reach output j
  std::vector<double> lambdas;  // per output
  std::vector<double> mus;      // per input
  double residual = 0;
  int iterations = 0;
  std::vector<double> history;  // residual after each iteration
};

struct PartitionNoConvergence : NumericalError {
  double residual;
  explicit PartitionNoConvergence(double r)
      : NumericalError("gauss_noise_partition: no convergence, residual " + std::to_string(r)), residual(r) {}
};

enum class PartitionMethod { accelerated, plain };

namespace detail {

struct PartitionMaps {
  const Table& g;
  std::size_t n, m;

  // Square roots of lambda for the given log-mu.
  std::vector<double> sqrt_lambda(const std::vector<double>& x) const {
    std::vector<double> sl(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double smu = std::exp(0.5 * x[i]);
      for (std::size_t j = 0; j < m; ++j)
        if (g[i][j] > 0) sl[j] += std::sqrt(g[i][j]) / smu;
    }
    return sl;
  }

  std::vector<double> step(const std::vector<double>& x) const {
    const auto sl = sqrt_lambda(x);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < m; ++j)
        if (g[i][j] > 0) s += std::sqrt(g[i][j]) * sl[j];
      const double smu = 0.5 * (s + std::sqrt(s * s + 4.0));
      out[i] = 2.0 * std::log(smu);
    }
    return out;
  }

  std::vector<double> defect(const std::vector<double>& x) const {
    auto t = step(x);
    for (std::size_t i = 0; i < n; ++i) t[i] -= x[i];
    return t;
  }
};

inline double max_abs(const std::vector<double>& v) {
  double r = 0;
  for (double a : v) r = std::max(r, std::abs(a));
  return r;
}

}  // namespace detail

// Splits each output's unit noise among the inputs that reach it so that
// sum_i log2(1 + sum_j g_ij / a_ij) is minimal. Works on log(mu) as the
// iteration variable.
inline GaussPartition gauss_noise_partition(const Table& gamma, double tol = 1e-12,
                                            PartitionMethod method = PartitionMethod::accelerated,
                                            int max_iter = 10000) {
  const std::size_t n = gamma.size();
  if (n == 0) throw DomainError("gauss_noise_partition: empty matrix");
  const std::size_t m = gamma[0].size();
  for (const auto& row : gamma) {
    if (row.size() != m) throw DomainError("gauss_noise_partition: ragged matrix");
    for (double v : row)
      if (!(v >= 0) || !std::isfinite(v)) throw DomainError("gauss_noise_partition: SNRs must be finite and >= 0");
  }
  for (std::size_t j = 0; j < m; ++j) {
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) any = any || gamma[i][j] > 0;
    if (!any) throw DomainError("gauss_noise_partition: output " + std::to_string(j) + " has no input");
  }
  detail::PartitionMaps maps{gamma, n, m};
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::log(1.0 + std::accumulate(gamma[i].begin(), gamma[i].end(), 0.0));

  GaussPartition out;
  auto f = maps.defect(x);
  double res = detail::max_abs(f);
  int it = 0;
  while (res >= tol) {
    if (++it > max_iter) throw PartitionNoConvergence(res);
    bool moved = false;
    if (method == PartitionMethod::accelerated) {
      Eigen::MatrixXd jac(n, n);
      for (std::size_t k = 0; k < n; ++k) {
        auto xh = x;
        const double h = 1e-7 * std::max(1.0, std::abs(x[k]));
        xh[k] += h;
        const auto fh = maps.defect(xh);
        for (std::size_t i = 0; i < n; ++i) jac(Eigen::Index(i), Eigen::Index(k)) = (fh[i] - f[i]) / h;
      }
      Eigen::VectorXd rhs(n);
      for (std::size_t i = 0; i < n; ++i) rhs(Eigen::Index(i)) = -f[i];
      const Eigen::VectorXd d = jac.colPivHouseholderQr().solve(rhs);
      double t = 1.0;
      for (int tries = 0; tries < 3 && d.allFinite(); ++tries, t *= 0.5) {
        std::vector<double> xt(n);
        for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + t * d(Eigen::Index(i));
        const auto ft = maps.defect(xt);
        const double rt = detail::max_abs(ft);
        if (rt < res) {
          x = xt;
          f = ft;
          res = rt;
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      for (std::size_t i = 0; i < n; ++i) x[i] += f[i];
      f = maps.defect(x);
      res = detail::max_abs(f);
    }
    out.history.push_back(res);
  }
  out.iterations = it;
  out.residual = res;
  const auto sl = maps.sqrt_lambda(x);
  out.mus.resize(n);
  out.lambdas.resize(m);
  for (std::size_t i = 0; i < n; ++i) out.mus[i] = std::exp(x[i]);
  for (std::size_t j = 0; j < m; ++j) out.lambdas[j] = sl[j] * sl[j];
  out.alphas.assign(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (gamma[i][j] > 0) out.alphas[i][j] = std::sqrt(gamma[i][j]) / (sl[j] * std::exp(0.5 * x[i]));
  return out;
}

inline double partition_objective(const Table& gamma, const Table& alphas) {
  double v = 0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < gamma[i].size(); ++j)
      if (gamma[i][j] > 0) s += gamma[i][j] / alphas[i][j];
    v += std::log2(1.0 + s);
  }
  return v;
}

inline Table decoupled_bc_snrs(const GaussPartition& p, const Table& gamma) {
  Table out(gamma.size(), std::vector<double>(gamma.empty() ? 0 : gamma[0].size(), 0.0));
  for (std::size_t i = 0; i < gamma.size(); ++i)
    for (std::size_t j = 0; j < gamma[i].size(); ++j)
      if (gamma[i][j] > 0) out[i][j] = gamma[i][j] / p.alphas[i][j];
  return out;
}

// Share of the destination noise given to the source's direct link in a
// relay channel.
inline double relay_alpha_closed_form(double g_sd, double g_sr, double g_rd) {
  const double a = std::sqrt(g_sd * (1.0 + g_rd));
  const double b = std::sqrt(g_rd * (1.0 + g_sr + g_sd));
  return a / (a + b);
}

enum class ComponentKind { p2p, mac, bc };

inline const char* to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::p2p: return "p2p";
    case ComponentKind::mac: return "mac";
    case ComponentKind::bc: return "bc";
  }
  return "?";
}

struct DecoupledComponent {
  ComponentKind kind = ComponentKind::p2p;
  bool coupled = false;  // a view taken out of a coupled group
  std::size_t group = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  // Per link, aligned with inputs for a MAC and with outputs for a BC.
  std::vector<std::size_t> links;
  std::vector<double> gammas;
  std::vector<double> effective;
  std::vector<int> partner;  // component holding the other view of a shared link, or -1
};

struct LinkGroup {
  std::vector<std::size_t> links;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  bool coupled = false;
  GaussPartition partition;  // filled for coupled groups
  Table gamma;               // inputs x outputs
};

struct Decomposition {
  std::vector<DecoupledComponent> components;
  std::vector<LinkGroup> groups;
};

inline Decomposition decompose(const NoisyNetwork& net) {
  Decomposition out;
  const auto& links = net.links;
  std::map<std::string, int> indeg;
  for (const auto& l : links) indeg[l.to]++;
  std::vector<std::size_t> gauss;
  for (std::size_t k = 0; k < links.size(); ++k) {
    const auto& l = links[k];
    if (!is_gaussian(l)) {
      if (indeg[l.to] != 1)
        throw InputError("links[" + std::to_string(k) + "]: discrete link inside coupled component at '" + l.to + "'");
    }
    if (is_gaussian(l) && l.snr > 0) {
      gauss.push_back(k);
      continue;
    }
    LinkGroup grp;
    grp.links = {k};
    grp.inputs = {l.from};
    grp.outputs = {l.to};
    out.groups.push_back(grp);
  }
  // Union-find over transmitter and receiver roles.
  std::map<std::string, int> tx_id, rx_id;
  for (auto k : gauss) {
    tx_id.emplace(links[k].from, int(tx_id.size()));
    rx_id.emplace(links[k].to, 0);
  }
  int next = int(tx_id.size());
  for (auto& [name, id] : rx_id) id = next++;
  std::vector<int> parent(static_cast<std::size_t>(next));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[std::size_t(a)] != a) a = parent[std::size_t(a)] = parent[std::size_t(parent[std::size_t(a)])];
    return a;
  };
  for (auto k : gauss) parent[std::size_t(find(tx_id[links[k].from]))] = find(rx_id[links[k].to]);
  std::map<int, std::size_t> root_group;
  for (auto k : gauss) {
    const int r = find(tx_id[links[k].from]);
    auto it = root_group.find(r);
    if (it == root_group.end()) {
      it = root_group.emplace(r, out.groups.size()).first;
      out.groups.emplace_back();
    }
    out.groups[it->second].links.push_back(k);
  }
  for (auto& grp : out.groups) {
    if (grp.links.size() == 1 && grp.inputs.size() == 1) continue;  // orthogonal p2p already filled
    for (auto k : grp.links) {
      if (std::find(grp.inputs.begin(), grp.inputs.end(), links[k].from) == grp.inputs.end())
        grp.inputs.push_back(links[k].from);
      if (std::find(grp.outputs.begin(), grp.outputs.end(), links[k].to) == grp.outputs.end())
        grp.outputs.push_back(links[k].to);
    }
    grp.coupled = grp.inputs.size() > 1 && grp.outputs.size() > 1;
  }

  auto idx = [](const std::vector<std::string>& v, const std::string& s) {
    return std::size_t(std::find(v.begin(), v.end(), s) - v.begin());
  };
  for (std::size_t gi = 0; gi < out.groups.size(); ++gi) {
    auto& grp = out.groups[gi];
    const auto& first = links[grp.links[0]];
    auto snr = [&](std::size_t k) { return is_gaussian(links[k]) ? links[k].snr : 0.0; };
    if (grp.links.size() == 1) {
      DecoupledComponent c;
      c.kind = ComponentKind::p2p;
      c.group = gi;
      c.inputs = {first.from};
      c.outputs = {first.to};
      c.links = {grp.links[0]};
      c.gammas = c.effective = {snr(grp.links[0])};
      c.partner = {-1};
      out.components.push_back(c);
      continue;
    }
    if (!grp.coupled) {
      DecoupledComponent c;
      c.kind = grp.outputs.size() == 1 ? ComponentKind::mac : ComponentKind::bc;
      c.group = gi;
      c.inputs = grp.inputs;
      c.outputs = grp.outputs;
      for (const auto& name : c.kind == ComponentKind::mac ? grp.inputs : grp.outputs)
        for (auto k : grp.links)
          if ((c.kind == ComponentKind::mac ? links[k].from : links[k].to) == name) {
            c.links.push_back(k);
            c.gammas.push_back(links[k].snr);
          }
      c.effective = c.gammas;
      c.partner.assign(c.links.size(), -1);
      out.components.push_back(c);
      continue;
    }
    grp.gamma.assign(grp.inputs.size(), std::vector<double>(grp.outputs.size(), 0.0));
    for (auto k : grp.links) grp.gamma[idx(grp.inputs, links[k].from)][idx(grp.outputs, links[k].to)] = links[k].snr;
    grp.partition = gauss_noise_partition(grp.gamma);
    std::map<std::string, int> outdeg, in_g;
    for (auto k : grp.links) {
      outdeg[links[k].from]++;
      in_g[links[k].to]++;
    }
    std::map<std::size_t, int> mac_of, bc_of;  // link -> component
    for (const auto& rx : grp.outputs) {
      if (in_g[rx] < 2) continue;
      DecoupledComponent c;
      c.kind = ComponentKind::mac;
      c.coupled = true;
      c.group = gi;
      c.outputs = {rx};
      for (auto k : grp.links)
        if (links[k].to == rx) {
          c.inputs.push_back(links[k].from);
          c.links.push_back(k);
          c.gammas.push_back(links[k].snr);
          mac_of[k] = int(out.components.size());
        }
      c.effective = c.gammas;
      c.partner.assign(c.links.size(), -1);
      out.components.push_back(c);
    }
    for (const auto& tx : grp.inputs) {
      if (outdeg[tx] < 2) continue;
      DecoupledComponent c;
      c.kind = ComponentKind::bc;
      c.coupled = true;
      c.group = gi;
      c.inputs = {tx};
      const std::size_t i = idx(grp.inputs, tx);
      for (auto k : grp.links)
        if (links[k].from == tx) {
          const std::size_t j = idx(grp.outputs, links[k].to);
          c.outputs.push_back(links[k].to);
          c.links.push_back(k);
          c.gammas.push_back(links[k].snr);
          c.effective.push_back(links[k].snr / grp.partition.alphas[i][j]);
          bc_of[k] = int(out.components.size());
        }
      c.partner.assign(c.links.size(), -1);
      out.components.push_back(c);
    }
    for (auto& [k, b] : bc_of) {
      auto it = mac_of.find(k);
      if (it == mac_of.end()) continue;
      auto& bc = out.components[std::size_t(b)];
      auto& mac = out.components[std::size_t(it->second)];
      bc.partner[idx(bc.outputs, links[k].to)] = it->second;
      mac.partner[idx(mac.inputs, links[k].from)] = b;
    }
  }
  return out;
}

}  // namespace netbound
