#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "netbound/assemble.hpp"
#include "netbound/bc_models.hpp"
#include "netbound/decouple.hpp"
#include "netbound/flowcalc.hpp"
#include "netbound/netmodel.hpp"

namespace netbound {

struct Run {
  std::string params;
  std::vector<double> values;  // one per metric
};

struct MetricBound {
  std::string name;
  double outer = kUnbounded;
  std::string outer_params;
  double inner = 0;
  std::string inner_params;
};

struct BoundReport {
  std::vector<MetricBound> metrics;
  std::vector<std::array<double, 2>> hull;  // inner region vertices for two demands
};

inline BoundReport combine_bounds(const std::vector<std::string>& names, const std::vector<Run>& outer_runs,
                                  const std::vector<Run>& inner_runs) {
  BoundReport rep;
  for (const auto& n : names) rep.metrics.push_back({n, kUnbounded, "", 0.0, ""});
  for (const auto& r : outer_runs) {
    if (r.values.size() != names.size()) throw DomainError("combine_bounds: run has a different demand set");
    for (std::size_t k = 0; k < names.size(); ++k) {
      auto& m = rep.metrics[k];
      if (std::isnan(r.values[k])) continue;
      if (m.outer_params.empty() || r.values[k] < m.outer) {
        m.outer = r.values[k];
        m.outer_params = r.params;
      }
    }
  }
  for (const auto& r : inner_runs) {
    if (r.values.size() != names.size()) throw DomainError("combine_bounds: run has a different demand set");
    for (std::size_t k = 0; k < names.size(); ++k) {
      auto& m = rep.metrics[k];
      if (std::isnan(r.values[k])) continue;
      if (m.inner_params.empty() || r.values[k] > m.inner) {
        m.inner = r.values[k];
        m.inner_params = r.params;
      }
    }
  }
  return rep;
}

// Vertices of the upper-right concave envelope of achievable rate pairs
// (together with the axes projections), sorted by the first coordinate.
inline std::vector<std::array<double, 2>> rate_region_hull(std::vector<std::array<double, 2>> pts) {
  std::vector<std::array<double, 2>> all{{0, 0}};
  for (const auto& p : pts) {
    all.push_back(p);
    all.push_back({p[0], 0});
    all.push_back({0, p[1]});
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<std::array<double, 2>> h;
  auto cross = [](const std::array<double, 2>& o, const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  for (const auto& p : all) {  // upper hull, left to right
    while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), p) >= 0) h.pop_back();
    h.push_back(p);
  }
  return h;
}

struct SearchOptions {
  std::vector<double> alpha_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  bool both_orientations = true;
  int beta_steps = 8;
  std::size_t full_search_limit = 512;
  // Same power split for every BC (for example all power on the common layer).
  std::optional<std::vector<double>> fixed_betas;
  // Metric names to evaluate; empty means every demand, "symmetric" and "sum".
  std::vector<std::string> metrics;
  bool hull = false;
};

inline std::vector<std::string> metric_names(const std::vector<Demand>& demands) {
  std::vector<std::string> n;
  for (const auto& d : demands) n.push_back(describe(d));
  n.push_back("symmetric");
  n.push_back("sum");
  return n;
}

inline std::vector<std::vector<double>> beta_candidates(std::size_t m, int steps) {
  if (m <= 3) return simplex_grid(m, steps);
  std::vector<std::vector<double>> out;
  std::vector<double> e1(m, 0.0);
  e1[0] = 1.0;
  out.push_back(e1);
  for (std::size_t l = 1; l < m; ++l)
    for (int k = 1; k <= steps; ++k) {
      auto b = e1;
      const double w = double(k) / steps;
      b[0] = 1.0 - w;
      b[l] = w;
      out.push_back(b);
    }
  return out;
}

inline std::string format_betas(const std::vector<double>& b) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < b.size(); ++i) os << (i ? " " : "") << b[i];
  os << ")";
  return os.str();
}

struct PipelineResult {
  Decomposition decomposition;
  BoundReport report;
  std::vector<std::string> names;
  std::vector<Run> outer_runs;
  std::vector<Run> inner_runs;
};

inline std::vector<double> outer_values(const OuterBounds& ob) {
  std::vector<double> v = ob.individual;
  v.push_back(ob.symmetric);
  v.push_back(ob.sum);
  return v;
}

inline std::vector<Run> upper_runs(const NoisyNetwork& net, const Decomposition& dec, const SearchOptions& opt) {
  bool has_mac = false, has_bc = false;
  for (const auto& c : dec.components) {
    has_mac = has_mac || c.kind == ComponentKind::mac;
    has_bc = has_bc || c.kind == ComponentKind::bc;
  }
  const std::vector<double> alphas = has_mac ? opt.alpha_grid : std::vector<double>{1.0};
  std::vector<bool> orient{true};
  if (has_bc && opt.both_orientations) orient.push_back(false);
  std::vector<Run> runs;
  for (double a : alphas)
    for (bool desc : orient) {
      const auto up = build_upper(net, dec, uniform_upper_params(dec, a, desc));
      std::ostringstream os;
      os << "alpha=" << a << " order=" << (desc ? "descending" : "ascending");
      runs.push_back({os.str(), outer_values(outer_bounds(up, net.demands))});
    }
  return runs;
}

class LowerSearch {
 public:
  LowerSearch(const NoisyNetwork& net, const Decomposition& dec, const SearchOptions& opt)
      : net_(net), dec_(dec), opt_(opt) {
    for (std::size_t c = 0; c < dec.components.size(); ++c)
      if (dec.components[c].kind == ComponentKind::bc) {
        bcs_.push_back(c);
        const std::size_t m = dec.components[c].outputs.size();
        if (opt.fixed_betas) {
          std::vector<double> b(m, 0.0);
          for (std::size_t l = 0; l < m && l < opt.fixed_betas->size(); ++l) b[l] = (*opt.fixed_betas)[l];
          cand_.push_back({b});
        } else {
          cand_.push_back(beta_candidates(m, opt.beta_steps));
        }
      }
  }

  // Best value of one metric and the choice that gives it.
  std::pair<double, std::vector<std::size_t>> best(std::size_t metric) {
    std::size_t product = 1;
    for (const auto& c : cand_) {
      product *= c.size();
      if (product > opt_.full_search_limit) break;
    }
    std::vector<std::size_t> choice(bcs_.size(), 0);
    double bestv = value(choice, metric);
    auto bestc = choice;
    if (product <= opt_.full_search_limit) {
      for (;;) {
        std::size_t k = 0;
        while (k < choice.size() && ++choice[k] == cand_[k].size()) choice[k++] = 0;
        if (k == choice.size()) break;
        const double v = value(choice, metric);
        if (v > bestv + 1e-12) {
          bestv = v;
          bestc = choice;
        }
      }
      return {bestv, bestc};
    }
    // Coordinate ascent from all power on the common layer.
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t b = 0; b < bcs_.size(); ++b) {
        auto trial = bestc;
        for (std::size_t k = 0; k < cand_[b].size(); ++k) {
          trial[b] = k;
          const double v = value(trial, metric);
          if (v > bestv + 1e-12) {
            bestv = v;
            bestc = trial;
            improved = true;
          }
        }
      }
    }
    return {bestv, bestc};
  }

  LowerParams params(const std::vector<std::size_t>& choice) const {
    LowerParams p;
    for (std::size_t b = 0; b < bcs_.size(); ++b) p.bc_betas[bcs_[b]] = cand_[b][choice[b]];
    return p;
  }

  std::string describe_choice(const std::vector<std::size_t>& choice) const {
    std::string s;
    for (std::size_t b = 0; b < bcs_.size(); ++b)
      s += (b ? " " : "") + std::string("beta[") + dec_.components[bcs_[b]].inputs[0] +
           "]=" + format_betas(cand_[b][choice[b]]);
    return s.empty() ? "no broadcast" : s;
  }

  double value(const std::vector<std::size_t>& choice, std::size_t metric) {
    auto& slot = cache_[choice];
    auto it = slot.find(metric);
    if (it != slot.end()) return it->second;
    if (!built_.count(choice)) built_[choice] = build_lower(net_, dec_, params(choice));
    const auto& low = built_[choice];
    const std::size_t D = net_.demands.size();
    InnerObjective obj = metric < D ? InnerObjective::each : metric == D ? InnerObjective::symmetric : InnerObjective::sum;
    const auto res = hyper_inner(low, net_.demands, obj, metric < D ? metric : 0);
    double v = 0;
    if (obj == InnerObjective::each) v = res.rates[metric];
    if (obj == InnerObjective::symmetric) v = *std::min_element(res.rates.begin(), res.rates.end());
    if (obj == InnerObjective::sum)
      for (double r : res.rates) v += r;
    points_.push_back(res.rates);
    slot[metric] = v;
    return v;
  }

  const std::vector<std::vector<double>>& points() const { return points_; }

 private:
  const NoisyNetwork& net_;
  const Decomposition& dec_;
  const SearchOptions& opt_;
  std::vector<std::size_t> bcs_;
  std::vector<std::vector<std::vector<double>>> cand_;
  std::map<std::vector<std::size_t>, std::map<std::size_t, double>> cache_;
  std::map<std::vector<std::size_t>, NoiselessNetwork> built_;
  std::vector<std::vector<double>> points_;
};

inline PipelineResult compute_bounds(const NoisyNetwork& net, const SearchOptions& opt = {}) {
  if (net.demands.empty()) throw InputError("no demands to evaluate");
  PipelineResult out;
  out.decomposition = decompose(net);
  out.names = metric_names(net.demands);
  std::vector<bool> wanted(out.names.size(), opt.metrics.empty());
  for (const auto& m : opt.metrics) {
    auto it = std::find(out.names.begin(), out.names.end(), m);
    if (it == out.names.end()) throw InputError("unknown metric '" + m + "'");
    wanted[std::size_t(it - out.names.begin())] = true;
  }
  out.outer_runs = upper_runs(net, out.decomposition, opt);
  LowerSearch search(net, out.decomposition, opt);
  for (std::size_t k = 0; k < out.names.size(); ++k) {
    if (!wanted[k]) continue;
    const auto [v, choice] = search.best(k);
    Run r{search.describe_choice(choice), std::vector<double>(out.names.size(), std::nan(""))};
    r.values[k] = v;
    out.inner_runs.push_back(r);
  }
  out.report = combine_bounds(out.names, out.outer_runs, out.inner_runs);
  for (std::size_t k = 0; k < out.names.size(); ++k)
    if (!wanted[k]) {
      out.report.metrics[k].inner = std::nan("");
      out.report.metrics[k].inner_params = "not evaluated";
    }
  if (opt.hull && net.demands.size() == 2) {
    std::vector<std::array<double, 2>> pts;
    for (const auto& p : search.points()) pts.push_back({p[0], p[1]});
    out.report.hull = rate_region_hull(pts);
  }
  return out;
}

}  // namespace netbound
