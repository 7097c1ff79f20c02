#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "netbound/benchmarks.hpp"
#include "netbound/pipeline.hpp"

namespace netbound {

inline constexpr const char* kVersion = "0.1.0";

inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

inline std::string num(double v) {
  if (is_unbounded(v)) return "inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::vector<double> grid(double from, double to, double step) {
  if (!(step > 0)) throw InputError("grid step must be positive");
  if (to < from) throw InputError("grid is empty");
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long k = 0; k <= n; ++k) g.push_back(from + double(k) * step);
  return g;
}

// Evaluates f on every item with a pool of threads. Results keep the input
// order, so output does not depend on scheduling.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, F f) -> std::vector<decltype(f(items[0]))> {
  using R = decltype(f(items[0]));
  std::vector<std::optional<R>> slots(items.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex guard;
  auto work = [&] {
    for (std::size_t i; (i = next++) < items.size();) {
      try {
        slots[i].emplace(f(items[i]));
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(items.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  std::vector<R> out;
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------- relay

inline NoisyNetwork relay_network(double g_sd, double g_sr, double g_rd) {
  NoisyNetwork net;
  net.nodes = {"S", "R", "D"};
  net.links = {{"S", "D", LinkKind::awgn, g_sd, 0, 0, 0},
               {"S", "R", LinkKind::awgn, g_sr, 0, 0, 0},
               {"R", "D", LinkKind::awgn, g_rd, 0, 0, 0}};
  net.demands = {{DemandKind::unicast, "S", {"D"}}};
  validate_network(net);
  return net;
}

struct RelayRow {
  double gamma_sr_db = 0, eq_upper = 0, eq_lower = 0, cutset = 0, df = 0, cf = 0;
  double gamma_sd_db = 0, gamma_rd_db = 0;
  int beta_steps = 0;
};

inline RelayRow relay_point(double sd_db, double rd_db, double sr_db, int beta_steps) {
  const RelaySpec spec{from_db(sd_db), from_db(sr_db), from_db(rd_db)};
  const auto net = relay_network(spec.gamma_sd, spec.gamma_sr, spec.gamma_rd);
  SearchOptions opt;
  opt.beta_steps = beta_steps;
  opt.metrics = {describe(net.demands[0])};
  const auto res = compute_bounds(net, opt);
  RelayRow r;
  r.gamma_sr_db = sr_db;
  r.eq_upper = res.report.metrics[0].outer;
  r.eq_lower = res.report.metrics[0].inner;
  r.cutset = cutset_bound(spec);
  r.df = df_bound(spec);
  r.cf = cf_bound(spec);
  r.gamma_sd_db = sd_db;
  r.gamma_rd_db = rd_db;
  r.beta_steps = beta_steps;
  return r;
}

inline std::vector<RelayRow> relay_sweep(double sd_db, double rd_db, const std::vector<double>& sr_db, int beta_steps) {
  return parallel_map(sr_db, [&](double s) { return relay_point(sd_db, rd_db, s, beta_steps); });
}

inline void write_relay_csv(std::ostream& os, const std::vector<RelayRow>& rows, const std::string& invocation) {
  os << "# netbound " << kVersion << "\n# invocation: " << invocation << "\n";
  os << "gamma_sr_db,eq_upper,eq_lower,cutset,df,cf,gamma_sd_db,gamma_rd_db,beta_steps\n";
  for (const auto& r : rows)
    os << num(r.gamma_sr_db) << ',' << num(r.eq_upper) << ',' << num(r.eq_lower) << ',' << num(r.cutset) << ','
       << num(r.df) << ',' << num(r.cf) << ',' << num(r.gamma_sd_db) << ',' << num(r.gamma_rd_db) << ','
       << r.beta_steps << '\n';
}

// -------------------------------------------------------------- layered

inline std::string sname(const char* p, int i) { return p + std::to_string(i); }

// Sources S1..Sn pass traffic along a chain to Sn, which feeds R1 over a
// single link; relays R1..Rn pass it along to the destinations. Every node
// except Sn and Rn broadcasts to its chain successor and to one relay or
// destination.
inline NoisyNetwork layered_network(int n, double gamma) {
  if (n < 2) throw InputError("layered network needs n >= 2");
  NoisyNetwork net;
  for (int i = 1; i <= n; ++i) net.nodes.push_back(sname("S", i));
  for (int i = 1; i <= n; ++i) net.nodes.push_back(sname("R", i));
  for (int i = 1; i <= n; ++i) net.nodes.push_back(sname("D", i));
  auto add = [&](std::string a, std::string b) { net.links.push_back({a, b, LinkKind::awgn, gamma, 0, 0, 0}); };
  for (int i = 1; i < n; ++i) {
    add(sname("S", i), sname("S", i + 1));
    add(sname("S", i), sname("R", i + 1));
    add(sname("R", i), sname("R", i + 1));
    add(sname("R", i), sname("D", i));
  }
  add(sname("S", n), sname("R", 1));
  add(sname("R", n), sname("D", n));
  for (int i = 1; i <= n; ++i) net.demands.push_back({DemandKind::unicast, sname("S", i), {sname("D", i)}});
  validate_network(net);
  return net;
}

struct LayeredClosedForm {
  double R, R_b, R_prime, R_s, R_m, capacity, inner;
  bool small_regime;  // inner equals R/n
};

inline LayeredClosedForm layered_closed_form(int n, double gamma, double alpha) {
  LayeredClosedForm c{};
  c.R = awgn_capacity(gamma);
  c.R_b = awgn_capacity(3 * gamma);
  c.R_prime = alpha >= 1 ? kUnbounded : awgn_capacity(gamma / ((1 - alpha) / 2));
  c.R_s = alpha <= 0 ? kUnbounded : awgn_capacity((4 * gamma + 1 - alpha) / alpha);
  c.R_m = awgn_capacity(2 * gamma);
  c.capacity = c.R / n;
  c.inner = std::min(c.R / n, c.R_m / (n + 1));
  const double golden = (1 + std::sqrt(5.0)) / 2;
  c.small_regime = gamma < golden || n >= std::log(1 + gamma) / std::log(1 + gamma / (1 + gamma));
  return c;
}

struct LayeredRow {
  int n = 0;
  double gamma_db = 0, alpha = 0;
  LayeredClosedForm closed{};
  double outer_sym = 0, inner_sym = 0;
};

inline std::vector<LayeredRow> layered_rows(int n, double gamma_db, const std::vector<double>& alphas) {
  const double gamma = from_db(gamma_db);
  const auto net = layered_network(n, gamma);
  const auto dec = decompose(net);
  SearchOptions opt;
  opt.fixed_betas = std::vector<double>{1.0};
  const std::size_t sym = net.demands.size();
  LowerSearch search(net, dec, opt);
  const double inner = search.best(sym).first;
  return parallel_map(alphas, [&](double a) {
    SearchOptions one = opt;
    one.alpha_grid = {a};
    double outer = kUnbounded;
    for (const auto& run : upper_runs(net, dec, one)) outer = std::min(outer, run.values[sym]);
    return LayeredRow{n, gamma_db, a, layered_closed_form(n, gamma, a), outer, inner};
  });
}

inline void write_layered_csv(std::ostream& os, const std::vector<LayeredRow>& rows, const std::string& invocation) {
  os << "# netbound " << kVersion << "\n# invocation: " << invocation << "\n";
  os << "n,gamma_db,alpha,R,R_b,R_prime,R_s,R_m,capacity,outer_symmetric,inner_symmetric,inner_closed_form,regime\n";
  for (const auto& r : rows)
    os << r.n << ',' << num(r.gamma_db) << ',' << num(r.alpha) << ',' << num(r.closed.R) << ',' << num(r.closed.R_b)
       << ',' << num(r.closed.R_prime) << ',' << num(r.closed.R_s) << ',' << num(r.closed.R_m) << ','
       << num(r.closed.capacity) << ',' << num(r.outer_sym) << ',' << num(r.inner_sym) << ',' << num(r.closed.inner)
       << ',' << (r.closed.small_regime ? "R/n" : "R_m/(n+1)") << '\n';
}

// ------------------------------------------------------------- multicast

inline constexpr double kPaperC12 = 2.85;

struct MulticastParams {
  int n = 10;
  double delta_ratio_db = -3;
  int q = 8;
  double xi = 0.1;
};

inline std::pair<std::vector<double>, std::vector<double>> multicast_ladder(const MulticastParams& mp, double P) {
  const double dP = P * from_db(mp.delta_ratio_db);
  std::vector<double> g1, g2;
  for (int k = 1; k <= mp.n; ++k) {
    g1.push_back(P - double(k) / mp.n * dP);
    g2.push_back(P + double(k) / mp.n * dP);
  }
  return {g1, g2};
}

inline NoisyNetwork multicast_network(const MulticastParams& mp, double P) {
  if (mp.n < 2) throw InputError("multicast experiment needs n >= 2");
  if (!(mp.delta_ratio_db < 0)) throw InputError("multicast experiment needs delta_P < P");
  const auto [g1, g2] = multicast_ladder(mp, P);
  NoisyNetwork net;
  net.nodes = {"S1", "S2"};
  std::vector<std::string> ds;
  for (int k = 1; k <= mp.n; ++k) ds.push_back(sname("D", k));
  for (const auto& d : ds) net.nodes.push_back(d);
  for (int k = 0; k < mp.n; ++k) net.links.push_back({"S1", ds[std::size_t(k)], LinkKind::awgn, g1[std::size_t(k)], 0, 0, 0});
  for (int k = 0; k < mp.n; ++k) net.links.push_back({"S2", ds[std::size_t(k)], LinkKind::awgn, g2[std::size_t(k)], 0, 0, 0});
  net.links.push_back({"S1", "S2", LinkKind::qsc, 0, mp.q, mp.xi, 0});
  net.demands = {{DemandKind::multicast, "S1", ds}, {DemandKind::multicast, "S2", ds}};
  validate_network(net);
  return net;
}

struct MulticastRow {
  double P_db = 0, eq_upper_sum = 0, eq_lower_sum = 0, coop = 0, mac = 0, C12 = 0;
  MulticastParams params;
};

inline MulticastRow multicast_point(const MulticastParams& mp, double P_db, int beta_steps = 8) {
  const double P = from_db(P_db);
  const auto net = multicast_network(mp, P);
  SearchOptions opt;
  opt.beta_steps = beta_steps;
  opt.metrics = {"sum"};
  const auto res = compute_bounds(net, opt);
  const auto& sum = res.report.metrics.back();
  const auto [g1, g2] = multicast_ladder(mp, P);
  MulticastRow r;
  r.P_db = P_db;
  r.eq_upper_sum = sum.outer;
  r.eq_lower_sum = sum.inner;
  r.coop = kUnbounded;
  r.mac = kUnbounded;
  for (std::size_t k = 0; k < g1.size(); ++k) {
    const double s = std::sqrt(g1[k]) + std::sqrt(g2[k]);
    r.coop = std::min(r.coop, awgn_capacity(s * s));
    r.mac = std::min(r.mac, awgn_capacity(g1[k] + g2[k]));
  }
  r.C12 = qsc_capacity(mp.q, mp.xi);
  r.params = mp;
  return r;
}

inline std::vector<MulticastRow> multicast_sweep(const MulticastParams& mp, const std::vector<double>& p_db,
                                                 int beta_steps = 8) {
  return parallel_map(p_db, [&](double p) { return multicast_point(mp, p, beta_steps); });
}

inline void write_multicast_csv(std::ostream& os, const std::vector<MulticastRow>& rows, const std::string& invocation) {
  os << "# netbound " << kVersion << "\n# invocation: " << invocation << "\n";
  if (!rows.empty())
    os << "# note: side-link capacity C12 computed as " << num(rows[0].C12) << " bits; the reference value "
       << kPaperC12 << " does not match the q-ary symmetric channel formula\n";
  os << "P_db,eq_upper_sum,eq_lower_sum,coop,mac,C12,C12_reference,n,deltaP_ratio_db,q,xi\n";
  for (const auto& r : rows)
    os << num(r.P_db) << ',' << num(r.eq_upper_sum) << ',' << num(r.eq_lower_sum) << ',' << num(r.coop) << ','
       << num(r.mac) << ',' << num(r.C12) << ',' << kPaperC12 << ',' << r.params.n << ','
       << num(r.params.delta_ratio_db) << ',' << r.params.q << ',' << num(r.params.xi) << '\n';
}

}  // namespace netbound
