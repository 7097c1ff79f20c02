#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "netbound/info.hpp"

namespace netbound {

struct MacSpec {
  std::vector<double> gammas;
  std::optional<std::vector<double>> alphabet_bits;  // log2|X_i| for discrete inputs
  std::optional<double> output_bits;                 // log2|Y|
};

struct RateVector {
  double sum_rate = 0;
  std::vector<double> individual;
  std::vector<std::string> labels;  // labels[0] describes the sum, then one per entry
};

struct NoisePartition {
  double alpha = 1;
  std::vector<double> alphas;
  double mu = 0;
};

inline void check_gammas(const std::vector<double>& g, const char* who) {
  if (g.empty()) throw DomainError(std::string(who) + ": no users");
  for (double v : g)
    if (!(v > 0) || !std::isfinite(v)) throw DomainError(std::string(who) + ": SNRs must be positive and finite");
}

inline double sum_sqrt(const std::vector<double>& g) {
  double s = 0;
  for (double v : g) s += std::sqrt(v);
  return s;
}

inline double sum_of(const std::vector<double>& g) { return std::accumulate(g.begin(), g.end(), 0.0); }

// Upper bound on the MAC sum rate with fully correlated inputs.
inline double mac_sum_upper(const std::vector<double>& g) {
  const double s = sum_sqrt(g);
  return awgn_capacity(s * s);
}

inline RateVector mac_upper_oneshot1(const MacSpec& spec) {
  check_gammas(spec.gammas, "mac_upper_oneshot1");
  const std::size_t m = spec.gammas.size();
  RateVector r;
  r.sum_rate = mac_sum_upper(spec.gammas);
  r.labels.push_back("mac one-shot 1: correlated-input sum");
  for (std::size_t i = 0; i < m; ++i) {
    r.individual.push_back(spec.alphabet_bits ? spec.alphabet_bits->at(i) : kUnbounded);
    r.labels.push_back("mac one-shot 1: input alphabet " + std::to_string(i));
  }
  return r;
}

// Noise share of input i given the multiplier mu: root of a_i^2 + g a_i = g mu.
inline double share_from_mu(double g, double mu) {
  // (sqrt(g(g+4mu)) - g)/2 without cancellation
  return 2.0 * g * mu / (std::sqrt(g * (g + 4.0 * mu)) + g);
}

struct MuBracket {
  double lo, hi;
};

inline MuBracket mu_bracket(const std::vector<double>& g, double alpha) {
  const double m = double(g.size());
  const double a = 1.0 - alpha;
  const double gmin = *std::min_element(g.begin(), g.end());
  return {a / m + a * a / (m * sum_of(g)), a / m + a * a / (m * m * gmin)};
}

// Solves sum_i share_from_mu(g_i, mu) = 1 - alpha by bisection.
inline double solve_mu(const std::vector<double>& g, double alpha) {
  check_gammas(g, "solve_mu");
  if (!(alpha >= 0 && alpha < 1)) throw DomainError("solve_mu: alpha outside [0,1)");
  const double target = 1.0 - alpha;
  auto f = [&](double mu) {
    double s = 0;
    for (double v : g) s += share_from_mu(v, mu);
    return s - target;
  };
  auto [lo, hi] = mu_bracket(g, alpha);
  if (f(lo) >= 0) return lo;  // endpoints coincide up to rounding
  if (f(hi) <= 0) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid);
    if (std::abs(v) <= 1e-10 && hi - lo <= 1e-12 * hi) return mid;
    (v < 0 ? lo : hi) = mid;
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  const double mu = 0.5 * (lo + hi);
  if (std::abs(f(mu)) > 1e-10) throw NumericalError("solve_mu: bisection did not converge");
  return mu;
}

inline NoisePartition partition_for(const std::vector<double>& g, double alpha) {
  NoisePartition p;
  p.alpha = alpha;
  if (alpha >= 1) {
    p.alphas.assign(g.size(), 0.0);
    return p;
  }
  p.mu = solve_mu(g, alpha);
  for (double v : g) p.alphas.push_back(share_from_mu(v, p.mu));
  return p;
}

// Two-user model with the whole noise split between the individual
// constraints. Returns the rates and the share given to user 1.
inline std::pair<RateVector, double> mac_upper_oneshot2_gaussian2(double g1, double g2) {
  const std::vector<double> g{g1, g2};
  check_gammas(g, "mac_upper_oneshot2_gaussian2");
  const NoisePartition p = partition_for(g, 0.0);
  RateVector r;
  r.sum_rate = kUnbounded;
  r.labels = {"mac one-shot 2: output alphabet", "mac one-shot 2: partitioned input 0",
              "mac one-shot 2: partitioned input 1"};
  r.individual = {awgn_capacity(g1 / p.alphas[0]), awgn_capacity(g2 / p.alphas[1])};
  return {r, p.alphas[0]};
}

// eps = e1(1-e2) + e2(1-e1) solved for e2.
inline double binary_noise_partition(double eps, double eps1) {
  if (!(eps >= 0 && eps < 0.5)) throw DomainError("binary_noise_partition: eps outside [0,1/2)");
  if (eps1 == 0.5) throw DomainError("binary_noise_partition: eps1 = 1/2 is singular");
  if (!(eps1 >= 0 && eps1 <= eps)) throw DomainError("binary_noise_partition: eps1 outside [0,eps]");
  return (eps - eps1) / (1.0 - 2.0 * eps1);
}

inline double binary_symmetric_split(double eps) {
  if (!(eps >= 0 && eps <= 0.5)) throw DomainError("binary_symmetric_split: eps outside [0,1/2]");
  return 0.5 * (1.0 - std::sqrt(1.0 - 2.0 * eps));
}

inline double binary_combine(double e1, double e2) { return e1 * (1 - e2) + e2 * (1 - e1); }

// alpha is the noise share kept on the sum constraint. alpha = 1 and
// alpha = 0 are the exact limiting models.
inline std::pair<RateVector, NoisePartition> mac_upper_new(const MacSpec& spec, double alpha) {
  check_gammas(spec.gammas, "mac_upper_new");
  if (!(alpha >= 0 && alpha <= 1)) throw DomainError("mac_upper_new: alpha outside [0,1]");
  const auto& g = spec.gammas;
  const std::size_t m = g.size();
  NoisePartition p = partition_for(g, alpha);
  RateVector r;
  const double s = sum_sqrt(g);
  r.sum_rate = alpha == 0 ? kUnbounded : awgn_capacity((s * s + 1.0 - alpha) / alpha);
  r.labels.push_back("mac new upper: sum with noise share " + std::to_string(alpha));
  for (std::size_t i = 0; i < m; ++i) {
    r.individual.push_back(alpha >= 1 ? kUnbounded : awgn_capacity(g[i] / p.alphas[i]));
    r.labels.push_back("mac new upper: input " + std::to_string(i));
  }
  return {r, p};
}

// Successive decoding; order[0] is decoded first. Zero SNRs are allowed.
inline RateVector mac_lower(const MacSpec& spec, const std::vector<std::size_t>& order) {
  const auto& g = spec.gammas;
  const std::size_t m = g.size();
  if (m == 0) throw DomainError("mac_lower: no users");
  if (order.size() != m) throw DomainError("mac_lower: order has wrong length");
  std::vector<bool> seen(m, false);
  for (auto k : order) {
    if (k >= m || seen[k]) throw DomainError("mac_lower: order is not a permutation");
    seen[k] = true;
  }
  for (double v : g)
    if (!(v >= 0)) throw DomainError("mac_lower: negative SNR");
  RateVector r;
  r.individual.assign(m, 0.0);
  r.labels.assign(m + 1, "");
  r.labels[0] = "mac lower: joint decoding sum";
  double later = 0;
  for (std::size_t pos = m; pos-- > 0;) {
    const std::size_t i = order[pos];
    r.individual[i] = awgn_capacity(g[i] / (1.0 + later));
    r.labels[i + 1] = "mac lower: successive decoding step " + std::to_string(pos);
    later += g[i];
  }
  r.sum_rate = awgn_capacity(later);
  return r;
}

inline double mac_gap(const MacSpec& spec) {
  check_gammas(spec.gammas, "mac_gap");
  return std::max(0.0, mac_sum_upper(spec.gammas) - awgn_capacity(sum_of(spec.gammas)));
}

// Information quantities for the two-user discrete MAC with
// p(u,v2|x1,x2) = p(u|x1) p(v2|x2) and y = f(u,v2).
struct MacLemmaQuantities {
  double i_x1x2_y_given_u = 0;
  double i_x2_v2 = 0;
  double log_x2 = 0;
  double log_y = 0;
  double i_x1_u = 0;
  double i_x1x2_y = 0;
};

inline MacLemmaQuantities mac_lemma_quantities(const Table& p_x1x2, const Table& p_u_x1, const Table& p_v2_x2,
                                               const std::vector<std::vector<int>>& f, int ny) {
  const std::size_t n1 = p_x1x2.size(), n2 = p_x1x2[0].size();
  const std::size_t nu = p_u_x1[0].size(), nv = p_v2_x2[0].size();
  const std::size_t nx = n1 * n2;
  // joint over (x, u, y)
  std::vector<double> pxuy(nx * nu * ny, 0.0);
  Table p_x2v2(n2, std::vector<double>(nv, 0.0));
  Table p_x1u(n1, std::vector<double>(nu, 0.0));
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < n2; ++b)
      for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t v = 0; v < nv; ++v) {
          const double pr = p_x1x2[a][b] * p_u_x1[a][u] * p_v2_x2[b][v];
          pxuy[((a * n2 + b) * nu + u) * ny + f[u][v]] += pr;
          p_x2v2[b][v] += pr;
          p_x1u[a][u] += pr;
        }
  MacLemmaQuantities q;
  std::vector<double> pxu(nx * nu, 0.0), puy(nu * ny, 0.0), pu(nu, 0.0);
  Table pxy(nx, std::vector<double>(ny, 0.0));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t u = 0; u < nu; ++u)
      for (int y = 0; y < ny; ++y) {
        const double v = pxuy[(x * nu + u) * ny + y];
        pxu[x * nu + u] += v;
        puy[u * ny + y] += v;
        pu[u] += v;
        pxy[x][y] += v;
      }
  double cmi = 0;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t u = 0; u < nu; ++u)
      for (int y = 0; y < ny; ++y) {
        const double v = pxuy[(x * nu + u) * ny + y];
        if (v > 0) cmi += v * std::log2(v * pu[u] / (pxu[x * nu + u] * puy[u * ny + y]));
      }
  q.i_x1x2_y_given_u = std::max(0.0, cmi);
  q.i_x2_v2 = mutual_information(p_x2v2);
  q.log_x2 = std::log2(double(n2));
  q.log_y = std::log2(double(ny));
  q.i_x1_u = mutual_information(p_x1u);
  q.i_x1x2_y = mutual_information(pxy);
  return q;
}

}  // namespace netbound
