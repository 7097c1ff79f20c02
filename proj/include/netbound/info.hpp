#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace netbound {

// Rates are bits per channel use. An unbounded pipe carries kUnbounded.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

inline bool is_unbounded(double r) { return std::isinf(r) && r > 0; }

using Table = std::vector<std::vector<double>>;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double awgn_capacity(double gamma) {
  if (!(gamma >= 0)) throw DomainError("awgn_capacity: negative SNR");
  if (is_unbounded(gamma)) return kUnbounded;
  return 0.5 * std::log2(1.0 + gamma);
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0) h -= v * std::log2(v);
  return h;
}

// q-ary symmetric channel: correct symbol with probability 1-xi, each wrong
// symbol with probability xi/(q-1).
inline double qsc_capacity(int q, double xi) {
  if (q < 2) throw DomainError("qsc_capacity: q must be at least 2");
  if (!(xi >= 0.0 && xi < 1.0)) throw DomainError("qsc_capacity: xi outside [0,1)");
  const double limit = double(q - 1) / double(q);
  if (xi > limit + 1e-15) throw DomainError("qsc_capacity: xi beyond (q-1)/q");
  if (std::abs(xi - limit) <= 1e-15) return 0.0;
  double c = std::log2(double(q)) - binary_entropy(xi);
  if (xi > 0) c -= xi * std::log2(double(q - 1));
  return std::max(0.0, c);
}

inline double bsc_capacity(double eps) {
  if (!(eps >= 0.0 && eps <= 0.5)) throw DomainError("bsc_capacity: eps outside [0,1/2]");
  return 1.0 - binary_entropy(eps);
}

inline Table qsc_matrix(int q, double xi) {
  Table w(q, std::vector<double>(q, q > 1 ? xi / (q - 1) : 0.0));
  for (int i = 0; i < q; ++i) w[i][i] = 1.0 - xi;
  return w;
}

inline Table bsc_matrix(double eps) { return {{1 - eps, eps}, {eps, 1 - eps}}; }

struct DmcResult {
  double capacity = 0;
  double lower = 0;  // certified bracket on the capacity
  double upper = 0;
  int iterations = 0;
  std::vector<double> input;
};

struct DmcNoConvergence : NumericalError {
  double lower, upper;
  DmcNoConvergence(double lo, double hi)
      : NumericalError("blahut_arimoto: no convergence, bracket [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]"),
        lower(lo),
        upper(hi) {}
};

// Blahut-Arimoto with the max/min stopping bracket. Rows of w are inputs.
inline DmcResult blahut_arimoto(const Table& w, double tol = 1e-9, int max_iter = 200000) {
  if (!(tol > 0)) throw DomainError("blahut_arimoto: tol must be positive");
  const std::size_t nx = w.size();
  if (nx == 0) throw DomainError("blahut_arimoto: empty matrix");
  const std::size_t ny = w[0].size();
  for (const auto& row : w) {
    if (row.size() != ny || ny == 0) throw DomainError("blahut_arimoto: ragged matrix");
    double s = 0;
    for (double v : row) {
      if (!(v >= 0)) throw DomainError("blahut_arimoto: negative entry");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-12) throw DomainError("blahut_arimoto: row does not sum to 1");
  }
  std::vector<double> p(nx, 1.0 / nx), q(ny), c(nx);
  DmcResult res;
  for (int it = 1; it <= max_iter; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) q[y] += p[x] * w[x][y];
    // c[x] = exp(D(W(.|x) || q)) in nats
    for (std::size_t x = 0; x < nx; ++x) {
      double d = 0;
      for (std::size_t y = 0; y < ny; ++y)
        if (w[x][y] > 0) d += w[x][y] * std::log(w[x][y] / q[y]);
      c[x] = std::exp(d);
    }
    double z = 0;
    for (std::size_t x = 0; x < nx; ++x) z += p[x] * c[x];
    const double lo = std::log2(z);
    const double hi = std::log2(*std::max_element(c.begin(), c.end()));
    res.lower = std::max(0.0, lo);
    res.upper = hi;
    res.iterations = it;
    if (hi - lo < tol) {
      res.capacity = std::max(0.0, 0.5 * (lo + hi));
      res.input = p;
      return res;
    }
    for (std::size_t x = 0; x < nx; ++x) p[x] = p[x] * c[x] / z;
  }
  throw DmcNoConvergence(res.lower, res.upper);
}

inline double dmc_capacity(const Table& w, double tol = 1e-9) { return blahut_arimoto(w, tol).capacity; }

// I(A;B) in bits from a joint probability table p[a][b].
inline double mutual_information(const Table& joint) {
  if (joint.empty()) return 0.0;
  std::vector<double> pa(joint.size(), 0.0), pb(joint[0].size(), 0.0);
  for (std::size_t a = 0; a < joint.size(); ++a)
    for (std::size_t b = 0; b < joint[a].size(); ++b) {
      pa[a] += joint[a][b];
      pb[b] += joint[a][b];
    }
  double i = 0;
  for (std::size_t a = 0; a < joint.size(); ++a)
    for (std::size_t b = 0; b < joint[a].size(); ++b) {
      const double v = joint[a][b];
      if (v > 0) i += v * std::log2(v / (pa[a] * pb[b]));
    }
  return std::max(0.0, i);
}

}  // namespace netbound
