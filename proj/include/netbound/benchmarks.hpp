#pragma once

#include <cmath>
#include <functional>

#include "netbound/info.hpp"

namespace netbound {

struct RelaySpec {
  double gamma_sd = 1, gamma_sr = 1, gamma_rd = 1;
};

inline void check_relay(const RelaySpec& s) {
  if (!(s.gamma_sd > 0 && s.gamma_sr > 0 && s.gamma_rd > 0)) throw DomainError("relay SNRs must be positive");
}

// Maximum of a unimodal function on [0,1] by golden-section search.
inline double golden_max(const std::function<double(double)>& f, double tol = 1e-8) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0, b = 1;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    }
  }
  return std::max({f(a), f(b), f(0.5 * (a + b))});
}

inline double cutset_bound(const RelaySpec& s) {
  check_relay(s);
  const double c = 2.0 * std::sqrt(s.gamma_sd * s.gamma_rd);
  return golden_max([&](double rho) {
    return std::min(awgn_capacity(s.gamma_sd + s.gamma_rd + rho * c),
                    awgn_capacity((1.0 - rho * rho) * (s.gamma_sd + s.gamma_sr)));
  });
}

inline double df_bound(const RelaySpec& s) {
  check_relay(s);
  const double c = 2.0 * std::sqrt(s.gamma_sd * s.gamma_rd);
  return golden_max([&](double rho) {
    return std::min(awgn_capacity((1.0 - rho * rho) * s.gamma_sr), awgn_capacity(s.gamma_sd + s.gamma_rd + rho * c));
  });
}

inline double cf_bound(const RelaySpec& s) {
  check_relay(s);
  const double q = (1.0 + s.gamma_sd + s.gamma_sr) / s.gamma_rd;
  return awgn_capacity(s.gamma_sd + s.gamma_sr / (1.0 + q));
}

}  // namespace netbound
