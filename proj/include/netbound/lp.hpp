#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "netbound/info.hpp"

namespace netbound {

// max c.x  s.t.  rows x <= rhs, x >= 0, with rhs >= 0 so the origin is a
// feasible start.
struct LinearProgram {
  using Row = std::vector<std::pair<std::size_t, double>>;
  std::size_t nvars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<double> rhs;

  std::size_t add_row(Row r, double b) {
    rows.push_back(std::move(r));
    rhs.push_back(b);
    return rows.size() - 1;
  }
};

enum class LpStatus { optimal, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::optimal;
  double value = 0;
  std::vector<double> x;
  int pivots = 0;
};

// Dense tableau simplex, largest-coefficient rule with a switch to Bland's
// rule after a run of degenerate pivots.
inline LpResult lp_maximize(const LinearProgram& lp, int max_pivots = 200000) {
  const std::size_t n = lp.nvars, m = lp.rows.size();
  const std::size_t w = n + m + 1;  // columns: x, slacks, rhs
  std::vector<double> t((m + 1) * w, 0.0);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return t[r * w + c]; };
  for (std::size_t r = 0; r < m; ++r) {
    if (!(lp.rhs[r] >= 0)) throw DomainError("lp_maximize: negative right-hand side");
    for (auto [j, v] : lp.rows[r]) at(r, j) += v;
    at(r, n + r) = 1.0;
    at(r, w - 1) = lp.rhs[r];
  }
  for (std::size_t j = 0; j < n; ++j) at(m, j) = -lp.objective[j];
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) basis[r] = n + r;

  const double eps = 1e-11;
  LpResult res;
  int degenerate = 0;
  for (;;) {
    const bool bland = degenerate > 50;
    std::size_t enter = w;
    double best = -eps;
    for (std::size_t j = 0; j + 1 < w; ++j) {
      const double z = at(m, j);
      if (z < best) {
        enter = j;
        if (bland) break;
        best = z;
      }
    }
    if (enter == w) break;
    std::size_t leave = m;
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < m; ++r) {
      const double a = at(r, enter);
      if (a > eps) {
        const double q = at(r, w - 1) / a;
        if (q < ratio - 1e-14 || (q <= ratio + 1e-14 && leave < m && basis[r] < basis[leave])) {
          ratio = q;
          leave = r;
        }
      }
    }
    if (leave == m) {
      res.status = LpStatus::unbounded;
      return res;
    }
    if (++res.pivots > max_pivots) {
      res.status = LpStatus::iteration_limit;
      return res;
    }
    degenerate = ratio <= 1e-14 ? degenerate + 1 : 0;
    const double piv = at(leave, enter);
    double* prow = &t[leave * w];
    for (std::size_t j = 0; j < w; ++j) prow[j] /= piv;
    prow[enter] = 1.0;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      double* row = &t[r * w];
      const double f = row[enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < w; ++j) row[j] -= f * prow[j];
      row[enter] = 0.0;
      if (r < m && row[w - 1] < 0) row[w - 1] = 0.0;  // rounding
    }
    basis[leave] = enter;
  }
  res.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) res.x[basis[r]] = at(r, w - 1);
  res.value = 0;
  for (std::size_t j = 0; j < n; ++j) res.value += lp.objective[j] * res.x[j];
  return res;
}

}  // namespace netbound
