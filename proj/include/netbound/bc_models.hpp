#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "netbound/info.hpp"
#include "netbound/mac_models.hpp"

namespace netbound {

struct BcSpec {
  std::vector<double> gammas;
  std::optional<double> alphabet_bits_in;
  std::optional<std::vector<double>> alphabet_bits_out;
};

inline void check_perm(const std::vector<std::size_t>& perm, std::size_t m, const char* who) {
  if (perm.size() != m) throw DomainError(std::string(who) + ": permutation has wrong length");
  std::vector<bool> seen(m, false);
  for (auto k : perm) {
    if (k >= m || seen[k]) throw DomainError(std::string(who) + ": not a permutation");
    seen[k] = true;
  }
}

inline RateVector bc_upper_oneshot(const BcSpec& spec, int variant) {
  check_gammas(spec.gammas, "bc_upper_oneshot");
  const auto& g = spec.gammas;
  RateVector r;
  if (variant == 1) {
    r.sum_rate = awgn_capacity(sum_of(g));
    r.labels.push_back("bc one-shot 1: all receivers jointly");
    for (std::size_t i = 0; i < g.size(); ++i) {
      r.individual.push_back(spec.alphabet_bits_out ? spec.alphabet_bits_out->at(i) : kUnbounded);
      r.labels.push_back("bc one-shot 1: output alphabet " + std::to_string(i));
    }
  } else if (variant == 2) {
    r.sum_rate = spec.alphabet_bits_in ? *spec.alphabet_bits_in : kUnbounded;
    r.labels.push_back("bc one-shot 2: input alphabet");
    for (std::size_t i = 0; i < g.size(); ++i) {
      r.individual.push_back(awgn_capacity(g[i]));
      r.labels.push_back("bc one-shot 2: receiver " + std::to_string(i));
    }
  } else {
    throw DomainError("bc_upper_oneshot: variant must be 1 or 2");
  }
  return r;
}

// Receiver perm[k] gets the rate of the first k+1 receivers of perm jointly.
// individual is indexed by receiver label.
inline RateVector bc_upper_new(const BcSpec& spec, const std::vector<std::size_t>& perm) {
  check_gammas(spec.gammas, "bc_upper_new");
  const auto& g = spec.gammas;
  check_perm(perm, g.size(), "bc_upper_new");
  RateVector r;
  r.individual.assign(g.size(), 0.0);
  r.labels.assign(g.size() + 1, "");
  r.labels[0] = "bc new upper: all receivers jointly";
  double acc = 0;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    acc += g[perm[k]];
    r.individual[perm[k]] = awgn_capacity(acc);
    r.labels[perm[k] + 1] = "bc new upper: first " + std::to_string(k + 1) + " receivers of the ordering";
  }
  r.sum_rate = awgn_capacity(acc);
  return r;
}

// One superposition layer: decodable by the receivers in targets.
struct SubsetRate {
  std::size_t layer = 0;                // 0-based, 0 is the most protected
  std::uint64_t table_index = 0;        // Table I index over SNR-sorted receivers
  std::uint64_t mask = 0;               // same set over caller labels
  std::vector<std::size_t> targets;     // caller labels
  double rate = 0;
};

struct BcLowerModel {
  std::vector<SubsetRate> rates;  // one per layer
  double sum_rate = 0;
  std::vector<double> betas;
  std::vector<std::size_t> order;  // caller labels sorted by SNR ascending
};

inline std::vector<std::size_t> ascending_order(const std::vector<double>& g) {
  std::vector<std::size_t> o(g.size());
  std::iota(o.begin(), o.end(), 0);
  std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return g[a] < g[b]; });
  return o;
}

// betas[l] is the power of layer l, which targets the SNR-sorted receivers
// l..m-1.
inline BcLowerModel bc_lower_superposition(const BcSpec& spec, const std::vector<double>& betas) {
  check_gammas(spec.gammas, "bc_lower_superposition");
  const auto& g = spec.gammas;
  const std::size_t m = g.size();
  if (m > 62) throw DomainError("bc_lower_superposition: too many receivers");
  if (betas.size() != m) throw DomainError("bc_lower_superposition: one beta per receiver required");
  double bs = 0;
  for (double b : betas) {
    if (!(b >= 0)) throw DomainError("bc_lower_superposition: negative beta");
    bs += b;
  }
  if (std::abs(bs - 1.0) > 1e-12) throw DomainError("bc_lower_superposition: betas must sum to 1");
  BcLowerModel out;
  out.betas = betas;
  out.order = ascending_order(g);
  double above = bs;
  for (std::size_t l = 0; l < m; ++l) {
    above -= betas[l];
    if (above < 0) above = 0;
    const double gl = g[out.order[l]];
    SubsetRate s;
    s.layer = l;
    s.table_index = (std::uint64_t(1) << m) - (std::uint64_t(1) << l);
    for (std::size_t k = l; k < m; ++k) {
      s.targets.push_back(out.order[k]);
      s.mask |= std::uint64_t(1) << out.order[k];
    }
    s.rate = awgn_capacity(betas[l] * gl / (1.0 + gl * above));
    out.sum_rate += s.rate;
    out.rates.push_back(s);
  }
  return out;
}

inline double bc_gap(const BcSpec& spec) {
  check_gammas(spec.gammas, "bc_gap");
  const auto& g = spec.gammas;
  const double gmax = *std::max_element(g.begin(), g.end());
  return std::max(0.0, 0.5 * std::log2((1.0 + sum_of(g)) / (1.0 + gmax)));
}

// All compositions of 1 into m parts with step 1/n.
inline std::vector<std::vector<double>> simplex_grid(std::size_t m, int n) {
  std::vector<std::vector<double>> out;
  if (m == 0 || n < 1) return out;
  std::vector<int> c(m, 0);
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos + 1 == m) {
      c[pos] = left;
      std::vector<double> b(m);
      for (std::size_t i = 0; i < m; ++i) b[i] = double(c[i]) / n;
      out.push_back(b);
      return;
    }
    for (int k = left; k >= 0; --k) {
      c[pos] = k;
      self(self, pos + 1, left - k);
    }
  };
  rec(rec, 0, n);
  return out;
}

}  // namespace netbound
