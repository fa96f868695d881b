#include "dirgamma/moments.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "dirgamma/error.hpp"
#include "dirgamma/special_fn.hpp"

namespace dirgamma {
namespace {

void check_order(const MomentOrder& n, const DGParams& params) {
  if (n.size() != params.dimension()) {
    throw ContractError("moment order has wrong dimension");
  }
}

// Sum over compositions of m into p parts, in lexicographic order.
void for_each_composition(std::size_t p, unsigned m,
                          const std::function<void(const MomentOrder&)>& visit) {
  MomentOrder parts(p, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t idx, unsigned remaining) {
    if (idx + 1 == p) {
      parts[idx] = remaining;
      visit(parts);
      return;
    }
    for (unsigned k = 0; k <= remaining; ++k) {
      parts[idx] = k;
      rec(idx + 1, remaining - k);
    }
  };
  rec(0, m);
}

}  // namespace

double log_dirichlet_integral_I(std::span<const double> alpha_head, double zeta) {
  if (alpha_head.empty()) throw ContractError("dirichlet_integral_I needs p >= 1");
  if (!(zeta > -1.0)) throw DomainError("dirichlet_integral_I: zeta must exceed -1");
  const std::size_t p = alpha_head.size();
  double tail = 0.0;  // Σ_{j>i} α_j
  double acc = log_beta(alpha_head[p - 1], zeta + 1.0);
  for (std::size_t k = p - 1; k-- > 0;) {
    tail += alpha_head[k + 1];
    acc += log_beta(alpha_head[k], tail + zeta + 1.0);
  }
  return acc;
}

double dirichlet_integral_I(std::span<const double> alpha_head, double zeta) {
  return std::exp(log_dirichlet_integral_I(alpha_head, zeta));
}

double product_moment_formula(const MomentOrder& n, const DGParams& params) {
  check_order(n, params);
  const std::size_t p = params.dimension();
  double acc = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    const double beta = params.beta()[i];
    acc += n[i] * std::log(params.theta()[i]) + log_gamma(n[i] + beta) - log_gamma(beta);
  }
  const double zeta = (params.alpha()[p] - 1.0) / static_cast<double>(p);
  acc += log_dirichlet_integral_I(params.alpha().first(p), zeta);
  return std::exp(acc);
}

MomentEstimate product_moment_mc(const MomentOrder& n, const DGParams& params, std::size_t N,
                                 RngSeed seed) {
  check_order(n, params);
  if (N < 1000) throw ContractError("product_moment_mc needs N >= 1000");
  bool trivial = true;
  for (unsigned k : n) trivial = trivial && k == 0;
  if (trivial) return {1.0, 0.0};

  const DataMatrix x = dg_sample(N, params, seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t r = 0; r < N; ++r) {
    double v = 1.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
      for (unsigned k = 0; k < n[i]; ++k) v *= x(r, i);
    }
    const double delta = v - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(N - 1);
  return {mean, std::sqrt(var / static_cast<double>(N))};
}

MomentEstimate mgf_mc(std::span<const double> t, const DGParams& params, std::size_t N,
                      RngSeed seed) {
  if (t.size() != params.dimension()) throw ContractError("mgf_mc: t has wrong dimension");
  if (N < 2) throw ContractError("mgf_mc needs N >= 2");
  const DataMatrix x = dg_sample(N, params, seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t r = 0; r < N; ++r) {
    double dot = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) dot += t[i] * x(r, i);
    const double v = std::exp(dot);
    const double delta = v - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (v - mean);
  }
  return {mean, std::sqrt(m2 / static_cast<double>(N - 1) / static_cast<double>(N))};
}

MomentReport moment_report(const MomentOrder& n, const DGParams& params, std::size_t N,
                           RngSeed seed) {
  MomentReport report;
  report.order = n;
  report.formula_value = product_moment_formula(n, params);
  const MomentEstimate mc = product_moment_mc(n, params, N, seed);
  report.mc_value = mc.value;
  report.mc_stderr = mc.std_error;
  const double diff = std::fabs(report.formula_value - report.mc_value);
  report.relative_gap = diff / std::max(std::fabs(report.mc_value), 1e-12);
  report.discrepancy = diff > 4.0 * report.mc_stderr && report.relative_gap > 0.01;
  return report;
}

std::size_t mgf_term_count(std::size_t p, std::size_t order) {
  // Σ_{m=0}^{M} C(m + p − 1, p − 1), saturating at the cap.
  std::size_t total = 0;
  for (std::size_t m = 0; m <= order; ++m) {
    double c = 1.0;
    for (std::size_t k = 1; k < p; ++k) c = c * static_cast<double>(m + k) / static_cast<double>(k);
    if (c + static_cast<double>(total) > static_cast<double>(kMgfTermCap)) return kMgfTermCap + 1;
    total += static_cast<std::size_t>(std::llround(c));
  }
  return total;
}

double mgf_truncated(std::span<const double> t, const DGParams& params, std::size_t order) {
  const std::size_t p = params.dimension();
  if (t.size() != p) throw ContractError("mgf_truncated: t has wrong dimension");
  if (mgf_term_count(p, order) > kMgfTermCap) {
    throw ContractError("mgf_truncated: series would exceed the term cap");
  }
  const double prefactor = std::exp(-params.log_normalizer());
  double total = 0.0;
  for (unsigned m = 0; m <= order; ++m) {
    double level = 0.0;
    for_each_composition(p, m, [&](const MomentOrder& n) {
      // (1/m!)·(m!/∏n_i!)·∏t_i^{n_i} = ∏ t_i^{n_i}/n_i!
      double weight = 1.0;
      for (std::size_t i = 0; i < p; ++i) {
        weight *= std::pow(t[i], n[i]) / std::exp(log_gamma(n[i] + 1.0));
      }
      if (weight != 0.0) level += weight * product_moment_formula(n, params);
    });
    total += level;
  }
  return prefactor * total;
}

}  // namespace dirgamma
