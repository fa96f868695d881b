#pragma once

// Goodness-of-fit helpers shared by the unit and acceptance tests.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace dgtest {

/// Asymptotic Kolmogorov tail P(K > t) = 2 Σ (−1)^{k−1} exp(−2k²t²).
inline double kolmogorov_tail(double t) {
  if (t < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// One-sample KS statistic of values that should be Uniform(0, 1).
inline double ks_uniform_statistic(std::vector<double> u) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max(d, std::max((i + 1) / n - u[i], u[i] - i / n));
  }
  return d;
}

/// p-value of the KS uniformity test with Stephens' small-sample correction.
inline double ks_uniform_pvalue(const std::vector<double>& u) {
  const double n = static_cast<double>(u.size());
  const double d = ks_uniform_statistic(u);
  const double sn = std::sqrt(n);
  return kolmogorov_tail(d * (sn + 0.12 + 0.11 / sn));
}

/// Pearson chi-square p-value for observed counts against equal expectations.
inline double chi_square_uniform_pvalue(const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) stat += (c - expected) * (c - expected) / expected;
  const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Bin index of a flat-Dirichlet point (y1, y2, y3) on S₃ split into k² equal-area triangles.
inline std::size_t simplex_bin(double y1, double y2, std::size_t k) {
  const double a = std::min(y1 * static_cast<double>(k), static_cast<double>(k) - 1e-12);
  const double b = std::min(y2 * static_cast<double>(k), static_cast<double>(k) - 1e-12);
  const auto i = static_cast<std::size_t>(a);
  const auto j = static_cast<std::size_t>(b);
  // Cell (i, j) of the triangular lattice with i + j ≤ k − 1; an upper
  // triangle when the fractional parts add beyond one.
  const bool upper = (a - i) + (b - j) > 1.0;
  const std::size_t lower_index = i * (2 * k - i + 1) / 2 + j;  // lower triangles: k(k+1)/2
  if (!upper) return lower_index;
  return k * (k + 1) / 2 + i * (2 * k - i - 1) / 2 + j;  // upper: k(k−1)/2
}

}  // namespace dgtest
