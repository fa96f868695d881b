#include <algorithm>
#include <cmath>
#include <limits>

#include "dirgamma/detail/incomplete_gamma.hpp"
#include "dirgamma/simd/kernels.hpp"

namespace dirgamma::simd::scalar {

void gamma_baseline(double shape, double scale, std::span<const double> x,
                    std::span<const double> log_x, const BaselineColumns& out) {
  const detail::IncompleteGamma ig(shape);
  const double log_scale = std::log(scale);
  for (std::size_t r = 0; r < x.size(); ++r) {
    const double z = x[r] / scale;
    const double log_z = log_x[r] - log_scale;
    const detail::GammaTail g = ig.evaluate(z, log_z);
    out.cdf[r] = g.lower;
    out.log_cdf[r] = g.log_lower;
    out.log_pdf[r] = (shape - 1.0) * log_z - z - log_scale - ig.log_gamma_shape();
  }
}

double dg_loglik_reduce(std::size_t n, const ReductionColumns& cols, std::span<const double> alpha) {
  const std::size_t p = cols.cdf.size();
  const double rest_weight = alpha[p] - 1.0;
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double sum = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      sum += cols.cdf[i][r];
      acc += cols.log_pdf[i][r] + (alpha[i] - 1.0) * cols.log_cdf[i][r];
    }
    if (!(sum > 0.0 && sum < 1.0)) return -std::numeric_limits<double>::infinity();
    total += acc + rest_weight * std::log(std::max(1.0 - sum, 1e-300));
  }
  return total;
}

void ecdf_counts(std::span<const double> columns, std::size_t n, std::size_t p,
                 std::span<const double> points, std::span<std::uint32_t> counts) {
  const std::size_t k = counts.size();
  for (std::size_t j = 0; j < k; ++j) {
    const double* pt = points.data() + j * p;
    std::uint32_t count = 0;
    for (std::size_t r = 0; r < n; ++r) {
      bool below = true;
      for (std::size_t c = 0; c < p && below; ++c) below = columns[c * n + r] <= pt[c];
      count += below ? 1u : 0u;
    }
    counts[j] = count;
  }
}

}  // namespace dirgamma::simd::scalar
