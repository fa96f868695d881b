#include "dirgamma/model_testing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dirgamma/dg_model.hpp"
#include "dirgamma/error.hpp"
#include "dirgamma/parallel.hpp"
#include "dirgamma/simd/kernels.hpp"

namespace dirgamma {
namespace {

constexpr std::uint64_t kKsStream = 0x4b53ull;

std::vector<double> column_major(const DataMatrix& data) {
  std::vector<double> out(data.rows() * data.cols());
  for (std::size_t c = 0; c < data.cols(); ++c) {
    for (std::size_t r = 0; r < data.rows(); ++r) out[c * data.rows() + r] = data(r, c);
  }
  return out;
}

std::vector<double> ecdf_values(const DataMatrix& data, const DataMatrix& points) {
  if (data.rows() == 0) throw ContractError("empirical cdf needs at least one row");
  if (data.cols() != points.cols()) {
    throw ContractError("evaluation points and data have different dimensions");
  }
  const auto columns = column_major(data);
  std::vector<std::uint32_t> counts(points.rows());
  simd::ecdf_counts(columns, data.rows(), data.cols(), points.values(), counts);
  std::vector<double> values(points.rows());
  const double n = static_cast<double>(data.rows());
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = counts[j] / n;
  return values;
}

double type7_quantile(std::span<const double> sorted, double prob) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> sorted_norms(const DataMatrix& data) {
  std::vector<double> norms(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.row(r);
    norms[r] = std::sqrt(std::inner_product(row.begin(), row.end(), row.begin(), 0.0));
  }
  std::sort(norms.begin(), norms.end());
  return norms;
}

std::pair<double, double> mean_stderr(std::span<const double> v) {
  const double m = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / m;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (m - 1.0) / m)};
}

}  // namespace

EcdfEvaluation empirical_cdf(const DataMatrix& data, const DataMatrix& eval_points) {
  return {eval_points, ecdf_values(data, eval_points)};
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("ks_distance: vectors differ in length");
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::fabs(a[j] - b[j]));
  return d;
}

std::vector<KSReport> ks_ratio_reports(const DataMatrix& observed, const Simulator& simulate_dg,
                                       const Simulator& simulate_d,
                                       std::span<const std::size_t> d_sizes, std::size_t m,
                                       RngSeed seed, std::size_t threads) {
  if (m == 0) throw ContractError("ks study needs m >= 1");
  const std::vector<double> reference = ecdf_values(observed, observed);
  std::vector<KSReport> reports;
  for (std::size_t di = 0; di < d_sizes.size(); ++di) {
    const std::size_t d = d_sizes[di];
    if (d == 0) throw ContractError("simulated sample sizes must be positive");
    std::vector<double> ks_dg(m), ks_d(m);
    parallel_for(m, threads, [&](std::size_t j) {
      const DataMatrix a = simulate_dg(d, derive_seed(seed, kKsStream + 2 * di, j));
      const DataMatrix b = simulate_d(d, derive_seed(seed, kKsStream + 2 * di + 1, j));
      ks_dg[j] = ks_distance(ecdf_values(a, observed), reference);
      ks_d[j] = ks_distance(ecdf_values(b, observed), reference);
    });
    KSReport rep;
    rep.d = d;
    rep.m = m;
    std::tie(rep.ks_dg, rep.ks_dg_stderr) = mean_stderr(ks_dg);
    std::tie(rep.ks_d, rep.ks_d_stderr) = mean_stderr(ks_d);
    rep.ratio = rep.ks_d > 0.0 ? rep.ks_dg / rep.ks_d : 0.0;
    reports.push_back(rep);
  }
  return reports;
}

KsStudyResult ks_ratio_study(const DataMatrix& data, const KsStudyOptions& options) {
  KsStudyResult result;
  result.dirichlet = fit_mle(data, Model::Dirichlet,
                             grid_search_init(data, Model::Dirichlet, default_grid(data, Model::Dirichlet)),
                             options.fit);
  result.dg = fit_mle(data, Model::DG, grid_search_init(data, Model::DG, default_grid(data, Model::DG)),
                      options.fit);
  const DGParams dg = result.dg.dg_params();
  const DirichletParams dir = result.dirichlet.dirichlet_params();
  const KsScale scale = options.scale;
  const Simulator simulate_dg = [&dg, scale](std::size_t d, RngSeed s) {
    DataMatrix x = dg_sample(d, dg, s);
    if (scale == KsScale::Baseline) {
      for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < x.cols(); ++c) x(r, c) = gamma_cdf(x(r, c), dg.baseline(c));
      }
    }
    return x;
  };
  const Simulator simulate_d = [&dir](std::size_t d, RngSeed s) {
    return dirichlet_sample(d, dir, s);
  };
  result.reports = ks_ratio_reports(data, simulate_dg, simulate_d, options.d_sizes, options.m,
                                    options.seed, options.threads);
  return result;
}

std::vector<std::size_t> ecdf_rank(const DataMatrix& data) {
  if (data.rows() == 0) return {};
  const std::vector<double> self = ecdf_values(data, data);
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (self[a] != self[b]) return self[a] < self[b];
    const auto ra = data.row(a);
    const auto rb = data.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  for (auto& i : order) ++i;
  return order;
}

DataMatrix weibull_composition_generate(std::size_t n, std::span<const double> k,
                                        std::span<const double> lambda, RngSeed seed) {
  if (k.size() != lambda.size() || k.size() < 2) {
    throw ContractError("Weibull shapes and scales must have the same length (at least 2)");
  }
  std::vector<WeibullParams> w;
  for (std::size_t i = 0; i < k.size(); ++i) w.push_back({PositiveReal(k[i]), PositiveReal(lambda[i])});
  Xoshiro256 rng(seed);
  DataMatrix out(n, k.size());
  for (std::size_t r = 0; r < n; ++r) {
    auto row = out.row(r);
    double sum = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      row[i] = weibull_quantile(rng.uniform_open(), w[i]);
      sum += row[i];
    }
    for (double& v : row) v /= sum;
  }
  return out;
}

std::vector<QQPoint> distance_to_origin_qq(const DataMatrix& observed, const DataMatrix& simulated) {
  if (observed.rows() < 2 || simulated.rows() < 2) {
    throw ContractError("Q-Q data needs at least two rows in each set");
  }
  if (observed.cols() != simulated.cols()) {
    throw ContractError("observed and simulated sets have different dimensions");
  }
  const auto a = sorted_norms(observed);
  const auto b = sorted_norms(simulated);
  std::vector<QQPoint> out;
  for (int i = 1; i <= 99; ++i) {
    const double prob = i / 100.0;
    out.push_back({prob, type7_quantile(a, prob), type7_quantile(b, prob)});
  }
  return out;
}

}  // namespace dirgamma
