#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dirgamma/distributions.hpp"
#include "dirgamma/inference.hpp"
#include "dirgamma/matrix.hpp"
#include "dirgamma/rng.hpp"

namespace dirgamma {

struct EcdfEvaluation {
  DataMatrix eval_points;      // k×p
  std::vector<double> values;  // k values in [0, 1]
};

/// F̂(x) = #{rows r : r ≤ x componentwise} / n at each evaluation point.
EcdfEvaluation empirical_cdf(const DataMatrix& data, const DataMatrix& eval_points);

/// max_j |a_j − b_j|.
double ks_distance(std::span<const double> a, std::span<const double> b);

struct KSReport {
  double ks_dg = 0.0;  // mean over the m replications
  double ks_d = 0.0;
  double ratio = 0.0;  // ks_dg / ks_d (0 when ks_d is 0)
  std::size_t d = 0;
  std::size_t m = 0;
  double ks_dg_stderr = 0.0;
  double ks_d_stderr = 0.0;

  bool operator==(const KSReport&) const = default;
};

/// Draws d rows from a fitted model.
using Simulator = std::function<DataMatrix(std::size_t d, RngSeed seed)>;

/// Average KS distances between the observed ecdf and the ecdfs of samples
/// from two simulators, evaluated at the observed rows. Replication j of
/// size d uses seeds derived from (seed, d-index, j), so the result does not
/// depend on `threads`.
std::vector<KSReport> ks_ratio_reports(const DataMatrix& observed, const Simulator& simulate_dg,
                                       const Simulator& simulate_d,
                                       std::span<const std::size_t> d_sizes, std::size_t m,
                                       RngSeed seed, std::size_t threads = 1);

/// Scale on which DG samples are compared with the observed rows.
enum class KsScale {
  Observed,  // raw DG draws
  Baseline,  // DG draws pushed through their baseline cdfs, (G₁(x₁), …, G_p(x_p))
};

struct KsStudyOptions {
  std::vector<std::size_t> d_sizes{100, 1000, 10000};
  std::size_t m = 100;
  RngSeed seed{0};
  std::size_t threads = 1;
  KsScale scale = KsScale::Observed;
  FitOptions fit{};
};

struct KsStudyResult {
  FitResult dirichlet;
  FitResult dg;
  std::vector<KSReport> reports;
};

/// Fits both models to simplex data (grid-search start, then Nelder-Mead)
/// and runs ks_ratio_reports with samplers built from the two fits.
KsStudyResult ks_ratio_study(const DataMatrix& data, const KsStudyOptions& options);

/// 1-based permutation ordering rows by their own ecdf value, ties broken
/// lexicographically on the row (first coordinate first), then by position.
std::vector<std::size_t> ecdf_rank(const DataMatrix& data);

/// Rows W / ΣW with independent W_i ~ Weibull(k_i, λ_i): n×q points on S_q.
DataMatrix weibull_composition_generate(std::size_t n, std::span<const double> k,
                                        std::span<const double> lambda, RngSeed seed);

struct QQPoint {
  double probability;
  double observed;
  double simulated;
};

/// Type-7 quantiles of the row norms of both sets at probabilities 0.01..0.99.
std::vector<QQPoint> distance_to_origin_qq(const DataMatrix& observed, const DataMatrix& simulated);

}  // namespace dirgamma
