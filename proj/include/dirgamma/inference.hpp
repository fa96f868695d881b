#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dirgamma/dg_model.hpp"
#include "dirgamma/distributions.hpp"
#include "dirgamma/matrix.hpp"
#include "dirgamma/nelder_mead.hpp"
#include "dirgamma/rng.hpp"

namespace dirgamma {

enum class Model { Dirichlet, DG };

std::string model_name(Model model);
/// Accepts "dirichlet"/"d" and "dg"; throws ContractError otherwise.
Model parse_model(const std::string& name);

/// Number of free parameters: p + 1 for the Dirichlet, 3p + 1 for DG.
std::size_t parameter_count(Model model, std::size_t p) noexcept;
std::vector<std::string> parameter_names(Model model, std::size_t p);

/// DG log-likelihood of a fixed data set. Rows are stored in lexicographic
/// order so that the value does not depend on the order of the input rows.
/// Holds scratch buffers: one instance per thread.
class DGLogLikelihood {
 public:
  /// Throws DomainError unless every entry is finite and strictly positive.
  explicit DGLogLikelihood(const DataMatrix& data);

  std::size_t rows() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return p_; }

  /// −∞ if any row leaves the support. Throws ContractError on a dimension mismatch.
  double operator()(const DGParams& params) const;
  double operator()(std::span<const double> flat) const;

  /// Rows with Σ G_i ∉ (0, 1) under `params`.
  std::size_t count_off_support(const DGParams& params) const;

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<double> x_;      // column-major p×n
  std::vector<double> log_x_;  // column-major p×n
  mutable std::vector<double> cdf_, log_cdf_, log_pdf_;
};

/// Dirichlet log-likelihood through the sufficient statistics Σ ln y_i.
/// Rows must lie in the open simplex (p coordinates, implicit last one);
/// any other row makes every value −∞.
class DirichletLogLikelihood {
 public:
  explicit DirichletLogLikelihood(const DataMatrix& data);

  std::size_t rows() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return p_; }
  std::size_t off_simplex_rows() const noexcept { return off_simplex_; }

  double operator()(std::span<const double> alpha) const;

 private:
  std::size_t n_;
  std::size_t p_;
  std::size_t off_simplex_ = 0;
  std::vector<double> log_sums_;  // p + 1 entries
};

double log_likelihood(const DataMatrix& data, const DGParams& params);
double dirichlet_log_likelihood(const DataMatrix& data, std::span<const double> alpha);
/// Either of the above for a flat parameter vector.
double model_log_likelihood(const DataMatrix& data, Model model, std::span<const double> flat);

/// Drops the last column when every row already sums to one (a closed
/// composition), turning S_{p+1} data into Ω_p coordinates. Other data is returned unchanged.
DataMatrix to_open_simplex(const DataMatrix& data);

struct InformationCriteria {
  double aic;
  double bic;
};

/// AIC = 2m − 2ℓ, BIC = m ln N − 2ℓ.
InformationCriteria information_criteria(double loglik, std::size_t m, std::size_t n);

struct FitOptions {
  NelderMeadOptions nelder_mead{};
  /// Extra Nelder-Mead runs started from the previous optimum.
  std::size_t restarts = 1;
};

struct FitResult {
  Model model = Model::DG;
  std::size_t p = 0;
  std::vector<double> estimates;  // flat order, see parameter_names
  std::vector<std::string> names;
  double loglik = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  double aic = 0.0;
  double bic = 0.0;
  std::size_t n_obs = 0;
  std::size_t n_params = 0;

  DGParams dg_params() const;
  DirichletParams dirichlet_params() const;

  bool operator==(const FitResult&) const = default;
};

/// Maximum likelihood by Nelder-Mead on the log parameters.
/// Throws InitializationError when the log-likelihood is −∞ at `init`.
FitResult fit_mle(const DataMatrix& data, Model model, std::span<const double> init,
                  const FitOptions& options = {});

/// Cartesian grid, one axis of candidate values per flat parameter.
struct GridSpec {
  std::vector<std::vector<double>> axes;
};

/// A coarse data-adaptive grid: concentrations on a fixed ladder, gamma
/// scales proportional to the column means.
GridSpec default_grid(const DataMatrix& data, Model model);

/// Grid point with the largest log-likelihood; ties go to the
/// lexicographically smallest point. Throws ContractError for an empty or
/// non-finite grid and InitializationError if every point is off the support.
std::vector<double> grid_search_init(const DataMatrix& data, Model model, const GridSpec& grid);

enum class IntervalMethod { Asymptotic, Bootstrap };
std::string interval_method_name(IntervalMethod method);

struct Interval {
  std::string name;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double std_error = 0.0;

  bool operator==(const Interval&) const = default;
};

struct IntervalSet {
  IntervalMethod method = IntervalMethod::Asymptotic;
  double level = 0.95;
  std::vector<Interval> intervals;
  /// Bootstrap bookkeeping; zero for asymptotic intervals.
  std::size_t replicates = 0;
  std::size_t failures = 0;
  /// More than 20% of the bootstrap refits failed.
  bool degraded = false;
  /// Condition number of the observed information (asymptotic only).
  double condition = 0.0;

  bool operator==(const IntervalSet&) const = default;
};

/// Wald intervals from the inverse of a central finite-difference Hessian of
/// −ℓ at the estimate; lower bounds clipped at zero. Throws SingularityError
/// when the information matrix is not positive definite or is numerically singular.
IntervalSet asymptotic_ci(const DataMatrix& data, const FitResult& fit, double level = 0.95);

struct BootstrapOptions {
  std::size_t replicates = 200;
  double level = 0.95;
  RngSeed seed{0};
  /// Worker threads for the refits (0 = hardware concurrency).
  std::size_t threads = 1;
  FitOptions fit{};
};

/// Parametric bootstrap percentile intervals: `replicates` data sets of the
/// original size are drawn from the fitted model and refitted from the
/// estimate. Bounds are the order statistics at ranks ⌊(B+1)(1−level)/2⌋ and
/// ⌈(B+1)(1+level)/2⌉ among the successful refits.
IntervalSet bootstrap_ci(const DataMatrix& data, const FitResult& fit,
                         const BootstrapOptions& options);

struct BiasMse {
  double mean;
  double bias;
  double mse;
};

/// Mean, bias and MSE of repeated estimates. The MSE is accumulated as
/// bias² + variance, which equals Σ(ψ̂_k − ψ)²/K and keeps mse ≥ bias².
BiasMse bias_mse(std::span<const double> estimates, double true_value);

}  // namespace dirgamma
