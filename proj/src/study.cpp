#include "dirgamma/study.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dirgamma/error.hpp"
#include "dirgamma/parallel.hpp"

namespace dirgamma {
namespace {

constexpr std::uint64_t kDataStream = 1ull << 20;
constexpr std::uint64_t kBootStream = 2ull << 20;
constexpr std::uint64_t kObservedStream = 0x0b5ull;
constexpr std::uint64_t kScatterStream = 0x5ca7ull;
constexpr std::uint64_t kQqStream = 0x9090ull;

struct RepOutcome {
  std::optional<std::vector<double>> estimates;
  std::optional<IntervalSet> asymptotic;
  std::optional<IntervalSet> bootstrap;
  bool asymptotic_failed = false;
  bool bootstrap_failed = false;
};

RepOutcome run_replicate(const SimStudy1Config& config, std::size_t n, std::size_t rep) {
  RepOutcome out;
  const DataMatrix data =
      dg_sample(n, config.truth, derive_seed(config.seed, kDataStream + n, rep));
  const std::vector<double> init = config.truth.flat();
  FitResult fit;
  try {
    fit = fit_mle(data, Model::DG, init, config.fit);
  } catch (const NumericError&) {
    return out;
  }
  if (!fit.converged) return out;
  out.estimates = fit.estimates;
  try {
    out.asymptotic = asymptotic_ci(data, fit, config.level);
  } catch (const NumericError&) {
    out.asymptotic_failed = true;
  }
  if (config.boot > 0) {
    BootstrapOptions opts;
    opts.replicates = config.boot;
    opts.level = config.level;
    opts.seed = derive_seed(config.seed, kBootStream + n, rep);
    opts.threads = 1;
    opts.fit = config.boot_fit;
    try {
      out.bootstrap = bootstrap_ci(data, fit, opts);
    } catch (const NumericError&) {
      out.bootstrap_failed = true;
    }
  }
  return out;
}

void summarize_intervals(const std::vector<RepOutcome>& outcomes, bool bootstrap, std::size_t k,
                         double truth, double& coverage, double& length) {
  std::size_t count = 0, covered = 0;
  double total = 0.0;
  for (const auto& o : outcomes) {
    const auto& set = bootstrap ? o.bootstrap : o.asymptotic;
    if (!o.estimates || !set) continue;
    const Interval& iv = set->intervals[k];
    ++count;
    covered += (iv.lower <= truth && truth <= iv.upper) ? 1 : 0;
    total += iv.upper - iv.lower;
  }
  coverage = count ? static_cast<double>(covered) / static_cast<double>(count) : std::nan("");
  length = count ? total / static_cast<double>(count) : std::nan("");
}

}  // namespace

SimStudySummary run_simstudy1(const SimStudy1Config& config) {
  if (config.reps == 0) throw ContractError("simulation study needs reps >= 1");
  if (config.sizes.empty()) throw ContractError("simulation study needs at least one sample size");
  const std::vector<double> truth = config.truth.flat();
  const std::vector<std::string> names = DGParams::flat_names(config.truth.dimension());
  SimStudySummary summary;
  for (const std::size_t n : config.sizes) {
    if (n == 0) throw ContractError("sample sizes must be positive");
    std::vector<RepOutcome> outcomes(config.reps);
    parallel_for(config.reps, config.threads,
                 [&](std::size_t rep) { outcomes[rep] = run_replicate(config, n, rep); });

    SizeSummary size;
    size.n = n;
    size.reps = config.reps;
    for (const auto& o : outcomes) {
      if (!o.estimates) ++size.fit_failures;
      if (o.asymptotic_failed) ++size.asymptotic_failures;
      if (o.bootstrap_failed) ++size.bootstrap_failures;
      if (o.bootstrap && o.bootstrap->degraded) ++size.bootstrap_degraded;
    }
    size.failure_budget_exceeded = 20 * size.fit_failures > config.reps;
    for (std::size_t k = 0; k < truth.size(); ++k) {
      ParameterSummary ps;
      ps.name = names[k];
      ps.truth = truth[k];
      std::vector<double> est;
      for (const auto& o : outcomes) {
        if (o.estimates) est.push_back((*o.estimates)[k]);
      }
      if (!est.empty()) {
        const BiasMse bm = bias_mse(est, truth[k]);
        ps.mean = bm.mean;
        ps.bias = bm.bias;
        ps.mse = bm.mse;
      } else {
        ps.mean = ps.bias = ps.mse = std::nan("");
      }
      summarize_intervals(outcomes, false, k, truth[k], ps.cp_asymptotic, ps.len_asymptotic);
      summarize_intervals(outcomes, true, k, truth[k], ps.cp_bootstrap, ps.len_bootstrap);
      size.parameters.push_back(ps);
    }
    summary.sizes.push_back(std::move(size));
  }
  return summary;
}

SimStudy2Result run_simstudy2(const SimStudy2Config& config) {
  if (config.n_observed < 2) throw ContractError("observed sample needs at least two rows");
  SimStudy2Result result;
  result.observed = dirichlet_sample(config.n_observed, DirichletParams(config.alpha),
                                     derive_seed(config.ks.seed, kObservedStream));
  result.study = ks_ratio_study(result.observed, config.ks);
  return result;
}

ModelComparison fit_both(const DataMatrix& simplex_data, const FitOptions& fit) {
  ModelComparison out;
  out.dirichlet = fit_mle(
      simplex_data, Model::Dirichlet,
      grid_search_init(simplex_data, Model::Dirichlet, default_grid(simplex_data, Model::Dirichlet)),
      fit);
  out.dg = fit_mle(simplex_data, Model::DG,
                   grid_search_init(simplex_data, Model::DG, default_grid(simplex_data, Model::DG)),
                   fit);
  return out;
}

std::vector<ContourPoint> contour_grid(const FitResult& fit, double upper1, double upper2,
                                       std::size_t res) {
  if (fit.p != 2) throw ContractError("contour grids are two-dimensional");
  if (res == 0 || !(upper1 > 0.0) || !(upper2 > 0.0)) {
    throw ContractError("contour grid needs a positive resolution and extent");
  }
  std::vector<ContourPoint> grid;
  grid.reserve(res * res);
  std::optional<DGParams> dg;
  std::optional<DirichletParams> dir;
  if (fit.model == Model::DG) dg = fit.dg_params();
  else dir = fit.dirichlet_params();
  for (std::size_t i = 0; i < res; ++i) {
    for (std::size_t j = 0; j < res; ++j) {
      const double x[2] = {(static_cast<double>(i) + 0.5) * upper1 / static_cast<double>(res),
                           (static_cast<double>(j) + 0.5) * upper2 / static_cast<double>(res)};
      const double dens = dg ? dg_pdf(x, *dg) : dirichlet_pdf(x, *dir);
      grid.push_back({x[0], x[1], dens});
    }
  }
  return grid;
}

DataMatrix simulate_fit(const FitResult& fit, std::size_t d, RngSeed seed) {
  if (fit.model == Model::DG) return dg_sample(d, fit.dg_params(), seed);
  return dirichlet_sample(d, fit.dirichlet_params(), seed);
}

SimStudy3Result run_simstudy3(const SimStudy3Config& config) {
  if (config.n < 2) throw ContractError("simulation study 3 needs n >= 2");
  SimStudy3Result result;
  result.composition = weibull_composition_generate(config.n, config.k, config.lambda, config.seed);
  const DataMatrix data = to_open_simplex(result.composition);
  result.fits = fit_both(data, config.fit);
  result.simulated_dirichlet =
      simulate_fit(result.fits.dirichlet, config.n, derive_seed(config.seed, kScatterStream, 0));
  result.simulated_dg =
      simulate_fit(result.fits.dg, config.n, derive_seed(config.seed, kScatterStream, 1));
  if (data.cols() == 2) {
    result.contour_dirichlet = contour_grid(result.fits.dirichlet, 1.0, 1.0, config.contour_resolution);
    result.contour_dg = contour_grid(result.fits.dg, 1.0, 1.0, config.contour_resolution);
  }
  return result;
}

DataMatrix perturb_row(const DataMatrix& simplex_data, std::size_t row, double factor) {
  if (row == 0 || row > simplex_data.rows()) {
    throw ContractError("perturbed row index is out of range");
  }
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw ContractError("perturbation factor must be positive");
  }
  DataMatrix out = simplex_data;
  auto y = out.row(row - 1);
  const double sum = std::accumulate(y.begin(), y.end(), 0.0);
  const double total = factor * sum + (1.0 - sum);
  for (double& v : y) v = factor * v / total;
  return out;
}

GofResult run_gof(const DataMatrix& data, const GofConfig& config) {
  GofResult result;
  result.data = to_open_simplex(data);
  if (config.perturb_row) result.data = perturb_row(result.data, *config.perturb_row, config.factor);
  result.study = ks_ratio_study(result.data, config.ks);
  const DataMatrix sim_d = simulate_fit(result.study.dirichlet, config.qq_draws,
                                        derive_seed(config.ks.seed, kQqStream, 0));
  const DataMatrix sim_dg =
      simulate_fit(result.study.dg, config.qq_draws, derive_seed(config.ks.seed, kQqStream, 1));
  result.qq_dirichlet = distance_to_origin_qq(result.data, sim_d);
  result.qq_dg = distance_to_origin_qq(result.data, sim_dg);
  return result;
}

}  // namespace dirgamma
