#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dirgamma/dg_model.hpp"
#include "dirgamma/inference.hpp"
#include "dirgamma/matrix.hpp"
#include "dirgamma/model_testing.hpp"
#include "dirgamma/rng.hpp"

namespace dirgamma {

// Simulation study 1: repeated DG fits at known parameters.

struct SimStudy1Config {
  DGParams truth{{2.0, 2.0, 3.0}, {1.1, 1.2}, {1.5, 2.8}};
  std::vector<std::size_t> sizes{100, 500, 1000};
  std::size_t reps = 200;
  std::size_t boot = 200;  // 0 disables the bootstrap
  double level = 0.95;
  RngSeed seed{1};
  std::size_t threads = 1;
  FitOptions fit{};
  FitOptions boot_fit{};
};

struct ParameterSummary {
  std::string name;
  double truth = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double mse = 0.0;
  double cp_asymptotic = 0.0;
  double cp_bootstrap = 0.0;
  double len_asymptotic = 0.0;
  double len_bootstrap = 0.0;
};

struct SizeSummary {
  std::size_t n = 0;
  std::size_t reps = 0;
  std::size_t fit_failures = 0;        // threw or did not converge
  std::size_t asymptotic_failures = 0;  // singular information
  std::size_t bootstrap_failures = 0;   // threw
  std::size_t bootstrap_degraded = 0;   // > 20% failed refits
  /// More than 5% of the replications failed to produce a fit.
  bool failure_budget_exceeded = false;
  std::vector<ParameterSummary> parameters;
};

struct SimStudySummary {
  std::vector<SizeSummary> sizes;
};

SimStudySummary run_simstudy1(const SimStudy1Config& config);

// Simulation study 2: KS ratio on Dirichlet data.

struct SimStudy2Config {
  std::vector<double> alpha{2.0, 2.0, 3.0};
  std::size_t n_observed = 100;
  KsStudyOptions ks{};
};

struct SimStudy2Result {
  DataMatrix observed;
  KsStudyResult study;
};

SimStudy2Result run_simstudy2(const SimStudy2Config& config);

// Shared by simulation study 3 and the goodness-of-fit command.

struct ModelComparison {
  FitResult dirichlet;
  FitResult dg;
};

/// Grid-search start followed by Nelder-Mead for both models.
ModelComparison fit_both(const DataMatrix& simplex_data, const FitOptions& fit = {});

struct ContourPoint {
  double x1;
  double x2;
  double density;
};

/// Density of a fitted model on a res×res grid of cell centres covering
/// [0, upper₁]×[0, upper₂]; zero where the density is not defined.
std::vector<ContourPoint> contour_grid(const FitResult& fit, double upper1, double upper2,
                                       std::size_t res);

/// d draws from a fitted model.
DataMatrix simulate_fit(const FitResult& fit, std::size_t d, RngSeed seed);

struct SimStudy3Config {
  std::vector<double> k{0.8, 1.0, 1.2};
  std::vector<double> lambda{1.0, 1.0, 1.0};
  std::size_t n = 200;
  RngSeed seed{1};
  std::size_t contour_resolution = 50;
  FitOptions fit{};
};

struct SimStudy3Result {
  DataMatrix composition;  // n×q rows on S_q
  ModelComparison fits;
  DataMatrix simulated_dirichlet;
  DataMatrix simulated_dg;
  std::vector<ContourPoint> contour_dirichlet;
  std::vector<ContourPoint> contour_dg;
};

SimStudy3Result run_simstudy3(const SimStudy3Config& config);

/// Multiplies the open-simplex coordinates of row `row` (1-based) by `factor`
/// and rescales the full composition (coordinates plus remainder) to sum to one.
DataMatrix perturb_row(const DataMatrix& simplex_data, std::size_t row, double factor);

struct GofConfig {
  std::optional<std::size_t> perturb_row;
  double factor = 5.0;
  std::size_t qq_draws = 10000;
  KsStudyOptions ks{};
};

struct GofResult {
  DataMatrix data;  // after to_open_simplex and any perturbation
  KsStudyResult study;
  std::vector<QQPoint> qq_dirichlet;
  std::vector<QQPoint> qq_dg;
};

GofResult run_gof(const DataMatrix& data, const GofConfig& config);

}  // namespace dirgamma
