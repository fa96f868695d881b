#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dirgamma {

struct NelderMeadOptions {
  std::size_t max_evaluations = 20000;
  /// Converged once every vertex lies within xtol·max(1, ‖best‖∞) of the best vertex...
  double xtol = 1e-8;
  /// ...or the objective spread satisfies |f_worst − f_best| ≤ ftol·(|f_best| + ftol).
  double ftol = 1e-8;
  double initial_step = 0.1;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
};

/// Objective to minimize; may return +∞ (or NaN, treated as +∞) for infeasible points.
using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free minimization with the standard reflection/expansion/
/// contraction/shrink coefficients (1, 2, ½, ½). Throws InitializationError
/// if the objective is not finite at `start`.
NelderMeadResult nelder_mead(const Objective& objective, std::span<const double> start,
                             const NelderMeadOptions& options = {});

}  // namespace dirgamma
