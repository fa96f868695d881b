#include "dirgamma/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dirgamma/error.hpp"

namespace dirgamma {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class CountedObjective {
 public:
  explicit CountedObjective(const Objective& f) : f_(f) {}
  double operator()(std::span<const double> x) {
    ++count_;
    const double v = f_(x);
    return std::isnan(v) ? kInf : v;
  }
  std::size_t count() const noexcept { return count_; }

 private:
  const Objective& f_;
  std::size_t count_ = 0;
};

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::span<const double> start,
                             const NelderMeadOptions& options) {
  const std::size_t dim = start.size();
  if (dim == 0) throw ContractError("nelder_mead: empty starting point");
  CountedObjective f(objective);

  std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(start.begin(), start.end()));
  std::vector<double> values(dim + 1);
  values[0] = f(simplex[0]);
  if (!std::isfinite(values[0])) {
    throw InitializationError("objective is not finite at the starting point");
  }
  for (std::size_t i = 0; i < dim; ++i) {
    auto& v = simplex[i + 1];
    double step = options.initial_step;
    // Shrink (and flip) the step until the vertex is feasible.
    for (int attempt = 0; attempt < 40; ++attempt) {
      v[i] = start[i] + step;
      values[i + 1] = f(v);
      if (std::isfinite(values[i + 1])) break;
      step = attempt % 2 == 0 ? -step : -0.5 * step;
    }
  }

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), reflected(dim), trial(dim);
  NelderMeadResult result;
  std::size_t iterations = 0;
  bool converged = false;

  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s(dim + 1);
    std::vector<double> v(dim + 1);
    for (std::size_t k = 0; k <= dim; ++k) {
      s[k] = std::move(simplex[order[k]]);
      v[k] = values[order[k]];
    }
    simplex = std::move(s);
    values = std::move(v);
  };

  while (f.count() < options.max_evaluations) {
    sort_vertices();
    const auto& best = simplex[0];
    double scale = 1.0;
    for (double b : best) scale = std::max(scale, std::fabs(b));
    double diameter = 0.0;
    for (std::size_t k = 1; k <= dim; ++k) {
      for (std::size_t j = 0; j < dim; ++j) {
        diameter = std::max(diameter, std::fabs(simplex[k][j] - best[j]));
      }
    }
    const double spread = values[dim] - values[0];
    if (diameter <= options.xtol * scale ||
        spread <= options.ftol * (std::fabs(values[0]) + options.ftol)) {
      converged = true;
      break;
    }
    ++iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[k][j];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);
    const auto& worst = simplex[dim];

    for (std::size_t j = 0; j < dim; ++j) reflected[j] = centroid[j] + (centroid[j] - worst[j]);
    const double fr = f(reflected);

    if (fr < values[0]) {
      for (std::size_t j = 0; j < dim; ++j) trial[j] = centroid[j] + 2.0 * (centroid[j] - worst[j]);
      const double fe = f(trial);
      if (fe < fr) {
        simplex[dim] = trial;
        values[dim] = fe;
      } else {
        simplex[dim] = reflected;
        values[dim] = fr;
      }
      continue;
    }
    if (fr < values[dim - 1]) {
      simplex[dim] = reflected;
      values[dim] = fr;
      continue;
    }
    const bool outside = fr < values[dim];
    for (std::size_t j = 0; j < dim; ++j) {
      trial[j] = outside ? centroid[j] + 0.5 * (reflected[j] - centroid[j])
                         : centroid[j] + 0.5 * (worst[j] - centroid[j]);
    }
    const double fc = f(trial);
    if ((outside && fc <= fr) || (!outside && fc < values[dim])) {
      simplex[dim] = trial;
      values[dim] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= dim; ++k) {
      for (std::size_t j = 0; j < dim; ++j) {
        simplex[k][j] = simplex[0][j] + 0.5 * (simplex[k][j] - simplex[0][j]);
      }
      values[k] = f(simplex[k]);
    }
  }
  sort_vertices();
  result.x = simplex[0];
  result.value = values[0];
  result.converged = converged;
  result.iterations = iterations;
  result.evaluations = f.count();
  return result;
}

}  // namespace dirgamma
