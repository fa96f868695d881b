#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dirgamma/matrix.hpp"
#include "dirgamma/rng.hpp"
#include "dirgamma/special_fn.hpp"

namespace dirgamma {

/// Gamma baseline with scale θ and shape β (mean θβ).
struct GammaBaseline {
  PositiveReal scale;
  PositiveReal shape;
};

/// Density; 0 for x ≤ 0. Diverges as x → 0⁺ when β < 1, use gamma_log_pdf there.
double gamma_pdf(double x, const GammaBaseline& g);
double gamma_log_pdf(double x, const GammaBaseline& g);
double gamma_cdf(double x, const GammaBaseline& g);

/// Concentrations (α₁..α_p; α_{p+1}) of a Dirichlet on the open simplex Ω_p.
class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> alpha);

  std::span<const double> alpha() const noexcept { return alpha_; }
  /// p, the number of free coordinates (one less than the number of concentrations).
  std::size_t dimension() const noexcept { return alpha_.size() - 1; }
  double total() const noexcept { return total_; }
  double log_normalizer() const noexcept { return log_beta_; }

 private:
  std::vector<double> alpha_;
  double total_;
  double log_beta_;
};

/// Log-density on Ω_p; −∞ outside the open simplex.
double dirichlet_log_pdf(std::span<const double> y, const DirichletParams& d);
double dirichlet_pdf(std::span<const double> y, const DirichletParams& d);

/// One Dirichlet draw (Y₁..Y_p) into `out`. Every coordinate is strictly
/// positive and the coordinates sum to strictly less than one.
void dirichlet_draw(Xoshiro256& rng, const DirichletParams& d, std::span<double> out);

/// n draws as an n×p matrix. Y_i = W_i / Σ_{j=1}^{p+1} W_j with W_j ~ Gamma(α_j, 1).
DataMatrix dirichlet_sample(std::size_t n, const DirichletParams& d, RngSeed seed);

struct WeibullParams {
  PositiveReal shape;  // k
  PositiveReal scale;  // λ
};

/// Inverse cdf λ(−ln(1−u))^{1/k}.
double weibull_quantile(double u, const WeibullParams& w);
std::vector<double> weibull_sample(std::size_t n, const WeibullParams& w, RngSeed seed);

}  // namespace dirgamma
