#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dirgamma/distributions.hpp"
#include "dirgamma/matrix.hpp"
#include "dirgamma/rng.hpp"

namespace dirgamma {

/// Parameters of the Dirichlet-Gamma distribution DG(α, θ, β) in dimension p:
/// Dirichlet concentrations α (p + 1 of them), gamma baseline scales θ and
/// shapes β (p each). Every entry must be strictly positive.
///
/// The flat parameter vector used by the fitting code is ordered
/// (α₁..α_{p+1}, β₁..β_p, θ₁..θ_p).
class DGParams {
 public:
  DGParams(std::vector<double> alpha, std::vector<double> theta, std::vector<double> beta);

  static DGParams from_flat(std::span<const double> psi);
  std::vector<double> flat() const;
  /// Names matching flat(): alpha1.., beta1.., theta1..
  static std::vector<std::string> flat_names(std::size_t p);
  static std::size_t flat_size(std::size_t p) noexcept { return 3 * p + 1; }

  std::size_t dimension() const noexcept { return theta_.size(); }
  std::span<const double> alpha() const noexcept { return alpha_; }
  std::span<const double> theta() const noexcept { return theta_; }
  std::span<const double> beta() const noexcept { return beta_; }
  double alpha_total() const noexcept { return alpha_total_; }
  double log_normalizer() const noexcept { return log_beta_; }

  GammaBaseline baseline(std::size_t i) const;
  DirichletParams dirichlet() const { return DirichletParams(alpha_); }

  bool operator==(const DGParams& other) const {
    return alpha_ == other.alpha_ && theta_ == other.theta_ && beta_ == other.beta_;
  }

 private:
  std::vector<double> alpha_;
  std::vector<double> theta_;
  std::vector<double> beta_;
  double alpha_total_;
  double log_beta_;
};

/// True iff 0 < Σ G_i(x_i) < 1.
bool support_indicator(std::span<const double> x, const DGParams& params);

/// Joint log-density; −∞ off the support.
double dg_log_pdf(std::span<const double> x, const DGParams& params);
double dg_pdf(std::span<const double> x, const DGParams& params);

struct CdfEstimate {
  double value;
  double std_error;
};

/// Monte-Carlo estimate of H(x) = P(Y₁ ≤ G₁(x₁), …, Y_p ≤ G_p(x_p)), Y ~ Dir(α).
/// Coordinates may be zero here (H = 0 on that face).
CdfEstimate builder4_cdf(std::span<const double> x, const DGParams& params, std::size_t mc_n,
                         RngSeed seed);

/// Deterministic H(x) for p = 2: one coordinate integrated in closed form
/// through the incomplete beta, the other by adaptive Gauss-Kronrod.
double builder4_cdf_quadrature(std::span<const double> x, const DGParams& params);

/// Marginal density of X_i (0-based i): a beta-generated gamma density with
/// beta parameters (α_i, α₊ − α_i).
double marginal_pdf(double xi, std::size_t i, const DGParams& params);
double marginal_log_pdf(double xi, std::size_t i, const DGParams& params);
/// I_{G_i(x)}(α_i, α₊ − α_i).
double marginal_cdf(double xi, std::size_t i, const DGParams& params);

/// Exact sampler: X_i = G_i⁻¹(Y_i) with (Y₁..Y_p) ~ Dir(α). Each row is in the support.
DataMatrix dg_sample(std::size_t n, const DGParams& params, RngSeed seed);

}  // namespace dirgamma
