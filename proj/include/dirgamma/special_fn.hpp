#pragma once

#include <span>

#include "dirgamma/error.hpp"

namespace dirgamma {

/// Strictly positive, finite real. Shape, scale and concentration
/// parameters are carried in this type so that validation happens once.
class PositiveReal {
 public:
  explicit PositiveReal(double value);

  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

/// ln Γ(a) for a > 0.
double log_gamma(double a);

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b).
double log_beta(double a, double b);

/// ln B(α) = Σ ln Γ(α_i) − ln Γ(Σ α_i), the log of the Dirichlet normalizer.
/// Requires at least two strictly positive components.
double multivariate_beta_log(std::span<const double> alpha);

/// Regularized lower incomplete gamma P(a, x).
///
/// Series expansion below x = a + 1, Lentz continued fraction for the
/// complement above it.
double reg_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 − P(a, x), computed
/// without cancellation in the upper tail.
double reg_upper_gamma(double a, double x);

/// ln P(a, x); stays finite where P itself underflows.
double log_reg_lower_gamma(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double reg_incomplete_beta(double a, double b, double x);

/// Quantile of Gamma(shape, scale): the x with P(shape, x / scale) = u.
///
/// Safeguarded Newton iteration inside a shrinking bracket; falls back to
/// bisection whenever a Newton step leaves the bracket. Throws NumericError
/// when the iteration cap (200) is reached without convergence.
double gamma_quantile(double shape, double scale, double u);

/// Standard normal quantile Φ⁻¹(u), u ∈ (0, 1).
double normal_quantile(double u);

}  // namespace dirgamma
