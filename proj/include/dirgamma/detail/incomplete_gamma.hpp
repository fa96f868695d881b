#pragma once

// Shape-specialized incomplete gamma evaluation shared by the scalar
// kernels, the quantile solver and the samplers. Caches ln Γ(a) so that
// repeated evaluations at a fixed shape skip the log-gamma call.

namespace dirgamma::detail {

struct GammaTail {
  double lower;      // P(a, z)
  double upper;      // Q(a, z)
  double log_lower;  // ln P(a, z)
  double log_prefix; // a ln z − z − ln Γ(a)
};

class IncompleteGamma {
 public:
  explicit IncompleteGamma(double shape);

  double shape() const noexcept { return shape_; }
  double log_gamma_shape() const noexcept { return log_gamma_shape_; }

  /// Both tails at z > 0; `log_z` must equal ln z.
  GammaTail evaluate(double z, double log_z) const;
  GammaTail evaluate(double z) const;

  /// Standardized quantile: z with P(a, z) = u.
  double quantile(double u) const;

 private:
  double log_prefix(double z, double log_z) const;

  double shape_;
  double log_gamma_shape_;
  double stirling_tail_;  // ln Γ(a) − Stirling leading terms, used when a is large
};

/// ln(1 + d) − d without cancellation for small |d|.
double log1pmx(double d);

}  // namespace dirgamma::detail
