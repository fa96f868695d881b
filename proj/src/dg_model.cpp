#include "dirgamma/dg_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dirgamma/detail/incomplete_gamma.hpp"
#include "dirgamma/error.hpp"

namespace dirgamma {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kBoundaryFloor = 1e-300;

void check_positive(const std::vector<double>& v, const char* name) {
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw DomainError(std::string("DGParams: ") + name + " entries must be positive");
    }
  }
}

void check_observation(std::span<const double> x, const DGParams& params) {
  if (x.size() != params.dimension()) {
    throw ContractError("observation dimension does not match DG parameters");
  }
}

}  // namespace

DGParams::DGParams(std::vector<double> alpha, std::vector<double> theta, std::vector<double> beta)
    : alpha_(std::move(alpha)), theta_(std::move(theta)), beta_(std::move(beta)) {
  if (theta_.empty() || theta_.size() != beta_.size() || alpha_.size() != theta_.size() + 1) {
    throw ContractError("DGParams: need |alpha| = p + 1 and |theta| = |beta| = p >= 1");
  }
  check_positive(alpha_, "alpha");
  check_positive(theta_, "theta");
  check_positive(beta_, "beta");
  alpha_total_ = 0.0;
  for (double a : alpha_) alpha_total_ += a;
  log_beta_ = multivariate_beta_log(alpha_);
}

DGParams DGParams::from_flat(std::span<const double> psi) {
  if (psi.size() < 4 || (psi.size() - 1) % 3 != 0) {
    throw ContractError("DG flat parameter vector must have length 3p + 1");
  }
  const std::size_t p = (psi.size() - 1) / 3;
  std::vector<double> alpha(psi.begin(), psi.begin() + p + 1);
  std::vector<double> beta(psi.begin() + p + 1, psi.begin() + 2 * p + 1);
  std::vector<double> theta(psi.begin() + 2 * p + 1, psi.end());
  return DGParams(std::move(alpha), std::move(theta), std::move(beta));
}

std::vector<double> DGParams::flat() const {
  std::vector<double> out(alpha_);
  out.insert(out.end(), beta_.begin(), beta_.end());
  out.insert(out.end(), theta_.begin(), theta_.end());
  return out;
}

std::vector<std::string> DGParams::flat_names(std::size_t p) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= p + 1; ++i) names.push_back("alpha" + std::to_string(i));
  for (std::size_t i = 1; i <= p; ++i) names.push_back("beta" + std::to_string(i));
  for (std::size_t i = 1; i <= p; ++i) names.push_back("theta" + std::to_string(i));
  return names;
}

GammaBaseline DGParams::baseline(std::size_t i) const {
  if (i >= dimension()) throw ContractError("baseline index out of range");
  return GammaBaseline{PositiveReal(theta_[i]), PositiveReal(beta_[i])};
}

bool support_indicator(std::span<const double> x, const DGParams& params) {
  check_observation(x, params);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw DomainError("support_indicator: coordinates must be positive");
    sum += reg_lower_gamma(params.beta()[i], x[i] / params.theta()[i]);
  }
  return sum > 0.0 && sum < 1.0;
}

double dg_log_pdf(std::span<const double> x, const DGParams& params) {
  check_observation(x, params);
  const auto alpha = params.alpha();
  double sum = 0.0;
  double acc = -params.log_normalizer();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw DomainError("dg_log_pdf: coordinates must be positive");
    const double theta = params.theta()[i];
    const double beta = params.beta()[i];
    const detail::IncompleteGamma ig(beta);
    const double z = x[i] / theta;
    const double log_z = std::log(z);
    const detail::GammaTail g = ig.evaluate(z, log_z);
    sum += g.lower;
    const double log_density = (beta - 1.0) * log_z - z - std::log(theta) - ig.log_gamma_shape();
    acc += log_density + (alpha[i] - 1.0) * g.log_lower;
  }
  if (!(sum > 0.0 && sum < 1.0)) return kNegInf;
  return acc + (alpha.back() - 1.0) * std::log(std::max(1.0 - sum, kBoundaryFloor));
}

double dg_pdf(std::span<const double> x, const DGParams& params) {
  return std::exp(dg_log_pdf(x, params));
}

CdfEstimate builder4_cdf(std::span<const double> x, const DGParams& params, std::size_t mc_n,
                         RngSeed seed) {
  check_observation(x, params);
  if (mc_n == 0) throw ContractError("builder4_cdf: mc_n must be >= 1");
  const std::size_t p = x.size();
  std::vector<double> limit(p);
  for (std::size_t i = 0; i < p; ++i) {
    if (!(x[i] >= 0.0)) throw DomainError("builder4_cdf: coordinates must be >= 0");
    limit[i] = std::isinf(x[i]) ? 1.0 : gamma_cdf(x[i], params.baseline(i));
    if (limit[i] == 0.0) return {0.0, 0.0};
  }
  const DirichletParams dir = params.dirichlet();
  Xoshiro256 rng(seed);
  std::vector<double> y(p);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < mc_n; ++k) {
    dirichlet_draw(rng, dir, y);
    bool inside = true;
    for (std::size_t i = 0; i < p && inside; ++i) inside = y[i] <= limit[i];
    hits += inside ? 1 : 0;
  }
  const double n = static_cast<double>(mc_n);
  const double est = static_cast<double>(hits) / n;
  return {est, std::sqrt(est * (1.0 - est) / n)};
}

double builder4_cdf_quadrature(std::span<const double> x, const DGParams& params) {
  check_observation(x, params);
  if (params.dimension() != 2) {
    throw ContractError("builder4_cdf_quadrature is only available for p = 2");
  }
  double g[2];
  for (std::size_t i = 0; i < 2; ++i) {
    if (!(x[i] >= 0.0)) throw DomainError("builder4_cdf_quadrature: coordinates must be >= 0");
    g[i] = std::isinf(x[i]) ? 1.0 : gamma_cdf(x[i], params.baseline(i));
  }
  if (g[0] == 0.0 || g[1] == 0.0) return 0.0;
  const auto a = params.alpha();
  const double log_b23 = log_beta(a[1], a[2]);
  // H = (1/B(α)) ∫₀^{g1} y^{a1−1} (1−y)^{a2+a3−1} B(a2,a3) I_{min(1, g2/(1−y))}(a2, a3) dy.
  // Substituting y = g1·t^{1/a1} absorbs the y^{a1−1} factor.
  auto integrand = [&](double t) {
    if (t <= 0.0) t = std::numeric_limits<double>::min();
    const double y = g[0] * std::pow(t, 1.0 / a[0]);
    const double rest = 1.0 - y;
    if (!(rest > 0.0)) return 0.0;
    const double limit = std::min(1.0, g[1] / rest);
    const double inner = reg_incomplete_beta(a[1], a[2], limit);
    return std::exp((a[1] + a[2] - 1.0) * std::log(rest) + log_b23) * inner;
  };
  using boost::math::quadrature::gauss_kronrod;
  // The inner limit saturates at y = 1 − g2; split there.
  const double kink_y = 1.0 - g[1];
  double integral = 0.0;
  if (kink_y > 0.0 && kink_y < g[0]) {
    const double kink_t = std::pow(kink_y / g[0], a[0]);
    integral = gauss_kronrod<double, 31>::integrate(integrand, 0.0, kink_t, 15, 1e-12) +
               gauss_kronrod<double, 31>::integrate(integrand, kink_t, 1.0, 15, 1e-12);
  } else {
    integral = gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, 1e-12);
  }
  const double scale = std::exp(a[0] * std::log(g[0]) - std::log(a[0]) - params.log_normalizer());
  return std::clamp(scale * integral, 0.0, 1.0);
}

double marginal_log_pdf(double xi, std::size_t i, const DGParams& params) {
  if (i >= params.dimension()) throw ContractError("marginal index out of range");
  if (!(xi > 0.0)) return kNegInf;
  const double a = params.alpha()[i];
  const double b = params.alpha_total() - a;
  const double theta = params.theta()[i];
  const detail::IncompleteGamma ig(params.beta()[i]);
  const double z = xi / theta;
  const double log_z = std::log(z);
  const detail::GammaTail g = ig.evaluate(z, log_z);
  if (g.upper <= 0.0) return kNegInf;
  const double log_density =
      (params.beta()[i] - 1.0) * log_z - z - std::log(theta) - ig.log_gamma_shape();
  return -log_beta(a, b) + log_density + (a - 1.0) * g.log_lower + (b - 1.0) * std::log(g.upper);
}

double marginal_pdf(double xi, std::size_t i, const DGParams& params) {
  return std::exp(marginal_log_pdf(xi, i, params));
}

double marginal_cdf(double xi, std::size_t i, const DGParams& params) {
  if (i >= params.dimension()) throw ContractError("marginal index out of range");
  if (!(xi > 0.0)) return 0.0;
  if (std::isinf(xi)) return 1.0;
  const double a = params.alpha()[i];
  const double b = params.alpha_total() - a;
  const detail::GammaTail g = detail::IncompleteGamma(params.beta()[i]).evaluate(xi / params.theta()[i]);
  if (g.lower <= 0.5) return reg_incomplete_beta(a, b, g.lower);
  return 1.0 - reg_incomplete_beta(b, a, g.upper);
}

DataMatrix dg_sample(std::size_t n, const DGParams& params, RngSeed seed) {
  const std::size_t p = params.dimension();
  const DirichletParams dir = params.dirichlet();
  std::vector<detail::IncompleteGamma> inverse;
  inverse.reserve(p);
  for (std::size_t i = 0; i < p; ++i) inverse.emplace_back(params.beta()[i]);

  Xoshiro256 rng(seed);
  DataMatrix out(n, p);
  std::vector<double> y(p);
  for (std::size_t r = 0; r < n; ++r) {
    auto row = out.row(r);
    for (;;) {
      dirichlet_draw(rng, dir, y);
      double sum = 0.0;
      bool positive = true;
      for (std::size_t i = 0; i < p; ++i) {
        const double z = inverse[i].quantile(y[i]);
        row[i] = params.theta()[i] * z;
        positive = positive && row[i] > 0.0;
        if (positive) sum += inverse[i].evaluate(row[i] / params.theta()[i]).lower;
      }
      // Inversion is exact only up to rounding; keep the draw inside the support.
      if (positive && sum < 1.0) break;
    }
  }
  return out;
}

}  // namespace dirgamma
