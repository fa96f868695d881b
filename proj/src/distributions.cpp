#include "dirgamma/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dirgamma/error.hpp"

namespace dirgamma {

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

DataMatrix::DataMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw ContractError("DataMatrix: value count does not match shape");
  }
}

std::vector<double> DataMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

double gamma_log_pdf(double x, const GammaBaseline& g) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  const double theta = g.scale;
  const double beta = g.shape;
  return (beta - 1.0) * std::log(x) - x / theta - beta * std::log(theta) - log_gamma(beta);
}

double gamma_pdf(double x, const GammaBaseline& g) {
  if (!(x > 0.0)) return 0.0;
  return std::exp(gamma_log_pdf(x, g));
}

double gamma_cdf(double x, const GammaBaseline& g) {
  if (!(x >= 0.0)) throw DomainError("gamma_cdf: x must be >= 0");
  return reg_lower_gamma(g.shape, x / g.scale);
}

DirichletParams::DirichletParams(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() < 2) {
    throw DomainError("Dirichlet needs at least two concentration parameters");
  }
  total_ = 0.0;
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw DomainError("Dirichlet concentration must be positive, got " + std::to_string(a));
    }
    total_ += a;
  }
  log_beta_ = multivariate_beta_log(alpha_);
}

double dirichlet_log_pdf(std::span<const double> y, const DirichletParams& d) {
  if (y.size() != d.dimension()) {
    throw ContractError("dirichlet_log_pdf: point has wrong dimension");
  }
  const auto alpha = d.alpha();
  double sum = 0.0;
  double acc = -d.log_normalizer();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) return -std::numeric_limits<double>::infinity();
    sum += y[i];
    acc += (alpha[i] - 1.0) * std::log(y[i]);
  }
  const double rest = 1.0 - sum;
  if (!(rest > 0.0)) return -std::numeric_limits<double>::infinity();
  return acc + (alpha.back() - 1.0) * std::log(rest);
}

double dirichlet_pdf(std::span<const double> y, const DirichletParams& d) {
  return std::exp(dirichlet_log_pdf(y, d));
}

void dirichlet_draw(Xoshiro256& rng, const DirichletParams& d, std::span<double> out) {
  const auto alpha = d.alpha();
  const std::size_t p = d.dimension();
  if (out.size() != p) throw ContractError("dirichlet_draw: output has wrong dimension");
  // Work in log space so that small concentrations do not flush W_j to zero.
  double logw[64];
  std::vector<double> heap;
  double* lw = logw;
  if (p + 1 > 64) {
    heap.resize(p + 1);
    lw = heap.data();
  }
  for (;;) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= p; ++j) {
      lw[j] = log_gamma_variate(rng, alpha[j]);
      peak = std::max(peak, lw[j]);
    }
    double total = 0.0;
    for (std::size_t j = 0; j <= p; ++j) total += std::exp(lw[j] - peak);
    const double log_total = peak + std::log(total);
    double sum = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < p; ++i) {
      out[i] = std::exp(lw[i] - log_total);
      sum += out[i];
      ok = ok && out[i] > 0.0;
    }
    // Rounding can push a draw onto the simplex boundary; such draws are redrawn.
    if (ok && sum < 1.0) return;
  }
}

DataMatrix dirichlet_sample(std::size_t n, const DirichletParams& d, RngSeed seed) {
  Xoshiro256 rng(seed);
  DataMatrix out(n, d.dimension());
  for (std::size_t r = 0; r < n; ++r) dirichlet_draw(rng, d, out.row(r));
  return out;
}

double weibull_quantile(double u, const WeibullParams& w) {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("weibull_quantile: u must lie in [0, 1)");
  return w.scale * std::pow(-std::log1p(-u), 1.0 / w.shape);
}

std::vector<double> weibull_sample(std::size_t n, const WeibullParams& w, RngSeed seed) {
  Xoshiro256 rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = weibull_quantile(rng.uniform_open(), w);
  return out;
}

}  // namespace dirgamma
