#include "dirgamma/inference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "dirgamma/error.hpp"
#include "dirgamma/parallel.hpp"
#include "dirgamma/simd/kernels.hpp"
#include "dirgamma/special_fn.hpp"

namespace dirgamma {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kBootstrapStream = 0xb0075ull;

std::vector<std::size_t> lexicographic_order(const DataMatrix& data) {
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = data.row(a);
    const auto rb = data.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  return order;
}

bool all_positive_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0.0; });
}

}  // namespace

std::string model_name(Model model) { return model == Model::DG ? "dg" : "dirichlet"; }

Model parse_model(const std::string& name) {
  if (name == "dg" || name == "DG") return Model::DG;
  if (name == "dirichlet" || name == "d" || name == "D") return Model::Dirichlet;
  throw ContractError("unknown model '" + name + "' (expected dirichlet or dg)");
}

std::size_t parameter_count(Model model, std::size_t p) noexcept {
  return model == Model::DG ? 3 * p + 1 : p + 1;
}

std::vector<std::string> parameter_names(Model model, std::size_t p) {
  if (model == Model::DG) return DGParams::flat_names(p);
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= p + 1; ++i) names.push_back("alpha" + std::to_string(i));
  return names;
}

DGLogLikelihood::DGLogLikelihood(const DataMatrix& data) : n_(data.rows()), p_(data.cols()) {
  if (n_ == 0 || p_ == 0) throw ContractError("log-likelihood needs a non-empty data matrix");
  if (!all_positive_finite(data.values())) {
    throw DomainError("DG data entries must be finite and strictly positive");
  }
  const auto order = lexicographic_order(data);
  x_.resize(n_ * p_);
  log_x_.resize(n_ * p_);
  for (std::size_t c = 0; c < p_; ++c) {
    for (std::size_t r = 0; r < n_; ++r) {
      const double v = data(order[r], c);
      x_[c * n_ + r] = v;
      log_x_[c * n_ + r] = std::log(v);
    }
  }
  cdf_.resize(n_ * p_);
  log_cdf_.resize(n_ * p_);
  log_pdf_.resize(n_ * p_);
}

double DGLogLikelihood::operator()(const DGParams& params) const {
  if (params.dimension() != p_) {
    throw ContractError("DG parameters do not match the data dimension");
  }
  std::vector<const double*> cdf(p_), log_cdf(p_), log_pdf(p_);
  for (std::size_t i = 0; i < p_; ++i) {
    const std::size_t off = i * n_;
    const std::span<const double> x(x_.data() + off, n_);
    const std::span<const double> lx(log_x_.data() + off, n_);
    simd::gamma_baseline(params.beta()[i], params.theta()[i], x, lx,
                         {{cdf_.data() + off, n_}, {log_cdf_.data() + off, n_},
                          {log_pdf_.data() + off, n_}});
    cdf[i] = cdf_.data() + off;
    log_cdf[i] = log_cdf_.data() + off;
    log_pdf[i] = log_pdf_.data() + off;
  }
  const double body = simd::dg_loglik_reduce(n_, {cdf, log_cdf, log_pdf}, params.alpha());
  if (body == kNegInf) return kNegInf;
  return body - static_cast<double>(n_) * params.log_normalizer();
}

double DGLogLikelihood::operator()(std::span<const double> flat) const {
  if (flat.size() != DGParams::flat_size(p_)) {
    throw ContractError("DG parameter vector does not match the data dimension");
  }
  return (*this)(DGParams::from_flat(flat));
}

std::size_t DGLogLikelihood::count_off_support(const DGParams& params) const {
  std::size_t count = 0;
  std::vector<double> row(p_);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < p_; ++c) row[c] = x_[c * n_ + r];
    if (!support_indicator(row, params)) ++count;
  }
  return count;
}

DirichletLogLikelihood::DirichletLogLikelihood(const DataMatrix& data)
    : n_(data.rows()), p_(data.cols()), log_sums_(data.cols() + 1, 0.0) {
  if (n_ == 0 || p_ == 0) throw ContractError("log-likelihood needs a non-empty data matrix");
  for (const std::size_t r : lexicographic_order(data)) {
    const auto y = data.row(r);
    double sum = 0.0;
    bool inside = true;
    for (double v : y) {
      inside = inside && std::isfinite(v) && v > 0.0;
      sum += v;
    }
    if (!inside || !(sum < 1.0)) {
      ++off_simplex_;
      continue;
    }
    for (std::size_t c = 0; c < p_; ++c) log_sums_[c] += std::log(y[c]);
    log_sums_[p_] += std::log1p(-sum);
  }
}

double DirichletLogLikelihood::operator()(std::span<const double> alpha) const {
  if (alpha.size() != p_ + 1) {
    throw ContractError("Dirichlet parameters do not match the data dimension");
  }
  if (off_simplex_ > 0) return kNegInf;
  double total = -static_cast<double>(n_) * multivariate_beta_log(alpha);
  for (std::size_t i = 0; i <= p_; ++i) total += (alpha[i] - 1.0) * log_sums_[i];
  return total;
}

double log_likelihood(const DataMatrix& data, const DGParams& params) {
  if (data.cols() != params.dimension()) {
    throw ContractError("DG parameters do not match the data dimension");
  }
  return DGLogLikelihood(data)(params);
}

double dirichlet_log_likelihood(const DataMatrix& data, std::span<const double> alpha) {
  return DirichletLogLikelihood(data)(alpha);
}

double model_log_likelihood(const DataMatrix& data, Model model, std::span<const double> flat) {
  if (model == Model::DG) {
    if (flat.size() != DGParams::flat_size(data.cols())) {
      throw ContractError("DG parameter vector does not match the data dimension");
    }
    return log_likelihood(data, DGParams::from_flat(flat));
  }
  return dirichlet_log_likelihood(data, flat);
}

DataMatrix to_open_simplex(const DataMatrix& data) {
  if (data.cols() < 2 || data.rows() == 0) return data;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto y = data.row(r);
    if (std::fabs(std::accumulate(y.begin(), y.end(), 0.0) - 1.0) > 1e-9) return data;
  }
  DataMatrix out(data.rows(), data.cols() - 1);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t c = 0; c + 1 < data.cols(); ++c) out(r, c) = data(r, c);
  }
  return out;
}

InformationCriteria information_criteria(double loglik, std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw ContractError("information criteria need m >= 1 and N >= 1");
  const double md = static_cast<double>(m);
  return {2.0 * md - 2.0 * loglik, md * std::log(static_cast<double>(n)) - 2.0 * loglik};
}

DGParams FitResult::dg_params() const {
  if (model != Model::DG) throw ContractError("fit is not a DG fit");
  return DGParams::from_flat(estimates);
}

DirichletParams FitResult::dirichlet_params() const {
  if (model != Model::Dirichlet) throw ContractError("fit is not a Dirichlet fit");
  return DirichletParams(estimates);
}

namespace {

/// Log-likelihood of either model over a flat parameter vector, built once per data set.
class ModelObjective {
 public:
  ModelObjective(const DataMatrix& data, Model model) : model_(model) {
    if (model == Model::DG) {
      dg_.emplace(data);
    } else {
      dir_.emplace(data);
    }
  }

  double operator()(std::span<const double> flat) const {
    if (!all_positive_finite(flat)) return kNegInf;
    return model_ == Model::DG ? (*dg_)(flat) : (*dir_)(flat);
  }

  std::string diagnose(std::span<const double> flat) const {
    std::ostringstream msg;
    msg << "log-likelihood is -inf at the initial point";
    if (!all_positive_finite(flat)) {
      msg << " (parameters must be finite and positive)";
    } else if (model_ == Model::DG) {
      msg << " (" << dg_->count_off_support(DGParams::from_flat(flat)) << " of " << dg_->rows()
          << " rows outside the support)";
    } else {
      msg << " (" << dir_->off_simplex_rows() << " of " << dir_->rows()
          << " rows outside the open simplex)";
    }
    return msg.str();
  }

 private:
  Model model_;
  std::optional<DGLogLikelihood> dg_;
  std::optional<DirichletLogLikelihood> dir_;
};

void check_shape(const DataMatrix& data, Model model, std::size_t size) {
  if (data.rows() == 0 || data.cols() == 0) throw ContractError("fit needs a non-empty data matrix");
  if (size != parameter_count(model, data.cols())) {
    throw ContractError("parameter vector length does not match the model and data dimension");
  }
}

}  // namespace

FitResult fit_mle(const DataMatrix& data, Model model, std::span<const double> init,
                  const FitOptions& options) {
  check_shape(data, model, init.size());
  if (!all_positive_finite(init)) throw DomainError("initial parameters must be positive");
  const ModelObjective loglik(data, model);
  if (loglik(init) == kNegInf) throw InitializationError(loglik.diagnose(init));

  std::vector<double> psi(init.size());
  const Objective objective = [&](std::span<const double> u) {
    for (std::size_t k = 0; k < u.size(); ++k) psi[k] = std::exp(u[k]);
    return -loglik(psi);
  };
  std::vector<double> start(init.size());
  std::transform(init.begin(), init.end(), start.begin(), [](double v) { return std::log(v); });

  NelderMeadResult best = nelder_mead(objective, start, options.nelder_mead);
  std::size_t iterations = best.iterations;
  std::size_t evaluations = best.evaluations;
  for (std::size_t r = 0; r < options.restarts; ++r) {
    NelderMeadResult next = nelder_mead(objective, best.x, options.nelder_mead);
    iterations += next.iterations;
    evaluations += next.evaluations;
    if (next.value < best.value) {
      best = std::move(next);
      continue;
    }
    best.converged = best.converged || next.converged;
    break;
  }

  FitResult fit;
  fit.model = model;
  fit.p = data.cols();
  fit.estimates.resize(init.size());
  std::transform(best.x.begin(), best.x.end(), fit.estimates.begin(),
                 [](double u) { return std::exp(u); });
  fit.names = parameter_names(model, fit.p);
  fit.loglik = loglik(fit.estimates);
  fit.converged = best.converged;
  fit.iterations = iterations;
  fit.evaluations = evaluations;
  fit.n_obs = data.rows();
  fit.n_params = init.size();
  const InformationCriteria ic = information_criteria(fit.loglik, fit.n_params, fit.n_obs);
  fit.aic = ic.aic;
  fit.bic = ic.bic;
  return fit;
}

GridSpec default_grid(const DataMatrix& data, Model model) {
  if (data.rows() == 0 || data.cols() == 0) throw ContractError("grid needs a non-empty data matrix");
  const std::size_t p = data.cols();
  GridSpec grid;
  if (model == Model::Dirichlet) {
    grid.axes.assign(p + 1, {0.5, 1.0, 2.0, 4.0, 8.0});
    return grid;
  }
  grid.axes.assign(p + 1, {0.5, 1.0, 2.0, 4.0});
  for (std::size_t i = 0; i < p; ++i) grid.axes.push_back({0.5, 1.0, 2.0});
  for (std::size_t i = 0; i < p; ++i) {
    const auto col = data.column(i);
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
    grid.axes.push_back({0.25 * mean, 0.5 * mean, mean, 2.0 * mean});
  }
  return grid;
}

std::vector<double> grid_search_init(const DataMatrix& data, Model model, const GridSpec& grid) {
  check_shape(data, model, grid.axes.size());
  std::vector<std::vector<double>> axes = grid.axes;
  for (auto& axis : axes) {
    if (axis.empty()) throw ContractError("grid axis is empty");
    for (double v : axis) {
      if (!std::isfinite(v)) throw ContractError("grid values must be finite");
    }
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  }
  const ModelObjective loglik(data, model);
  // Odometer over the sorted axes with the last index fastest: points are
  // visited in lexicographic order, so keeping only strict improvements
  // resolves ties toward the smallest point.
  std::vector<std::size_t> index(axes.size(), 0);
  std::vector<double> point(axes.size());
  std::vector<double> best;
  double best_value = kNegInf;
  for (bool done = false; !done;) {
    for (std::size_t k = 0; k < axes.size(); ++k) point[k] = axes[k][index[k]];
    const double value = loglik(point);
    if (value > best_value) {
      best_value = value;
      best = point;
    }
    std::size_t k = axes.size();
    for (;;) {
      if (k == 0) {
        done = true;
        break;
      }
      --k;
      if (++index[k] < axes[k].size()) break;
      index[k] = 0;
    }
  }
  if (best.empty()) throw InitializationError("every grid point has log-likelihood -inf");
  return best;
}

std::string interval_method_name(IntervalMethod method) {
  return method == IntervalMethod::Asymptotic ? "asymptotic" : "bootstrap";
}

namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw ContractError("confidence level must lie in (0, 1)");
}

DataMatrix simulate_from_fit(const FitResult& fit, std::size_t n, RngSeed seed) {
  if (fit.model == Model::DG) return dg_sample(n, fit.dg_params(), seed);
  return dirichlet_sample(n, fit.dirichlet_params(), seed);
}

}  // namespace

IntervalSet asymptotic_ci(const DataMatrix& data, const FitResult& fit, double level) {
  check_level(level);
  if (!fit.converged) throw ContractError("asymptotic intervals need a converged fit");
  check_shape(data, fit.model, fit.estimates.size());
  const ModelObjective loglik(data, fit.model);
  const std::size_t m = fit.estimates.size();
  const std::vector<double>& psi = fit.estimates;

  std::vector<double> h(m);
  for (std::size_t k = 0; k < m; ++k) {
    h[k] = std::max(1e-4, 1e-4 * std::fabs(psi[k]));
    h[k] = std::min(h[k], 0.5 * psi[k]);
  }
  std::vector<double> point = psi;
  auto f = [&](std::size_t a, double da, std::size_t b, double db) {
    point = psi;
    point[a] += da;
    point[b] += db;
    const double v = -loglik(point);
    if (!std::isfinite(v)) {
      throw SingularityError("log-likelihood is not finite next to the estimate",
                             std::numeric_limits<double>::infinity());
    }
    return v;
  };
  const double f0 = -loglik(psi);
  Eigen::MatrixXd info(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    const double fp = f(a, h[a], a, 0.0);
    const double fm = f(a, -h[a], a, 0.0);
    info(a, a) = (fp - 2.0 * f0 + fm) / (h[a] * h[a]);
    for (std::size_t b = 0; b < a; ++b) {
      const double fpp = f(a, h[a], b, h[b]);
      const double fpm = f(a, h[a], b, -h[b]);
      const double fmp = f(a, -h[a], b, h[b]);
      const double fmm = f(a, -h[a], b, -h[b]);
      info(a, b) = info(b, a) = (fpp - fpm - fmp + fmm) / (4.0 * h[a] * h[b]);
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info);
  if (eig.info() != Eigen::Success) {
    throw SingularityError("eigen-decomposition of the observed information failed",
                           std::numeric_limits<double>::infinity());
  }
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const double lmin = lambda.minCoeff();
  const double lmax = lambda.maxCoeff();
  const double condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (!(lmin > 0.0) || condition > 1e12) {
    std::ostringstream msg;
    msg << "observed information is singular or indefinite (condition estimate " << condition
        << ")";
    throw SingularityError(msg.str(), condition);
  }
  const Eigen::MatrixXd cov =
      eig.eigenvectors() * lambda.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();

  const double z = normal_quantile(0.5 * (1.0 + level));
  IntervalSet set;
  set.method = IntervalMethod::Asymptotic;
  set.level = level;
  set.condition = condition;
  for (std::size_t k = 0; k < m; ++k) {
    const double se = std::sqrt(cov(k, k));
    set.intervals.push_back(
        {fit.names[k], psi[k], std::max(0.0, psi[k] - z * se), psi[k] + z * se, se});
  }
  return set;
}

IntervalSet bootstrap_ci(const DataMatrix& data, const FitResult& fit,
                         const BootstrapOptions& options) {
  check_level(options.level);
  if (options.replicates < 50) throw ContractError("bootstrap needs at least 50 replicates");
  check_shape(data, fit.model, fit.estimates.size());
  const std::size_t B = options.replicates;
  const std::size_t m = fit.estimates.size();
  const std::size_t n = data.rows();

  std::vector<std::optional<std::vector<double>>> refits(B);
  parallel_for(B, options.threads, [&](std::size_t b) {
    const DataMatrix sample =
        simulate_from_fit(fit, n, derive_seed(options.seed, kBootstrapStream, b));
    try {
      FitResult refit = fit_mle(sample, fit.model, fit.estimates, options.fit);
      if (refit.converged) refits[b] = std::move(refit.estimates);
    } catch (const NumericError&) {
    }
  });

  IntervalSet set;
  set.method = IntervalMethod::Bootstrap;
  set.level = options.level;
  set.replicates = B;
  std::vector<std::vector<double>> values(m);
  for (const auto& r : refits) {
    if (!r) {
      ++set.failures;
      continue;
    }
    for (std::size_t k = 0; k < m; ++k) values[k].push_back((*r)[k]);
  }
  set.degraded = 5 * set.failures > B;
  const std::size_t ok = B - set.failures;
  if (ok < 2) throw NumericError("bootstrap: fewer than two successful refits");

  const double okd = static_cast<double>(ok);
  const auto lo_rank = static_cast<std::size_t>(
      std::clamp(std::floor((okd + 1.0) * (1.0 - options.level) / 2.0), 1.0, okd));
  const auto hi_rank = static_cast<std::size_t>(
      std::clamp(std::ceil((okd + 1.0) * (1.0 + options.level) / 2.0), 1.0, okd));
  for (std::size_t k = 0; k < m; ++k) {
    auto& v = values[k];
    std::sort(v.begin(), v.end());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / okd;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    set.intervals.push_back({fit.names[k], fit.estimates[k], v[lo_rank - 1], v[hi_rank - 1],
                             std::sqrt(ss / (okd - 1.0))});
  }
  return set;
}

BiasMse bias_mse(std::span<const double> estimates, double true_value) {
  if (estimates.empty()) throw ContractError("bias_mse needs at least one estimate");
  const double k = static_cast<double>(estimates.size());
  const double mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / k;
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  var /= k;
  const double bias = mean - true_value;
  return {mean, bias, bias * bias + var};
}

}  // namespace dirgamma
