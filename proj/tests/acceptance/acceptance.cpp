// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 once every criterion has been evaluated, whatever the
// verdicts; pass --strict to exit 1 when any criterion fails.

#include <sys/wait.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dirgamma/dg_model.hpp"
#include "dirgamma/inference.hpp"
#include "dirgamma/io.hpp"
#include "dirgamma/model_testing.hpp"
#include "dirgamma/moments.hpp"
#include "dirgamma/study.hpp"
#include "stats.hpp"

namespace fs = std::filesystem;
using namespace dirgamma;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "  fail: " << what << '\n';
    }
  }
};

char buf[512];

template <class... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const DGParams kPaper{{2.0, 2.0, 3.0}, {1.1, 1.2}, {1.5, 2.8}};

double gamma_inverse(const DGParams& p, std::size_t i, double u) {
  return p.theta()[i] * boost::math::gamma_p_inv(p.beta()[i], u);
}

double gamma_pdf_oracle(const DGParams& p, std::size_t i, double x) {
  return boost::math::gamma_p_derivative(p.beta()[i], x / p.theta()[i]) / p.theta()[i];
}

// ∫ dg_pdf(x1, x2) dx2 over 0 < x2 < G2⁻¹(1 − G1(x1)); used = G1(x1) and
// rest = 1 − G1(x1) are passed separately so neither loses precision.
double integrate_out_x2(const DGParams& p, double x1, double used, double rest) {
  if (!(rest > 0.0)) return 0.0;
  const double upper = used < 0.5
                           ? p.theta()[1] * boost::math::gamma_q_inv(p.beta()[1], used)
                           : gamma_inverse(p, 1, rest);
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double x2) {
    const double x[2] = {x1, x2};
    return dg_pdf(x, p);
  };
  return ts.integrate(f, 0.0, upper, 1e-10);
}

// Criterion 1
Verdict information_criteria_identity() {
  Verdict v;
  struct Row {
    double ll;
    std::size_t m, n;
    double aic, bic, bic_tol;
  };
  const Row rows[] = {{-79.797, 3, 23, 165.594, 169.00, 0.01},
                      {-63.205, 7, 23, 140.409, 148.36, 0.01},
                      {-51.410, 3, 30, 108.820, 113.023, 0.001},
                      {-30.155, 7, 30, 74.310, 84.118, 0.001}};
  for (const auto& r : rows) {
    const auto ic = information_criteria(r.ll, r.m, r.n);
    v.detail << fmt("  ll=%.3f m=%zu N=%zu: AIC %.4f (reference %.3f)  BIC %.4f (reference %.4f)\n", r.ll,
                    r.m, r.n, ic.aic, r.aic, ic.bic, r.bic);
    // Exact agreement at the three decimals given.
    v.check(std::fabs(ic.aic - r.aic) < 5e-4, fmt("AIC %.4f vs reference %.3f", ic.aic, r.aic));
    v.check(std::fabs(ic.bic - r.bic) <= r.bic_tol, fmt("BIC %.4f vs %.4f", ic.bic, r.bic));
  }
  return v;
}

// Criterion 2
Verdict normalization() {
  Verdict v;
  const DGParams sets[] = {{{1.0, 1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}},
                           kPaper,
                           {{0.8, 1.5, 2.0}, {1.0, 2.0}, {2.0, 1.0}}};
  boost::math::quadrature::tanh_sinh<double> ts;
  for (const auto& p : sets) {
    // Outer variable u = G1(x1) keeps the range finite; dx1 = du / g1(x1).
    // uc is the signed distance to the nearer endpoint, exact near u = 1.
    auto outer = [&](double u, double uc) {
      const double rest = uc > 0.0 ? uc : 1.0 - u;
      const double x1 = uc > 0.0 ? p.theta()[0] * boost::math::gamma_q_inv(p.beta()[0], uc)
                                 : gamma_inverse(p, 0, u);
      const double g1 = gamma_pdf_oracle(p, 0, x1);
      return g1 > 0.0 ? integrate_out_x2(p, x1, u, rest) / g1 : 0.0;
    };
    const double total = ts.integrate(outer, 0.0, 1.0, 1e-8);
    v.detail << fmt("  alpha=(%g,%g,%g): integral %.8f\n", p.alpha()[0], p.alpha()[1],
                    p.alpha()[2], total);
    v.check(std::fabs(total - 1.0) <= 1e-3, fmt("integral %.6f", total));
  }
  return v;
}

// Criterion 3
Verdict marginalization() {
  Verdict v;
  double worst = 0.0;
  for (int j = 0; j < 20; ++j) {
    const double u = 0.05 + 0.9 * j / 19.0;
    const double x1 = gamma_inverse(kPaper, 0, u);
    const double numeric = integrate_out_x2(kPaper, x1, u, 1.0 - u);
    const double closed = marginal_pdf(x1, 0, kPaper);
    worst = std::max(worst, std::fabs(numeric - closed));
    v.check(std::fabs(numeric - closed) <= 1e-3,
            fmt("x1=%.4f numeric %.6f closed %.6f", x1, numeric, closed));
  }
  v.detail << fmt("  20 points, max |difference| %.3e\n", worst);
  return v;
}

// Criterion 4
Verdict lemma_integral() {
  Verdict v;
  const std::vector<std::vector<double>> alphas = {
      {1.0, 1.0},      {2.0, 3.0},           {0.5, 1.5},           {1.0, 1.0, 1.0},
      {2.0, 0.7, 3.0}, {1.0, 1.0, 1.0, 1.0}, {0.5, 2.0, 1.5, 3.0}, {4.0, 0.3, 2.2, 1.1}};
  double worst = 0.0;
  std::size_t cases = 0;
  for (const auto& a : alphas) {
    for (double zeta : {0.0, 0.5, 1.0, 2.0}) {
      double log_closed = boost::math::lgamma(zeta + 1.0);
      double total = zeta + 1.0;
      for (double ai : a) {
        log_closed += boost::math::lgamma(ai);
        total += ai;
      }
      log_closed -= boost::math::lgamma(total);
      const double closed = std::exp(log_closed);
      const double rel = std::fabs(dirichlet_integral_I(a, zeta) - closed) / closed;
      worst = std::max(worst, rel);
      ++cases;
      v.check(rel <= 1e-10, fmt("p=%zu zeta=%g relative error %.3e", a.size(), zeta, rel));
    }
  }
  const std::vector<double> a23{2.0, 3.0};
  const double i360 = dirichlet_integral_I(a23, 1.0);
  v.check(std::fabs(i360 * 360.0 - 1.0) <= 1e-10, fmt("(2,3), zeta=1 gives %.15g", i360));
  v.detail << fmt("  %zu cases, max relative error %.3e; (2,3), zeta=1 -> 1/%.10f\n", cases, worst,
                  1.0 / i360);
  return v;
}

// Criterion 5
Verdict sampler_pit() {
  Verdict v;
  const DataMatrix x = dg_sample(5000, kPaper, RngSeed{20240501});
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<double> u;
    u.reserve(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) u.push_back(marginal_cdf(x(r, i), i, kPaper));
    const double pv = dgtest::ks_uniform_pvalue(u);
    v.detail << fmt("  coordinate %zu: KS p-value %.4f\n", i + 1, pv);
    v.check(pv > 0.01, fmt("coordinate %zu PIT rejected (p=%.4g)", i + 1, pv));
  }
  std::size_t inside = 0;
  for (std::size_t r = 0; r < x.rows(); ++r) inside += support_indicator(x.row(r), kPaper) ? 1 : 0;
  v.detail << fmt("  %zu/%zu rows on the support\n", inside, x.rows());
  v.check(inside == x.rows(), "rows off the support");
  return v;
}

// Criterion 6
constexpr std::size_t kBootstrapReplicates = 100;

Verdict simulation_study_1() {
  Verdict v;
  SimStudy1Config config;
  config.sizes = {100, 1000};
  config.reps = 200;
  config.boot = kBootstrapReplicates;
  config.seed = RngSeed{2024};
  config.boot_fit.restarts = 0;
  const SimStudySummary s = run_simstudy1(config);
  const SizeSummary& small = s.sizes[0];
  const SizeSummary& large = s.sizes[1];
  const double reference_length[] = {1.237, 1.125, 0.941, 0.690, 1.118, 0.488, 0.478};
  v.detail << fmt("  B=%zu; fit failures %zu/%zu, asymptotic failures %zu/%zu\n",
                  kBootstrapReplicates, small.fit_failures, large.fit_failures,
                  small.asymptotic_failures, large.asymptotic_failures);
  v.detail << "  param   n   bias     mse      cp_asy  cp_boot len_asy len_boot\n";
  for (const SizeSummary* size : {&small, &large}) {
    for (const auto& ps : size->parameters) {
      v.detail << fmt("  %-7s %-4zu %+.4f  %.4f  %.3f   %.3f   %.3f   %.3f\n", ps.name.c_str(),
                      size->n, ps.bias, ps.mse, ps.cp_asymptotic, ps.cp_bootstrap,
                      ps.len_asymptotic, ps.len_bootstrap);
    }
  }
  for (std::size_t k = 0; k < large.parameters.size(); ++k) {
    const auto& lp = large.parameters[k];
    const auto& sp = small.parameters[k];
    const char* name = lp.name.c_str();
    v.check(std::fabs(lp.bias) <= 0.1, fmt("%s |bias| %.4f at n=1000", name, std::fabs(lp.bias)));
    v.check(lp.mse < sp.mse, fmt("%s MSE does not decrease (%.4f vs %.4f)", name, lp.mse, sp.mse));
    for (const SizeSummary* size : {&small, &large}) {
      const auto& ps = size->parameters[k];
      v.check(ps.cp_asymptotic >= 0.90 && ps.cp_asymptotic <= 0.98,
              fmt("%s asymptotic coverage %.3f at n=%zu", name, ps.cp_asymptotic, size->n));
      v.check(ps.cp_bootstrap >= 0.93 && ps.cp_bootstrap <= 0.995,
              fmt("%s bootstrap coverage %.3f at n=%zu", name, ps.cp_bootstrap, size->n));
    }
    const double ratio = lp.len_asymptotic / reference_length[k];
    v.check(ratio <= 1.5 && ratio >= 1.0 / 1.5,
            fmt("%s asymptotic length %.3f vs reference %.3f", name, lp.len_asymptotic, reference_length[k]));
  }
  return v;
}

// Criterion 7
Verdict simulation_study_2() {
  Verdict v;
  SimStudy2Config config;
  config.ks.seed = RngSeed{2024};
  const SimStudy2Result r = run_simstudy2(config);
  for (const auto& rep : r.study.reports) {
    v.detail << fmt("  d=%-6zu KS(DG) %.4f  KS(D) %.4f  ratio %.4f\n", rep.d, rep.ks_dg, rep.ks_d,
                    rep.ratio);
    v.check(rep.ratio <= 1.1, fmt("d=%zu ratio %.4f", rep.d, rep.ratio));
  }
  v.check(r.study.reports.size() == 3, "expected three simulated group sizes");
  return v;
}

// Criterion 8
Verdict moment_discrepancy() {
  Verdict v;
  const DGParams p{{2.0, 1.0}, {1.0}, {1.0}};
  const MomentReport rep = moment_report({1}, p, 1000000, RngSeed{8});
  v.detail << fmt("  alpha=(2,1): formula %.6f  MC %.6f (se %.2e)  gap %.3f  flagged %s\n",
                  rep.formula_value, rep.mc_value, rep.mc_stderr, rep.relative_gap,
                  rep.discrepancy ? "yes" : "no");
  v.check(std::fabs(rep.mc_value - 1.5) <= 0.01, fmt("MC %.5f", rep.mc_value));
  v.check(std::fabs(rep.formula_value - 0.5) <= 1e-12, fmt("formula %.15g", rep.formula_value));
  v.check(rep.relative_gap > 0.5 && rep.discrepancy, "discrepancy not flagged");
  const DGParams flat{{1.0, 1.0}, {1.0}, {1.0}};
  const MomentReport col = moment_report({1}, flat, 1000000, RngSeed{9});
  v.detail << fmt("  alpha=(1,1): formula %.6f  MC %.6f  gap %.4f\n", col.formula_value,
                  col.mc_value, col.relative_gap);
  v.check(col.relative_gap <= 0.01, fmt("collapse case gap %.4f", col.relative_gap));
  return v;
}

// Criterion 9
Verdict weibull_composition() {
  Verdict v;
  const std::vector<double> ones{1.0, 1.0, 1.0};
  const std::vector<double> mixed{0.8, 1.0, 1.2};
  double worst = 0.0;
  for (const auto* k : {&ones, &mixed}) {
    const DataMatrix y = weibull_composition_generate(10000, *k, ones, RngSeed{99});
    for (std::size_t r = 0; r < y.rows(); ++r) {
      double s = 0.0;
      for (double c : y.row(r)) s += c;
      worst = std::max(worst, std::fabs(s - 1.0));
    }
  }
  v.check(worst <= 1e-12, fmt("row sum error %.3e", worst));

  const DataMatrix y = weibull_composition_generate(10000, ones, ones, RngSeed{9});
  constexpr std::size_t kSide = 8;
  std::vector<std::size_t> counts(kSide * kSide, 0);
  for (std::size_t r = 0; r < y.rows(); ++r) ++counts[dgtest::simplex_bin(y(r, 0), y(r, 1), kSide)];
  const double pv = dgtest::chi_square_uniform_pvalue(counts);
  v.check(pv > 0.01, fmt("chi-square p=%.4g", pv));

  double mean[3] = {0, 0, 0};
  for (std::size_t r = 0; r < y.rows(); ++r) {
    for (std::size_t c = 0; c < 3; ++c) mean[c] += y(r, c) / static_cast<double>(y.rows());
  }
  double cov[3][3] = {};
  for (std::size_t r = 0; r < y.rows(); ++r) {
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) cov[a][b] += (y(r, a) - mean[a]) * (y(r, b) - mean[b]);
    }
  }
  double corr[3];
  const std::size_t pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (std::size_t q = 0; q < 3; ++q) {
    const auto [a, b] = pairs[q];
    corr[q] = cov[a][b] / std::sqrt(cov[a][a] * cov[b][b]);
    v.check(corr[q] < 0.0, fmt("correlation (%zu,%zu) = %.4f", a + 1, b + 1, corr[q]));
  }
  v.detail << fmt("  max row-sum error %.2e; chi-square p %.4f over %zu bins; correlations %.3f %.3f %.3f\n",
                  worst, pv, counts.size(), corr[0], corr[1], corr[2]);
  return v;
}

// Criterion 10
int run_cli(const std::string& args) {
  const std::string cmd = std::string(DIRGAMMA_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict determinism() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "dirgamma_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string data = (dir / "data.csv").string();
  write_csv(data, dg_sample(60, kPaper, RngSeed{10}));
  const std::string simplex = (dir / "simplex.csv").string();
  write_csv(simplex, dirichlet_sample(40, DirichletParams({2.0, 2.0, 3.0}), RngSeed{11}));

  struct Command {
    std::string name;
    std::string args;
  };
  const std::vector<Command> commands = {
      {"sample", "sample --alpha 2,2,3 --theta 1.1,1.2 --beta 1.5,2.8 --n 500 --seed 7"},
      {"fit", "fit --data " + data + " --model dg --ci bootstrap --boot 50 --seed 7"},
      {"fit_dirichlet", "fit --data " + simplex + " --model dirichlet --ci asymptotic --seed 7"},
      {"simstudy1", "simstudy1 --sizes 50 --reps 10 --boot 50 --seed 7 --threads 2"},
      {"simstudy2", "simstudy2 --d-sizes 100,500 --m 5 --seed 7"},
      {"simstudy3", "simstudy3 --n 100 --seed 7 --contour-res 12"},
      {"gof", "gof --data " + simplex + " --perturb-row 20 --factor 5 --d-sizes 100 --m 5 --qq-draws 500 --seed 7"},
      {"moments", "moments --alpha 2,1 --theta 1 --beta 1 --order 1 --mc-n 20000 --seed 7"}};

  for (const auto& c : commands) {
    std::vector<std::string> outputs;
    for (int run = 0; run < 2; ++run) {
      const fs::path sub = dir / (c.name + std::to_string(run));
      fs::create_directories(sub);
      const std::string out = (sub / (c.name + (c.name == "sample" ? ".csv" : ".json"))).string();
      const int code = run_cli(c.args + " --out " + out);
      v.check(code == 0, fmt("%s exited with %d", c.name.c_str(), code));
      std::string all;
      for (const auto& entry : fs::directory_iterator(sub)) {
        all += entry.path().filename().string() + '\n' + read_file(entry.path());
      }
      outputs.push_back(all);
    }
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
    v.detail << fmt("  %-14s %zu bytes, %s\n", c.name.c_str(), outputs[0].size(),
                    same ? "identical" : "DIFFERENT");
    v.check(same, c.name + " output differs between runs");
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  std::vector<bool> selected(10, true);
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--strict") {
      strict = true;
    } else if (arg == "--only" && a + 1 < argc) {
      selected.assign(10, false);
      std::stringstream list(argv[++a]);
      for (std::string item; std::getline(list, item, ',');) {
        const int k = std::atoi(item.c_str());
        if (k >= 1 && k <= 10) selected[k - 1] = true;
      }
    } else {
      std::fprintf(stderr, "usage: acceptance [--strict] [--only 1,2,...]\n");
      return 1;
    }
  }
  struct Criterion {
    const char* title;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {"AIC/BIC arithmetic against reference values", information_criteria_identity},
      {"density normalization by 2-D quadrature", normalization},
      {"marginal density against numeric integration", marginalization},
      {"Dirichlet integral against the gamma-function closed form", lemma_integral},
      {"sampler PIT uniformity and support", sampler_pit},
      {"simulation study 1: bias, MSE, coverage, interval length", simulation_study_1},
      {"simulation study 2: KS ratio of DG to Dirichlet", simulation_study_2},
      {"product moment formula against simulation", moment_discrepancy},
      {"Weibull composition generator properties", weibull_composition},
      {"bitwise determinism of seeded CLI commands", determinism}};

  std::size_t failed = 0, ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "  exception: " << e.what() << '\n';
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += v.pass ? 0 : 1;
    std::printf("%s criterion %zu: %s (%.1fs)\n%s", v.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].title, secs, v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", ran - failed, ran);
  return strict && failed ? 1 : 0;
}
