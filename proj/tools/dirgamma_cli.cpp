#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dirgamma/dg_model.hpp"
#include "dirgamma/error.hpp"
#include "dirgamma/inference.hpp"
#include "dirgamma/io.hpp"
#include "dirgamma/model_testing.hpp"
#include "dirgamma/moments.hpp"
#include "dirgamma/study.hpp"

namespace fs = std::filesystem;
using namespace dirgamma;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kNumeric = 3 };

struct Options {
  std::vector<double> alpha{2.0, 2.0, 3.0};
  std::vector<double> theta{1.1, 1.2};
  std::vector<double> beta{1.5, 2.8};
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string data;
  std::string model = "dg";
  std::vector<double> init;
  bool grid = false;
  std::string ci = "none";
  std::size_t boot = 200;
  double level = 0.95;
  std::size_t threads = 0;
  std::size_t reps = 200;
  std::vector<std::size_t> sizes{100, 500, 1000};
  std::vector<std::size_t> d_sizes{100, 1000, 10000};
  std::size_t m = 100;
  std::string scale = "observed";
  std::vector<double> k{0.8, 1.0, 1.2};
  std::vector<double> lambda{1.0, 1.0, 1.0};
  std::size_t contour_res = 50;
  std::optional<std::size_t> perturb_row;
  double factor = 5.0;
  std::size_t qq_draws = 10000;
  std::vector<unsigned> order{1};
  std::size_t mc_n = 1000000;
};

DGParams dg_from(const Options& o) { return DGParams(o.alpha, o.theta, o.beta); }

Json dg_echo(const Options& o) { return Json{{"alpha", o.alpha}, {"theta", o.theta}, {"beta", o.beta}}; }

/// Writes the JSON document to --out or stdout.
void emit(const Options& o, const Json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
  }
}

/// Sibling plot-data file next to --out; skipped when writing to stdout.
void emit_plot(const Options& o, const std::string& name, const std::string& csv, Json& files) {
  if (o.out.empty()) return;
  const fs::path out(o.out);
  const fs::path path = out.parent_path() / (out.stem().string() + "_" + name + ".csv");
  write_file(path, csv);
  files[name] = path.filename().string();
}

Json input_echo(const Options& o, const std::string& text) {
  return Json{{"path", o.data}, {"git_blob_sha1", git_blob_sha1(text)}};
}

Json fit_document(const Options& o, const std::string& text, const DataMatrix& data) {
  const Model model = parse_model(o.model);
  std::vector<double> init = o.init;
  const bool use_grid = o.grid || init.empty();
  if (use_grid) init = grid_search_init(data, model, default_grid(data, model));
  const FitResult fit = fit_mle(data, model, init);

  Json doc{{"command", "fit"},
           {"config",
            {{"model", model_name(model)},
             {"init", use_grid ? Json("grid") : Json(o.init)},
             {"ci", o.ci},
             {"boot", o.boot},
             {"level", o.level},
             {"seed", o.seed}}},
           {"input", input_echo(o, text)},
           {"start", init},
           {"fit", to_json(fit)}};
  if (o.ci == "asymptotic") {
    doc["intervals"] = to_json(asymptotic_ci(data, fit, o.level));
  } else if (o.ci == "bootstrap") {
    BootstrapOptions b;
    b.replicates = o.boot;
    b.level = o.level;
    b.seed = RngSeed{o.seed};
    b.threads = o.threads;
    doc["intervals"] = to_json(bootstrap_ci(data, fit, b));
  }
  return doc;
}

int cmd_sample(const Options& o) {
  const DGParams params = dg_from(o);
  const DataMatrix x = dg_sample(o.n, params, RngSeed{o.seed});
  if (o.out.empty()) {
    std::cout << format_csv(x);
  } else {
    write_csv(o.out, x);
  }
  for (std::size_t c = 0; c < x.cols(); ++c) {
    const auto col = x.column(c);
    double mean = 0.0, ss = 0.0;
    for (double v : col) mean += v;
    mean /= static_cast<double>(col.size());
    for (double v : col) ss += (v - mean) * (v - mean);
    const double sd = col.size() > 1 ? std::sqrt(ss / static_cast<double>(col.size() - 1)) : 0.0;
    std::fprintf(stderr, "x%zu: mean %.6g sd %.6g\n", c + 1, mean, sd);
  }
  return kOk;
}

int cmd_fit(const Options& o) {
  const std::string text = read_file(o.data);
  const DataMatrix raw = parse_csv(text);
  const DataMatrix data = parse_model(o.model) == Model::Dirichlet ? to_open_simplex(raw) : raw;
  try {
    emit(o, fit_document(o, text, data));
  } catch (const NumericError& e) {
    Json doc{{"command", "fit"},
             {"config", {{"model", o.model}, {"ci", o.ci}, {"seed", o.seed}}},
             {"input", input_echo(o, text)},
             {"error", {{"kind", "numeric"}, {"message", e.what()}}}};
    emit(o, doc);
    throw;
  }
  return kOk;
}

int cmd_simstudy1(const Options& o) {
  SimStudy1Config c;
  c.truth = dg_from(o);
  c.sizes = o.sizes;
  c.reps = o.reps;
  c.boot = o.boot;
  c.level = o.level;
  c.seed = RngSeed{o.seed};
  c.threads = o.threads;
  const SimStudySummary s = run_simstudy1(c);
  emit(o, Json{{"command", "simstudy1"},
               {"config",
                {{"psi", dg_echo(o)},
                 {"sizes", o.sizes},
                 {"reps", o.reps},
                 {"boot", o.boot},
                 {"level", o.level},
                 {"seed", o.seed}}},
               {"summary", to_json(s)}});
  return kOk;
}

Json ks_json(const KsStudyResult& r) {
  Json reports = Json::array();
  for (const auto& rep : r.reports) reports.push_back(to_json(rep));
  return reports;
}

int cmd_simstudy2(const Options& o) {
  SimStudy2Config c;
  c.alpha = o.alpha;
  c.n_observed = o.n;
  c.ks.d_sizes = o.d_sizes;
  c.ks.m = o.m;
  c.ks.seed = RngSeed{o.seed};
  c.ks.threads = o.threads;
  c.ks.scale = o.scale == "baseline" ? KsScale::Baseline : KsScale::Observed;
  const SimStudy2Result r = run_simstudy2(c);
  Json files = Json::object();
  emit_plot(o, "observed", format_csv(r.observed), files);
  emit(o, Json{{"command", "simstudy2"},
               {"config",
                {{"alpha", o.alpha},
                 {"n_observed", o.n},
                 {"d_sizes", o.d_sizes},
                 {"m", o.m},
                 {"scale", o.scale},
                 {"seed", o.seed}}},
               {"fits", {{"dirichlet", to_json(r.study.dirichlet)}, {"dg", to_json(r.study.dg)}}},
               {"reports", ks_json(r.study)},
               {"files", files}});
  return kOk;
}

Json comparison_json(const FitResult& d, const FitResult& dg) {
  return Json{{"dirichlet", to_json(d)},
              {"dg", to_json(dg)},
              {"preferred_by_aic", d.aic <= dg.aic ? "dirichlet" : "dg"},
              {"preferred_by_bic", d.bic <= dg.bic ? "dirichlet" : "dg"}};
}

int cmd_simstudy3(const Options& o) {
  SimStudy3Config c;
  c.k = o.k;
  c.lambda = o.lambda;
  c.n = o.n;
  c.seed = RngSeed{o.seed};
  c.contour_resolution = o.contour_res;
  const SimStudy3Result r = run_simstudy3(c);
  Json files = Json::object();
  emit_plot(o, "composition", format_csv(r.composition), files);
  emit_plot(o, "simulated_dirichlet", format_csv(r.simulated_dirichlet), files);
  emit_plot(o, "simulated_dg", format_csv(r.simulated_dg), files);
  if (!r.contour_dg.empty()) {
    emit_plot(o, "contour_dirichlet", contour_csv(r.contour_dirichlet), files);
    emit_plot(o, "contour_dg", contour_csv(r.contour_dg), files);
  }
  emit(o, Json{{"command", "simstudy3"},
               {"config",
                {{"k", o.k}, {"lambda", o.lambda}, {"n", o.n}, {"seed", o.seed},
                 {"contour_res", o.contour_res}}},
               {"comparison", comparison_json(r.fits.dirichlet, r.fits.dg)},
               {"files", files}});
  return kOk;
}

int cmd_gof(const Options& o) {
  const std::string text = read_file(o.data);
  GofConfig c;
  c.perturb_row = o.perturb_row;
  c.factor = o.factor;
  c.qq_draws = o.qq_draws;
  c.ks.d_sizes = o.d_sizes;
  c.ks.m = o.m;
  c.ks.seed = RngSeed{o.seed};
  c.ks.threads = o.threads;
  c.ks.scale = o.scale == "baseline" ? KsScale::Baseline : KsScale::Observed;
  const GofResult r = run_gof(parse_csv(text), c);
  Json files = Json::object();
  emit_plot(o, "qq_dirichlet", qq_csv(r.qq_dirichlet), files);
  emit_plot(o, "qq_dg", qq_csv(r.qq_dg), files);
  emit(o, Json{{"command", "gof"},
               {"config",
                {{"perturb_row", o.perturb_row ? Json(*o.perturb_row) : Json(nullptr)},
                 {"factor", o.factor},
                 {"d_sizes", o.d_sizes},
                 {"m", o.m},
                 {"scale", o.scale},
                 {"qq_draws", o.qq_draws},
                 {"seed", o.seed}}},
               {"input", input_echo(o, text)},
               {"summary", comparison_json(r.study.dirichlet, r.study.dg)},
               {"reports", ks_json(r.study)},
               {"qq", {{"dirichlet", to_json(r.qq_dirichlet)}, {"dg", to_json(r.qq_dg)}}},
               {"files", files}});
  return kOk;
}

int cmd_moments(const Options& o) {
  const MomentReport rep = moment_report(o.order, dg_from(o), o.mc_n, RngSeed{o.seed});
  emit(o, Json{{"command", "moments"},
               {"config", {{"psi", dg_echo(o)}, {"order", o.order}, {"mc_n", o.mc_n}, {"seed", o.seed}}},
               {"report", to_json(rep)}});
  return kOk;
}

void add_dg_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--alpha", o.alpha, "Dirichlet concentrations (p+1 values)")->delimiter(',');
  cmd->add_option("--theta", o.theta, "gamma scales (p values)")->delimiter(',');
  cmd->add_option("--beta", o.beta, "gamma shapes (p values)")->delimiter(',');
}

void add_ks_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--d-sizes", o.d_sizes, "simulated sample sizes")->delimiter(',')->check(CLI::PositiveNumber);
  cmd->add_option("--m", o.m, "replications per size")->check(CLI::PositiveNumber);
  cmd->add_option("--scale", o.scale, "DG comparison scale")->check(CLI::IsMember({"observed", "baseline"}));
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet-Gamma distributions: sampling, fitting and model testing"};
  app.require_subcommand(1);
  Options o;

  auto* sample = app.add_subcommand("sample", "draw a DG sample to CSV");
  add_dg_flags(sample, o);
  sample->add_option("--n", o.n, "rows")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", o.seed, "random seed");
  sample->add_option("--out", o.out, "output CSV (default stdout)");

  auto* fit = app.add_subcommand("fit", "maximum likelihood fit of a CSV data set");
  fit->add_option("--data", o.data, "input CSV")->required();
  fit->add_option("--model", o.model, "dirichlet or dg")->check(CLI::IsMember({"dirichlet", "dg"}));
  fit->add_option("--init", o.init, "starting parameters (flat order)")->delimiter(',');
  fit->add_flag("--grid", o.grid, "start from the best point of the default grid");
  fit->add_option("--ci", o.ci, "none, asymptotic or bootstrap")
      ->check(CLI::IsMember({"none", "asymptotic", "bootstrap"}));
  fit->add_option("--boot", o.boot, "bootstrap replicates")->check(CLI::Range(50, 1000000));
  fit->add_option("--level", o.level, "confidence level")->check(CLI::Range(0.0, 1.0));
  fit->add_option("--seed", o.seed, "bootstrap seed");
  fit->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  fit->add_option("--out", o.out, "output JSON (default stdout)");

  auto* s1 = app.add_subcommand("simstudy1", "bias, MSE and interval coverage of DG fits");
  add_dg_flags(s1, o);
  s1->add_option("--sizes", o.sizes, "sample sizes")->delimiter(',')->check(CLI::PositiveNumber);
  s1->add_option("--reps", o.reps, "replications")->check(CLI::Range(10, 1000000));
  s1->add_option("--boot", o.boot, "bootstrap replicates (0 disables)");
  s1->add_option("--level", o.level, "confidence level")->check(CLI::Range(0.0, 1.0));
  s1->add_option("--seed", o.seed, "random seed");
  s1->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  s1->add_option("--out", o.out, "output JSON (default stdout)");

  auto* s2 = app.add_subcommand("simstudy2", "KS ratio of DG and Dirichlet fits on Dirichlet data");
  s2->add_option("--alpha", o.alpha, "Dirichlet concentrations of the observed data")->delimiter(',');
  s2->add_option("--n", o.n, "observed rows")->check(CLI::Range(2, 100000000));
  add_ks_flags(s2, o);
  s2->add_option("--seed", o.seed, "random seed");
  s2->add_option("--out", o.out, "output JSON (default stdout)");

  auto* s3 = app.add_subcommand("simstudy3", "fit both models to Weibull compositions");
  s3->add_option("--k", o.k, "Weibull shapes")->delimiter(',');
  s3->add_option("--lambda", o.lambda, "Weibull scales")->delimiter(',');
  s3->add_option("--n", o.n, "rows")->check(CLI::Range(2, 100000000));
  s3->add_option("--contour-res", o.contour_res, "contour grid resolution")->check(CLI::PositiveNumber);
  s3->add_option("--seed", o.seed, "random seed");
  s3->add_option("--out", o.out, "output JSON (default stdout)");

  auto* gof = app.add_subcommand("gof", "KS and Q-Q comparison of both models on simplex data");
  gof->add_option("--data", o.data, "input CSV")->required();
  gof->add_option("--perturb-row", o.perturb_row, "1-based row to perturb")->check(CLI::PositiveNumber);
  gof->add_option("--factor", o.factor, "perturbation factor")->check(CLI::PositiveNumber);
  gof->add_option("--qq-draws", o.qq_draws, "simulated rows for Q-Q data")->check(CLI::Range(2, 100000000));
  add_ks_flags(gof, o);
  gof->add_option("--seed", o.seed, "random seed");
  gof->add_option("--out", o.out, "output JSON (default stdout)");

  auto* mom = app.add_subcommand("moments", "product moment: closed form against simulation");
  add_dg_flags(mom, o);
  mom->add_option("--order", o.order, "moment order, one entry per coordinate")->delimiter(',');
  mom->add_option("--mc-n", o.mc_n, "simulation draws")->check(CLI::Range(1000, 1000000000));
  mom->add_option("--seed", o.seed, "random seed");
  mom->add_option("--out", o.out, "output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  // Defaults that depend on the subcommand.
  if (o.n == 0) o.n = s2->parsed() ? 100 : 200;

  try {
    if (sample->parsed()) return cmd_sample(o);
    if (fit->parsed()) return cmd_fit(o);
    if (s1->parsed()) return cmd_simstudy1(o);
    if (s2->parsed()) return cmd_simstudy2(o);
    if (s3->parsed()) return cmd_simstudy3(o);
    if (gof->parsed()) return cmd_gof(o);
    if (mom->parsed()) return cmd_moments(o);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kIo;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const ContractError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
