#include "dirgamma/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "dirgamma/error.hpp"

namespace dirgamma {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

DataMatrix parse_csv(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::size_t rows = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (!header_seen) {
      for (std::size_t c = 0; c < fields.size(); ++c) {
        if (fields[c] != "x" + std::to_string(c + 1)) {
          throw ParseError("header must be x1,...,xp", line_no);
        }
      }
      cols = fields.size();
      header_seen = true;
      continue;
    }
    if (fields.size() != cols) {
      throw ParseError("expected " + std::to_string(cols) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    for (const auto f : fields) {
      std::string token(f);
      char* stop = nullptr;
      const double v = std::strtod(token.c_str(), &stop);
      if (token.empty() || stop != token.c_str() + token.size()) {
        throw ParseError("not a number: '" + token + "'", line_no);
      }
      if (!std::isfinite(v) || !(v > 0.0)) {
        throw ParseError("values must be finite and positive: '" + token + "'", line_no);
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (!header_seen) throw ParseError("missing header", line_no == 0 ? 1 : line_no);
  if (rows == 0) throw ParseError("no data rows", line_no);
  return DataMatrix(rows, cols, std::move(values));
}

std::string format_csv(const DataMatrix& data) {
  std::string out;
  for (std::size_t c = 0; c < data.cols(); ++c) {
    out += (c ? ",x" : "x") + std::to_string(c + 1);
  }
  out += '\n';
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t c = 0; c < data.cols(); ++c) {
      if (c) out += ',';
      out += format_double(data(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

DataMatrix read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path)); }

void write_csv(const std::filesystem::path& path, const DataMatrix& data) {
  write_file(path, format_csv(data));
}

std::string git_blob_sha1(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw IoError("SHA-1 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 15];
  }
  return hex;
}

Json to_json(const FitResult& fit) {
  Json estimates = Json::object();
  for (std::size_t k = 0; k < fit.estimates.size(); ++k) estimates[fit.names[k]] = number(fit.estimates[k]);
  return Json{{"model", model_name(fit.model)},
              {"p", fit.p},
              {"estimates", estimates},
              {"loglik", number(fit.loglik)},
              {"aic", number(fit.aic)},
              {"bic", number(fit.bic)},
              {"n_obs", fit.n_obs},
              {"n_params", fit.n_params},
              {"converged", fit.converged},
              {"iterations", fit.iterations},
              {"evaluations", fit.evaluations}};
}

Json to_json(const IntervalSet& set) {
  Json intervals = Json::array();
  for (const auto& iv : set.intervals) {
    intervals.push_back({{"name", iv.name},
                         {"estimate", number(iv.estimate)},
                         {"lower", number(iv.lower)},
                         {"upper", number(iv.upper)},
                         {"std_error", number(iv.std_error)}});
  }
  Json out{{"method", interval_method_name(set.method)}, {"level", set.level}, {"intervals", intervals}};
  if (set.method == IntervalMethod::Bootstrap) {
    out["replicates"] = set.replicates;
    out["failures"] = set.failures;
    out["degraded"] = set.degraded;
    if (set.degraded) out["warning"] = "more than 20% of bootstrap refits failed";
  } else {
    out["condition"] = number(set.condition);
  }
  return out;
}

Json to_json(const KSReport& report) {
  return Json{{"d", report.d},
              {"m", report.m},
              {"ks_dg", number(report.ks_dg)},
              {"ks_d", number(report.ks_d)},
              {"ratio", number(report.ratio)},
              {"ks_dg_stderr", number(report.ks_dg_stderr)},
              {"ks_d_stderr", number(report.ks_d_stderr)}};
}

Json to_json(const MomentReport& report) {
  return Json{{"order", report.order},
              {"formula_value", number(report.formula_value)},
              {"mc_value", number(report.mc_value)},
              {"mc_stderr", number(report.mc_stderr)},
              {"relative_gap", number(report.relative_gap)},
              {"discrepancy", report.discrepancy}};
}

Json to_json(const SimStudySummary& summary) {
  Json sizes = Json::array();
  for (const auto& s : summary.sizes) {
    Json params = Json::array();
    for (const auto& ps : s.parameters) {
      params.push_back({{"name", ps.name},
                        {"truth", ps.truth},
                        {"mean", number(ps.mean)},
                        {"bias", number(ps.bias)},
                        {"mse", number(ps.mse)},
                        {"cp_asymptotic", number(ps.cp_asymptotic)},
                        {"cp_bootstrap", number(ps.cp_bootstrap)},
                        {"len_asymptotic", number(ps.len_asymptotic)},
                        {"len_bootstrap", number(ps.len_bootstrap)}});
    }
    sizes.push_back({{"n", s.n},
                     {"reps", s.reps},
                     {"fit_failures", s.fit_failures},
                     {"asymptotic_failures", s.asymptotic_failures},
                     {"bootstrap_failures", s.bootstrap_failures},
                     {"bootstrap_degraded", s.bootstrap_degraded},
                     {"failure_budget_exceeded", s.failure_budget_exceeded},
                     {"parameters", params}});
  }
  return Json{{"sizes", sizes}};
}

Json to_json(const std::vector<QQPoint>& qq) {
  Json out = Json::array();
  for (const auto& q : qq) out.push_back({q.probability, number(q.observed), number(q.simulated)});
  return out;
}

std::string qq_csv(const std::vector<QQPoint>& qq) {
  std::string out = "prob,observed,simulated\n";
  for (const auto& q : qq) {
    out += format_double(q.probability) + ',' + format_double(q.observed) + ',' +
           format_double(q.simulated) + '\n';
  }
  return out;
}

std::string contour_csv(const std::vector<ContourPoint>& grid) {
  std::string out = "x1,x2,density\n";
  for (const auto& g : grid) {
    out += format_double(g.x1) + ',' + format_double(g.x2) + ',' + format_double(g.density) + '\n';
  }
  return out;
}

}  // namespace dirgamma
