#include "avalanche/report.hpp"

#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace aval {

using nlohmann::json;

namespace {

constexpr const char* kRowsSchema = "avalanche.rows";
constexpr const char* kChainSchema = "avalanche.chain";
constexpr const char* kApSchema = "avalanche.ap_report";

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

json number(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double x = s.empty() ? 0.0 : std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ConfigError("csv: not a number: '" + s + "'");
  return x;
}

template <class Int>
Int parse_integer(const std::string& s) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("csv: not an integer: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("csv: not an integer: '" + s + "'");
  return static_cast<Int>(x);
}

json row_json(const ReportRow& r) {
  return json{{"cell", r.cell},         {"kappa", number(r.kappa)}, {"epsilon", number(r.epsilon)},
              {"n", r.n},               {"m", r.m},                 {"seed", r.seed},
              {"quantity", r.quantity}, {"raw", number(r.raw)},     {"bound", number(r.bound)},
              {"verdict", r.pass ? "pass" : "fail"}};
}

double json_double(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

ReportRow row_from(const json& j) {
  ReportRow r;
  r.cell = j.at("cell").get<std::string>();
  r.kappa = json_double(j.at("kappa"));
  r.epsilon = json_double(j.at("epsilon"));
  r.n = j.at("n").get<int>();
  r.m = j.at("m").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.quantity = j.at("quantity").get<std::string>();
  r.raw = json_double(j.at("raw"));
  r.bound = json_double(j.at("bound"));
  const std::string v = j.at("verdict").get<std::string>();
  if (v != "pass" && v != "fail") throw ConfigError("report: verdict must be pass or fail, got " + v);
  r.pass = v == "pass";
  return r;
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

void require_schema(const json& j, const char* schema) {
  if (!j.is_object() || j.value("schema", "") != schema) {
    throw ConfigError(std::string("expected schema ") + schema);
  }
  if (j.value("version", 0) != kReportVersion) {
    throw ConfigError(std::string(schema) + ": unsupported version");
  }
}

json hypotheses_json(const APHypotheses& h) {
  json alphas = json::array();
  for (double a : h.alphas) alphas.push_back(number(a));
  return json{{"kappa", h.kappa},
              {"epsilon", h.epsilon},
              {"c", h.c},
              {"tau", h.tau.dims},
              {"sigmas", h.sigmas},
              {"alphas", alphas},
              {"norm_ratios", h.norm_ratios},
              {"failing_sigmas", h.failing_sigmas},
              {"failing_alphas", h.failing_alphas},
              {"gaps_ok", h.gaps_ok},
              {"angles_ok", h.angles_ok},
              {"practical_ok", h.practical_ok},
              {"practical_alpha_bound", h.practical_alpha_bound},
              {"regime_ok", h.regime_ok},
              {"pass", h.pass}};
}

json conclusion_json(const Conclusion& c) {
  json j{{"name", c.name},         {"raw", number(c.raw)},
         {"formula", c.formula},   {"multiplier", c.multiplier},
         {"bound", c.bound},       {"verdict", c.pass ? "pass" : "fail"}};
  if (c.log_raw) j["log_raw"] = number(*c.log_raw);
  if (c.log_bound) j["log_bound"] = number(*c.log_bound);
  return j;
}

}  // namespace

bool ReportRow::operator==(const ReportRow& o) const {
  return cell == o.cell && same_double(kappa, o.kappa) && same_double(epsilon, o.epsilon) && n == o.n &&
         m == o.m && seed == o.seed && quantity == o.quantity && same_double(raw, o.raw) &&
         same_double(bound, o.bound) && pass == o.pass;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const ReportRow& r : rows) {
    out += r.cell + "," + format_double(r.kappa) + "," + format_double(r.epsilon) + "," + std::to_string(r.n) + "," +
           std::to_string(r.m) + "," + std::to_string(r.seed) + "," + r.quantity + "," + format_double(r.raw) + "," +
           format_double(r.bound) + "," + (r.pass ? "pass" : "fail") + "\n";
  }
  return out;
}

std::vector<ReportRow> rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("csv: missing or unexpected header");
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (f.size() != 10) throw ConfigError("csv: expected 10 fields in '" + line + "'");
    if (f[9] != "pass" && f[9] != "fail") throw ConfigError("csv: bad verdict '" + f[9] + "'");
    rows.push_back(ReportRow{f[0], parse_double(f[1]), parse_double(f[2]), parse_integer<int>(f[3]),
                             parse_integer<int>(f[4]), parse_integer<std::uint64_t>(f[5]), f[6],
                             parse_double(f[7]), parse_double(f[8]), f[9] == "pass"});
  }
  return rows;
}

std::string rows_to_json(const std::vector<ReportRow>& rows) {
  json j{{"schema", kRowsSchema}, {"version", kReportVersion}, {"rows", json::array()}};
  for (const ReportRow& r : rows) j["rows"].push_back(row_json(r));
  return j.dump(2) + "\n";
}

std::vector<ReportRow> rows_from_json(const std::string& text) {
  const json j = parse_json(text, "rows_from_json");
  if (!j.is_object() || !j.contains("rows")) throw ConfigError("rows_from_json: no rows array");
  if (j.value("version", 0) != kReportVersion) throw ConfigError("rows_from_json: unsupported version");
  std::vector<ReportRow> rows;
  try {
    for (const json& r : j.at("rows")) rows.push_back(row_from(r));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("rows_from_json: ") + e.what());
  }
  return rows;
}

std::string chain_to_json(const Chain& chain, const ForgeSpec* spec) {
  json mats = json::array();
  for (const Matrix& g : chain.matrices()) {
    json rows = json::array();
    for (Index r = 0; r < g.rows(); ++r) {
      json row = json::array();
      for (Index c = 0; c < g.cols(); ++c) row.push_back(g(r, c));
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  json j{{"schema", kChainSchema}, {"version", kReportVersion}, {"matrices", mats}};
  if (spec) {
    j["spec"] = json{{"n", spec->n},           {"m", spec->m},
                     {"kappa", spec->kappa},   {"epsilon", spec->epsilon},
                     {"seed", spec->seed},     {"norm_min", spec->norm_min},
                     {"norm_max", spec->norm_max}};
    if (spec->regime_c) j["spec"]["regime_c"] = *spec->regime_c;
  }
  return j.dump() + "\n";
}

Chain chain_from_json(const std::string& text) {
  const json j = parse_json(text, "chain_from_json");
  require_schema(j, kChainSchema);
  std::vector<Matrix> mats;
  try {
    for (const json& mj : j.at("matrices")) {
      const auto rows = static_cast<Index>(mj.size());
      const auto cols = rows ? static_cast<Index>(mj.at(0).size()) : 0;
      Matrix g(rows, cols);
      for (Index r = 0; r < rows; ++r) {
        const json& row = mj.at(static_cast<std::size_t>(r));
        if (static_cast<Index>(row.size()) != cols) throw ShapeError("chain_from_json: ragged matrix");
        for (Index c = 0; c < cols; ++c) g(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
      }
      mats.push_back(std::move(g));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("chain_from_json: ") + e.what());
  }
  return Chain(std::move(mats));
}

std::string ap_report_to_json(const APReport& report, const std::vector<ReportRow>& rows) {
  json conclusions = json::array();
  for (const Conclusion& c : report.conclusions) conclusions.push_back(conclusion_json(c));
  json svps = json::array();
  for (const SvpResult& s : report.svps) {
    svps.push_back(json{{"name", s.name},
                        {"signed_telescoped", s.signed_telescoped},
                        {"product_ratio", number(s.product_ratio)},
                        {"remark_consistent", s.remark_consistent},
                        {"conclusion", conclusion_json(s.conclusion)}});
  }
  json j{{"schema", kApSchema},
         {"version", kReportVersion},
         {"n", report.n},
         {"hypotheses", hypotheses_json(report.hypotheses)},
         {"d_start", report.d_start},
         {"d_end", report.d_end},
         {"log_sigma_product", report.log_sigma_product},
         {"telescoped", report.telescoped},
         {"identity_error", report.identity_error},
         {"identities_ok", report.identities_ok},
         {"pass", report.pass()},
         {"conclusions", conclusions},
         {"svps", svps},
         {"rows", json::array()}};
  for (const ReportRow& r : rows) j["rows"].push_back(row_json(r));
  return j.dump(2) + "\n";
}

std::vector<ReportRow> conclusion_rows(const APReport& report, const std::string& cell, const ForgeSpec& spec) {
  std::vector<ReportRow> rows;
  for (const Conclusion& c : report.conclusions) {
    rows.push_back(ReportRow{cell, spec.kappa, spec.epsilon, report.n, spec.m, spec.seed, c.name, c.raw, c.bound,
                             c.pass});
  }
  return rows;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing: " + std::strerror(errno));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace aval
