#include "avalanche/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iostream>
#include <set>
#include <thread>

#include "avalanche/shadowing.hpp"
#include "json.hpp"

namespace aval {

using nlohmann::json;

namespace {

const std::vector<std::string> kConclusionNames{"start_direction", "end_direction", "product_gap", "telescoped"};

std::string cell_key(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", i);
  return buf;
}

std::vector<ForgeSpec> grid_specs(const ExperimentConfig& c) {
  const auto axis = [](const auto& values, auto fallback) {
    using T = decltype(fallback);
    return values.empty() ? std::vector<T>{fallback} : std::vector<T>(values.begin(), values.end());
  };
  const std::vector<double> ks = axis(c.grid.kappas, c.spec.kappa);
  const std::vector<double> es = axis(c.grid.epsilons, c.spec.epsilon);
  const std::vector<int> ns = axis(c.grid.ns, c.spec.n);
  const std::vector<int> ms = axis(c.grid.ms, c.spec.m);
  std::vector<ForgeSpec> out;
  for (double k : ks)
    for (double e : es)
      for (int n : ns)
        for (int m : ms) {
          ForgeSpec s = c.spec;
          s.kappa = k;
          s.epsilon = e;
          s.n = n;
          s.m = m;
          out.push_back(s);
        }
  return out;
}

ReportRow failure_row(const std::string& cell, const ForgeSpec& s, const std::string& quantity, double raw) {
  return ReportRow{cell, s.kappa, s.epsilon, s.n, s.m, s.seed, quantity, raw, 0.0, false};
}

std::string serialize_rows(const ExperimentConfig& c, const std::vector<ReportRow>& rows) {
  return c.format == Format::Csv ? rows_to_csv(rows) : rows_to_json(rows);
}

bool all_pass(const std::vector<ReportRow>& rows) {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

ExperimentResult run_verify(const ExperimentConfig& c) {
  ForgeSpec spec = c.spec;
  Chain chain;
  if (c.chain_path) {
    chain = chain_from_json(read_file(*c.chain_path));
    spec.n = static_cast<int>(chain.size());
    spec.m = chain.dim();
  } else {
    chain = forge_chain(spec);
  }
  ExperimentResult r;
  try {
    const APReport report = run_ap(chain, spec.kappa, spec.epsilon, c.constants);
    r.rows = conclusion_rows(report, "verify", spec);
    r.pass = report.pass();
    r.artifact = c.format == Format::Csv ? rows_to_csv(r.rows) : ap_report_to_json(report, r.rows);
  } catch (const HypothesisError& e) {
    const APHypotheses& h = e.hypotheses();
    const double failures = static_cast<double>(h.failing_sigmas.size() + h.failing_alphas.size());
    r.rows = {failure_row("verify", spec, "hypotheses", failures)};
    r.pass = false;
    if (c.format == Format::Csv) {
      r.artifact = rows_to_csv(r.rows);
    } else {
      json j = json::parse(rows_to_json(r.rows));
      j["error"] = e.what();
      r.artifact = j.dump(2) + "\n";
    }
  }
  return r;
}

std::vector<ReportRow> sweep_cell(const ExperimentConfig& c, const ForgeSpec& spec, const std::string& cell) {
  try {
    const APReport report = run_ap(forge_chain(spec), spec.kappa, spec.epsilon, c.constants);
    const std::vector<ReportRow> all = conclusion_rows(report, cell, spec);
    const bool everything = std::find(c.quantities.begin(), c.quantities.end(), "all") != c.quantities.end();
    std::vector<ReportRow> out;
    for (const ReportRow& row : all) {
      if (everything || std::find(c.quantities.begin(), c.quantities.end(), row.quantity) != c.quantities.end()) {
        out.push_back(row);
      }
    }
    return out;
  } catch (const ForgeError&) {
    return {failure_row(cell, spec, "forge", std::numeric_limits<double>::quiet_NaN())};
  } catch (const HypothesisError& e) {
    const APHypotheses& h = e.hypotheses();
    return {failure_row(cell, spec, "hypotheses", static_cast<double>(h.failing_sigmas.size() + h.failing_alphas.size()))};
  }
}

ExperimentResult run_sweep(const ExperimentConfig& c) {
  const std::vector<ForgeSpec> specs = grid_specs(c);
  std::vector<std::vector<ReportRow>> per_cell(specs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) per_cell[i] = sweep_cell(c, specs[i], cell_key(i));
  };
  const int threads = std::max(1, std::min<int>(c.threads, static_cast<int>(specs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  ExperimentResult r;
  for (auto& rows : per_cell) r.rows.insert(r.rows.end(), rows.begin(), rows.end());
  r.pass = all_pass(r.rows);
  r.artifact = serialize_rows(c, r.rows);
  return r;
}

ExperimentResult run_shadow(const ExperimentConfig& c) {
  const ForgeSpec& spec = c.spec;
  const Chain chain = forge_chain(spec);
  const ShadowConfig cfg = ap_shadow_config(spec.kappa, spec.epsilon);
  ShadowOptions options;
  options.seed = spec.seed;
  const auto report = shadow_run(ap_shadow_problem(chain.matrices(), cfg.epsilon), cfg, options);

  ExperimentResult r;
  const std::string cell = "shadow";
  int failing = 0;
  for (const HypothesisItem& h : report.hypotheses) failing += h.holds ? 0 : 1;
  r.rows.push_back(ReportRow{cell, spec.kappa, spec.epsilon, spec.n, spec.m, spec.seed, "hypotheses",
                             static_cast<double>(failing), 0.0, report.hypotheses_hold});
  r.rows.push_back(ReportRow{cell, spec.kappa, spec.epsilon, spec.n, spec.m, spec.seed, "lipschitz_excess",
                             report.lipschitz_excess, options.floor, report.lipschitz_holds});
  r.rows.push_back(ReportRow{cell, spec.kappa, spec.epsilon, spec.n, spec.m, spec.seed, "end_distance",
                             report.end_bound.lhs, report.end_bound.rhs, report.end_bound.holds});
  if (report.fixed_point_bound) {
    const Inequality& f = *report.fixed_point_bound;
    r.rows.push_back(ReportRow{cell, spec.kappa, spec.epsilon, spec.n, spec.m, spec.seed, "fixed_point_distance",
                               f.lhs, f.rhs, f.holds});
  }
  double worst = 0.0;
  for (const TableEntry& t : report.table) worst = std::max(worst, t.distance - t.bound);
  r.rows.push_back(ReportRow{cell, spec.kappa, spec.epsilon, spec.n, spec.m, spec.seed, "table_excess", worst,
                             options.floor, report.table_holds});
  r.pass = all_pass(r.rows);

  if (c.format == Format::Csv) {
    r.artifact = rows_to_csv(r.rows);
  } else {
    json j = json::parse(rows_to_json(r.rows));
    j["schema"] = "avalanche.shadow_report";
    j["config"] = json{{"epsilon", cfg.epsilon}, {"kappa", cfg.kappa}, {"delta", cfg.delta}};
    j["iterations"] = report.iterations;
    json hyps = json::array();
    for (const HypothesisItem& h : report.hypotheses) {
      hyps.push_back(json{{"item", h.item}, {"index", h.index}, {"value", h.value}, {"threshold", h.threshold},
                          {"holds", h.holds}, {"certificate", h.certificate}});
    }
    j["hypotheses"] = hyps;
    json table = json::array();
    for (const TableEntry& t : report.table) table.push_back(json{t.i, t.j, t.distance, t.bound});
    j["table"] = table;
    r.artifact = j.dump(2) + "\n";
  }
  return r;
}

ExperimentResult run_forge(const ExperimentConfig& c) {
  const ForgeSpec& spec = c.spec;
  const Chain chain = forge_chain(spec);
  const APHypotheses h = check_hypotheses(chain, spec.kappa, spec.epsilon, c.constants);
  ExperimentResult r;
  for (std::size_t i = 0; i < h.sigmas.size(); ++i) {
    const bool ok = std::find(h.failing_sigmas.begin(), h.failing_sigmas.end(), static_cast<int>(i)) ==
                    h.failing_sigmas.end();
    r.rows.push_back(ReportRow{cell_key(i), spec.kappa, spec.epsilon, spec.n, spec.m, spec.seed, "sigma",
                               h.sigmas[i], spec.kappa, ok});
  }
  for (std::size_t i = 0; i < h.alphas.size(); ++i) {
    const int idx = static_cast<int>(i) + 1;
    const bool ok = std::find(h.failing_alphas.begin(), h.failing_alphas.end(), idx) == h.failing_alphas.end();
    r.rows.push_back(ReportRow{cell_key(i + 1), spec.kappa, spec.epsilon, spec.n, spec.m, spec.seed, "alpha",
                               h.alphas[i], spec.epsilon, ok});
  }
  r.pass = all_pass(r.rows);
  r.artifact = c.format == Format::Csv ? rows_to_csv(r.rows) : chain_to_json(chain, &spec);
  return r;
}

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
  }
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "verify") return Command::Verify;
  if (name == "sweep") return Command::Sweep;
  if (name == "shadow") return Command::Shadow;
  if (name == "forge") return Command::Forge;
  throw ConfigError("unknown command '" + name + "' (expected verify, sweep, shadow or forge)");
}

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw ConfigError("unknown format '" + name + "' (expected json or csv)");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Verify: return "verify";
    case Command::Sweep: return "sweep";
    case Command::Shadow: return "shadow";
    case Command::Forge: return "forge";
  }
  return "verify";
}

std::size_t ExperimentConfig::cell_count() const {
  const auto len = [](std::size_t s) { return std::max<std::size_t>(1, s); };
  return len(grid.kappas.size()) * len(grid.epsilons.size()) * len(grid.ns.size()) * len(grid.ms.size());
}

void ExperimentConfig::validate() const {
  const ApConstants& k = constants;
  for (double x : {k.c, k.c1, k.c2, k.c4, k.almost_invariance, k.perturbation_direction, k.perturbation_norm}) {
    if (!(x > 0)) throw ConfigError("config: constants must be positive");
  }
  if (cell_count() > kMaxCells) throw ConfigError("config: sweep grid exceeds 10000 cells");
  if (threads < 1) throw ConfigError("config: threads must be at least 1");
  for (const std::string& q : quantities) {
    if (q != "all" && std::find(kConclusionNames.begin(), kConclusionNames.end(), q) == kConclusionNames.end()) {
      throw ConfigError("config: unknown quantity '" + q + "'");
    }
  }
  try {
    for (const ForgeSpec& s : grid_specs(*this)) s.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  check_keys(j,
             {"command", "seed", "n", "m", "kappa", "epsilon", "norm_min", "norm_max", "regime_c", "constants",
              "grid", "quantities", "chain", "out", "format", "threads"},
             "config");
  ExperimentConfig c;
  if (j.contains("command")) c.command = parse_command(field<std::string>(j, "command"));
  if (j.contains("seed")) c.spec.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("n")) c.spec.n = field<int>(j, "n");
  if (j.contains("m")) c.spec.m = field<int>(j, "m");
  if (j.contains("kappa")) c.spec.kappa = field<double>(j, "kappa");
  if (j.contains("epsilon")) c.spec.epsilon = field<double>(j, "epsilon");
  if (j.contains("norm_min")) c.spec.norm_min = field<double>(j, "norm_min");
  if (j.contains("norm_max")) c.spec.norm_max = field<double>(j, "norm_max");
  if (j.contains("regime_c") && !j.at("regime_c").is_null()) c.spec.regime_c = field<double>(j, "regime_c");
  if (j.contains("constants")) {
    const json& k = j.at("constants");
    check_keys(k, {"c", "c1", "c2", "c4", "almost_invariance", "perturbation_direction", "perturbation_norm"},
               "constants");
    const auto set = [&](const char* key, double& dst) {
      if (k.contains(key)) dst = field<double>(k, key);
    };
    set("c", c.constants.c);
    set("c1", c.constants.c1);
    set("c2", c.constants.c2);
    set("c4", c.constants.c4);
    set("almost_invariance", c.constants.almost_invariance);
    set("perturbation_direction", c.constants.perturbation_direction);
    set("perturbation_norm", c.constants.perturbation_norm);
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, {"kappa", "epsilon", "n", "m"}, "grid");
    if (g.contains("kappa")) c.grid.kappas = field<std::vector<double>>(g, "kappa");
    if (g.contains("epsilon")) c.grid.epsilons = field<std::vector<double>>(g, "epsilon");
    if (g.contains("n")) c.grid.ns = field<std::vector<int>>(g, "n");
    if (g.contains("m")) c.grid.ms = field<std::vector<int>>(g, "m");
  }
  if (j.contains("quantities")) c.quantities = field<std::vector<std::string>>(j, "quantities");
  if (j.contains("chain")) c.chain_path = field<std::string>(j, "chain");
  if (j.contains("out")) c.out = field<std::string>(j, "out");
  if (j.contains("format")) c.format = parse_format(field<std::string>(j, "format"));
  if (j.contains("threads")) c.threads = field<int>(j, "threads");
  return c;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  switch (config.command) {
    case Command::Verify: return run_verify(config);
    case Command::Sweep: return run_sweep(config);
    case Command::Shadow: return run_shadow(config);
    case Command::Forge: return run_forge(config);
  }
  throw ConfigError("unknown command");
}

void emit_report(const ExperimentConfig& config, const ExperimentResult& result) {
  if (result.rows.empty()) throw DomainError("emit_report: no results to write");
  if (config.out.empty()) {
    std::cout << result.artifact << std::flush;
  } else {
    write_atomic(config.out, result.artifact);
  }
}

}  // namespace aval
