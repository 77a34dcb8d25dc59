// avalanche: verify, sweep, shadow and forge matrix chains from the command line.
//
// Exit status: 0 when every verdict passes, 1 when any verdict fails, 2 on a
// configuration or I/O error.  AVALANCHE_THREADS sets the sweep worker count.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "avalanche/experiment.hpp"

namespace {

int threads_from_env() {
  const char* v = std::getenv("AVALANCHE_THREADS");
  if (!v || !*v) return 1;
  try {
    std::size_t used = 0;
    const int t = std::stoi(v, &used);
    if (used != std::string(v).size() || t < 1) throw std::invalid_argument(v);
    return t;
  } catch (const std::exception&) {
    throw aval::ConfigError(std::string("AVALANCHE_THREADS must be a positive integer, got '") + v + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Avalanche principle verifier and chain forge"};
  std::optional<std::string> config_path, command, out, format;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON experiment config");
  app.add_option("--command", command, "verify | sweep | shadow | forge");
  app.add_option("--seed", seed, "64-bit seed");
  app.add_option("--out", out, "output path (default: standard output)");
  app.add_option("--format", format, "json | csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    aval::ExperimentConfig config;
    if (config_path) config = aval::config_from_json(aval::read_file(*config_path));
    if (command) config.command = aval::parse_command(*command);
    if (seed) config.spec.seed = *seed;
    if (out) config.out = *out;
    if (format) config.format = aval::parse_format(*format);
    config.threads = threads_from_env();

    const aval::ExperimentResult result = aval::run_experiment(config);
    aval::emit_report(config, result);
    if (!result.pass) {
      for (const aval::ReportRow& r : result.rows) {
        if (!r.pass) std::cerr << "fail: " << r.cell << " " << r.quantity << " raw=" << aval::format_double(r.raw)
                               << " bound=" << aval::format_double(r.bound) << "\n";
      }
    }
    return result.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "avalanche: " << e.what() << "\n";
    return 2;
  }
}
