#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avalanche/report.hpp"

namespace aval {

enum class Command { Verify, Sweep, Shadow, Forge };
enum class Format { Json, Csv };

Command parse_command(const std::string& name);
Format parse_format(const std::string& name);
std::string command_name(Command c);

struct SweepGrid {
  std::vector<double> kappas;
  std::vector<double> epsilons;
  std::vector<int> ns;
  std::vector<int> ms;
};

inline constexpr std::size_t kMaxCells = 10000;

struct ExperimentConfig {
  Command command = Command::Verify;
  ForgeSpec spec;
  ApConstants constants;
  // Axes left empty fall back to the single value in spec.
  SweepGrid grid;
  // Conclusion names emitted per sweep cell: start_direction, end_direction,
  // product_gap, telescoped, or "all".
  std::vector<std::string> quantities{"telescoped"};
  std::optional<std::string> chain_path;  // verify a stored chain instead of forging one
  std::string out;                        // empty: standard output
  Format format = Format::Json;
  int threads = 1;

  void validate() const;  // throws ConfigError
  std::size_t cell_count() const;
};

// Parses a JSON config; unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text);

struct ExperimentResult {
  std::vector<ReportRow> rows;
  std::string artifact;  // serialized output in the configured format
  bool pass = false;
  int exit_code() const { return pass ? 0 : 1; }
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Writes result.artifact to config.out (atomically) or returns it for stdout.
void emit_report(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace aval
