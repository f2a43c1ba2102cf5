#pragma once

#include "phononkin/coupling.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace phononkin::runner {

/// Exit statuses of `phononkin run`.
enum ExitCode : int {
  ok = 0,
  checks_failed = 1,
  config_error = 2,
  model_error = 3,
  runtime_error = 4,
};

/// Parsed run configuration with every default resolved.
struct RunConfig {
  std::string experiment;
  nlohmann::json model_json;
  CouplingSpec model;
  double epsilon = 0.1;
  double gamma = 1.0;
  double temperature = 1.0;
  std::size_t lattice_size = 512;
  std::size_t ensemble_size = 200;
  /// Microscopic step; empty means the integrator default for the model.
  std::optional<double> dt;
  /// Macroscopic sample times; empty means the experiment's default grid.
  std::vector<double> times;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  /// 0 = all available cores.
  unsigned threads = 0;
  std::size_t walkers = 100000;
  std::size_t x_cells = 16;
  std::size_t k_bands = 8;
};

/// Validates against the schema in run_config.schema.json. Unknown keys,
/// wrong types and out-of-range values throw ConfigError naming the field;
/// an invalid coupling throws the model errors of build_coupling.
RunConfig parse_config(const nlohmann::json& doc);

/// Fills experiment-dependent defaults (time grid, dt) in place.
void resolve_defaults(RunConfig& cfg);

/// Every field, defaults included, as JSON.
nlohmann::json to_json(const RunConfig& cfg);

struct ExperimentInfo {
  std::string id;
  std::string description;
};

/// Sorted by id.
const std::vector<ExperimentInfo>& list_experiments();

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ExperimentResult {
  std::vector<Check> checks;
  nlohmann::json metrics = nlohmann::json::object();
  std::vector<std::string> artifacts;

  bool passed() const;
};

/// Runs one experiment, writing CSV artifacts into cfg.output_dir.
ExperimentResult run_experiment(const RunConfig& cfg, std::ostream& log);

/// Full `run` command: parse, lock the output directory, run, write
/// manifest.json. Returns an ExitCode. `overrides` is merged into the
/// document before validation.
int run(const std::filesystem::path& config_path, const nlohmann::json& overrides, std::ostream& log,
        std::ostream& err);

/// Version string recorded in manifests.
std::string version();

}  // namespace phononkin::runner
