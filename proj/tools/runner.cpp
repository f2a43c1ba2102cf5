#include "runner.hpp"

#include "phononkin/dynamics.hpp"
#include "phononkin/errors.hpp"
#include "phononkin/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <set>

#ifndef PHONONKIN_VERSION_STRING
#define PHONONKIN_VERSION_STRING "unknown"
#endif

namespace phononkin::runner {

using nlohmann::json;

namespace {

const std::set<std::string> top_level_keys = {
    "experiment", "model",  "epsilon", "gamma",   "temperature", "lattice_size", "ensemble_size",
    "dt",         "times",  "seed",    "output_dir", "threads",  "walkers",      "x_cells",
    "k_bands"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(prefix + key, "unknown key");
    }
  }
}

double number(const json& doc, const std::string& key, double fallback) {
  if (!doc.contains(key)) {
    return fallback;
  }
  const json& v = doc.at(key);
  if (!v.is_number()) {
    throw ConfigError(key, "expected a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw ConfigError(key, "must be finite");
  }
  return x;
}

std::uint64_t count(const json& doc, const std::string& key, std::uint64_t fallback) {
  if (!doc.contains(key)) {
    return fallback;
  }
  const json& v = doc.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(key, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

CouplingSpec parse_model(const json& m) {
  if (!m.is_object()) {
    throw ConfigError("model", "expected an object");
  }
  if (!m.contains("type") || !m.at("type").is_string()) {
    throw ConfigError("model.type", "expected \"nearest_neighbor\" or \"coefficients\"");
  }
  const auto type = m.at("type").get<std::string>();
  if (type == "nearest_neighbor") {
    reject_unknown(m, {"type", "omega0_sq", "alpha1"}, "model.");
    NearestNeighbor nn;
    nn.omega0_sq = number(m, "omega0_sq", 0.0);
    nn.alpha1 = number(m, "alpha1", 1.0);
    if (nn.omega0_sq < 0.0) {
      throw ConfigError("model.omega0_sq", "must be nonnegative");
    }
    return nn;
  }
  if (type == "coefficients") {
    reject_unknown(m, {"type", "alpha"}, "model.");
    if (!m.contains("alpha") || !m.at("alpha").is_object() || m.at("alpha").empty()) {
      throw ConfigError("model.alpha", "expected an object mapping offsets to coefficients");
    }
    CouplingList list;
    for (const auto& [key, value] : m.at("alpha").items()) {
      int offset = 0;
      try {
        std::size_t used = 0;
        offset = std::stoi(key, &used);
        if (used != key.size()) {
          throw std::invalid_argument(key);
        }
      } catch (const std::exception&) {
        throw ConfigError("model.alpha." + key, "offset must be an integer");
      }
      if (!value.is_number()) {
        throw ConfigError("model.alpha." + key, "expected a number");
      }
      list[offset] = value.get<double>();
    }
    return list;
  }
  throw ConfigError("model.type", "unknown model type '" + type + "'");
}

std::vector<double> default_times(const std::string& experiment) {
  if (experiment == "spectrum_relax") {
    return {0.0, 0.5, 1.0, 2.0};
  }
  if (experiment == "wigner_transport") {
    return {0.0, 0.5, 1.0};
  }
  if (experiment == "current_corr") {
    std::vector<double> t;
    for (int i = 0; i <= 8; ++i) {
      t.push_back(0.25 * i);
    }
    return t;
  }
  if (experiment == "superdiffusion") {
    std::vector<double> t;
    for (int i = 0; i <= 8; ++i) {
      t.push_back(std::pow(10.0, 2.0 + 0.25 * i));
    }
    return t;
  }
  return {};
}

bool uses_chain(const std::string& experiment) {
  return experiment == "spectrum_relax" || experiment == "wigner_transport" || experiment == "current_corr";
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Exclusive lock file inside the output directory, removed on destruction.
class DirectoryLock {
public:
  explicit DirectoryLock(const std::filesystem::path& dir) : path_(dir / ".phononkin.lock") {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (f == nullptr) {
      throw Error("output directory " + dir.string() + " is locked by another run (remove " + path_.string() +
                  " if stale)");
    }
    std::fclose(f);
  }
  ~DirectoryLock() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
  std::filesystem::path path_;
};

}  // namespace

bool ExperimentResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("<root>", "expected a JSON object");
  }
  reject_unknown(doc, top_level_keys, "");
  RunConfig cfg;
  if (!doc.contains("experiment") || !doc.at("experiment").is_string()) {
    throw ConfigError("experiment", "required string");
  }
  cfg.experiment = doc.at("experiment").get<std::string>();
  const auto& known = list_experiments();
  if (std::none_of(known.begin(), known.end(), [&](const ExperimentInfo& e) { return e.id == cfg.experiment; })) {
    throw ConfigError("experiment", "unknown experiment '" + cfg.experiment + "'");
  }
  if (!doc.contains("model")) {
    throw ConfigError("model", "required");
  }
  cfg.model_json = doc.at("model");
  cfg.model = parse_model(cfg.model_json);
  // Validates the assumptions even for experiments that never use the model.
  (void)build_coupling(cfg.model);

  cfg.epsilon = number(doc, "epsilon", cfg.epsilon);
  if (!(cfg.epsilon > 0.0)) {
    throw ConfigError("epsilon", "must be positive");
  }
  cfg.gamma = number(doc, "gamma", cfg.gamma);
  if (!(cfg.gamma >= 0.0)) {
    throw ConfigError("gamma", "must be nonnegative");
  }
  cfg.temperature = number(doc, "temperature", cfg.temperature);
  if (!(cfg.temperature > 0.0)) {
    throw ConfigError("temperature", "must be positive");
  }
  cfg.lattice_size = count(doc, "lattice_size", cfg.lattice_size);
  if (cfg.lattice_size < 4 || cfg.lattice_size % 2 != 0) {
    throw ConfigError("lattice_size", "must be even and at least 4");
  }
  cfg.ensemble_size = count(doc, "ensemble_size", cfg.ensemble_size);
  if (cfg.ensemble_size < 2) {
    throw ConfigError("ensemble_size", "must be at least 2");
  }
  if (doc.contains("dt") && !doc.at("dt").is_null()) {
    cfg.dt = number(doc, "dt", 0.0);
    if (!(*cfg.dt > 0.0)) {
      throw ConfigError("dt", "must be positive");
    }
    if (*cfg.dt * cfg.gamma * cfg.epsilon > 0.1) {
      throw ConfigError("dt", "dt * gamma * epsilon must not exceed 0.1");
    }
  }
  if (doc.contains("times")) {
    const json& t = doc.at("times");
    if (!t.is_array()) {
      throw ConfigError("times", "expected an array of numbers");
    }
    for (const auto& v : t) {
      if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() < 0.0) {
        throw ConfigError("times", "entries must be finite nonnegative numbers");
      }
      cfg.times.push_back(v.get<double>());
    }
    if (!std::is_sorted(cfg.times.begin(), cfg.times.end())) {
      throw ConfigError("times", "must be sorted");
    }
  }
  cfg.seed = count(doc, "seed", cfg.seed);
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string() || doc.at("output_dir").get<std::string>().empty()) {
      throw ConfigError("output_dir", "expected a nonempty string");
    }
    cfg.output_dir = doc.at("output_dir").get<std::string>();
  }
  cfg.threads = static_cast<unsigned>(count(doc, "threads", cfg.threads));
  cfg.walkers = count(doc, "walkers", cfg.walkers);
  if (cfg.walkers < 2) {
    throw ConfigError("walkers", "must be at least 2");
  }
  cfg.x_cells = count(doc, "x_cells", cfg.x_cells);
  if (cfg.x_cells < 2) {
    throw ConfigError("x_cells", "must be at least 2");
  }
  cfg.k_bands = count(doc, "k_bands", cfg.k_bands);
  if (cfg.k_bands < 1) {
    throw ConfigError("k_bands", "must be at least 1");
  }
  resolve_defaults(cfg);
  return cfg;
}

void resolve_defaults(RunConfig& cfg) {
  if (cfg.times.empty()) {
    cfg.times = default_times(cfg.experiment);
  }
  if (cfg.experiment == "superdiffusion") {
    if (cfg.times.size() < 3 || !(cfg.times.front() > 0.0)) {
      throw ConfigError("times", "superdiffusion needs at least three positive times");
    }
  }
  if (cfg.experiment == "kappa" && !(cfg.gamma > 0.0)) {
    throw ConfigError("gamma", "kappa needs gamma > 0");
  }
  if (cfg.experiment == "wigner_transport" && cfg.lattice_size / cfg.x_cells < cfg.k_bands) {
    throw ConfigError("k_bands", "each x cell must span at least k_bands sites");
  }
  if (uses_chain(cfg.experiment) && !cfg.dt) {
    cfg.dt = default_time_step(build_coupling(cfg.model), cfg.epsilon, cfg.gamma);
  }
}

json to_json(const RunConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["model"] = cfg.model_json;
  j["epsilon"] = cfg.epsilon;
  j["gamma"] = cfg.gamma;
  j["temperature"] = cfg.temperature;
  j["lattice_size"] = cfg.lattice_size;
  j["ensemble_size"] = cfg.ensemble_size;
  j["dt"] = cfg.dt ? json(*cfg.dt) : json(nullptr);
  j["times"] = cfg.times;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["threads"] = resolve_threads(cfg.threads);
  j["walkers"] = cfg.walkers;
  j["x_cells"] = cfg.x_cells;
  j["k_bands"] = cfg.k_bands;
  return j;
}

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> table = [] {
    std::vector<ExperimentInfo> t = {
        {"current_corr", "microscopic current autocorrelation against the kinetic prediction"},
        {"kappa", "kinetic conductivity, Green-Kubo integral and cutoff divergence"},
        {"kernel_checks", "analytic identities of the collision kernel and operator"},
        {"spectrum_relax", "relaxation of the energy spectrum against the homogeneous Boltzmann solution"},
        {"superdiffusion", "growth exponent of median |X(t)| for the phonon jump process"},
        {"wigner_transport", "x-resolved Wigner energy profile against the phonon Monte Carlo"},
    };
    std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return t;
  }();
  return table;
}

std::string version() { return PHONONKIN_VERSION_STRING; }

int run(const std::filesystem::path& config_path, const json& overrides, std::ostream& log, std::ostream& err) {
  json doc;
  RunConfig cfg;
  try {
    std::ifstream in(config_path);
    if (!in) {
      throw ConfigError("<file>", "cannot open " + config_path.string());
    }
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
    }
    if (doc.is_object()) {
      doc.update(overrides);
    }
    cfg = parse_config(doc);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const AssumptionViolation& e) {
    err << "model error: " << e.what() << '\n';
    return model_error;
  } catch (const DegenerateDispersion& e) {
    err << "model error: " << e.what() << '\n';
    return model_error;
  }

  try {
    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    DirectoryLock lock(dir);
    const std::string started = utc_now();
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult result = run_experiment(cfg, log);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json manifest;
    manifest["config"] = doc;
    manifest["overrides"] = overrides;
    manifest["resolved"] = to_json(cfg);
    manifest["version"] = version();
    manifest["started_utc"] = started;
    manifest["wall_clock_seconds"] = wall;
    json checks = json::array();
    for (const auto& c : result.checks) {
      checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    }
    manifest["checks"] = checks;
    manifest["passed"] = result.passed();
    manifest["metrics"] = result.metrics;
    manifest["artifacts"] = result.artifacts;
    std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';

    for (const auto& c : result.checks) {
      log << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.value << " (tolerance " << c.tolerance << ")\n";
    }
    return result.passed() ? ok : checks_failed;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const AssumptionViolation& e) {
    err << "model error: " << e.what() << '\n';
    return model_error;
  } catch (const DegenerateDispersion& e) {
    err << "model error: " << e.what() << '\n';
    return model_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return runtime_error;
  }
}

}  // namespace phononkin::runner
