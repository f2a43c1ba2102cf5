#include "runner.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace phononkin;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path root;

  explicit Workspace(const std::string& name) : root(fs::temp_directory_path() / ("phononkin_unit_" + name)) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }

  fs::path write(const std::string& file, const nlohmann::json& doc) const {
    const fs::path path = root / file;
    std::ofstream(path) << doc.dump(2);
    return path;
  }
};

struct Outcome {
  int code;
  std::string err;
};

Outcome run_config(const fs::path& path, const nlohmann::json& overrides = nlohmann::json::object()) {
  std::ostringstream log, err;
  const int code = runner::run(path, overrides, log, err);
  return {code, err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const nlohmann::json nn_model = {{"type", "nearest_neighbor"}, {"omega0_sq", 1.0}, {"alpha1", 1.0}};

}  // namespace

TEST_CASE("config validation") {
  Workspace ws("config");
  nlohmann::json doc = {{"experiment", "kernel_checks"}, {"model", nn_model}, {"gamma", -1.0},
                        {"output_dir", (ws.root / "out").string()}};
  auto o = run_config(ws.write("neg.json", doc));
  CHECK(o.code == runner::config_error);
  CHECK(o.err.find("gamma") != std::string::npos);

  doc.erase("gamma");
  doc["gama"] = 1.0;
  o = run_config(ws.write("typo.json", doc));
  CHECK(o.code == runner::config_error);
  CHECK(o.err.find("gama") != std::string::npos);

  doc.erase("gama");
  doc["experiment"] = "nonexistent";
  CHECK(run_config(ws.write("exp.json", doc)).code == runner::config_error);

  CHECK(run_config(ws.root / "missing.json").code == runner::config_error);

  doc["experiment"] = "kernel_checks";
  doc["model"] = {{"type", "coefficients"}, {"alpha", {{"0", 2.0}, {"1", -0.5}, {"-1", -0.4}}}};
  o = run_config(ws.write("a2.json", doc));
  CHECK(o.code == runner::model_error);
}

TEST_CASE("defaults are resolved") {
  auto cfg = runner::parse_config({{"experiment", "spectrum_relax"}, {"model", nn_model}});
  CHECK(cfg.epsilon == 0.1);
  CHECK(cfg.lattice_size == 512);
  runner::resolve_defaults(cfg);
  CHECK(cfg.dt.has_value());
  CHECK(cfg.times == std::vector<double>{0.0, 0.5, 1.0, 2.0});
  const auto j = runner::to_json(cfg);
  CHECK(j.at("seed") == 1);
  CHECK(j.at("experiment") == "spectrum_relax");
}

TEST_CASE("experiment listing") {
  const auto& list = runner::list_experiments();
  REQUIRE(list.size() == 6);
  for (std::size_t i = 1; i < list.size(); ++i) CHECK(list[i - 1].id < list[i].id);
  bool found = false;
  for (const auto& e : list) found = found || e.id == "superdiffusion";
  CHECK(found);
}

TEST_CASE("kernel checks run end to end") {
  Workspace ws("kernel");
  const nlohmann::json doc = {{"experiment", "kernel_checks"}, {"model", nn_model},
                              {"output_dir", (ws.root / "out").string()}};
  REQUIRE(run_config(ws.write("k.json", doc)).code == runner::ok);
  const auto manifest = nlohmann::json::parse(slurp(ws.root / "out" / "manifest.json"));
  CHECK(manifest.at("passed") == true);
  CHECK(manifest.at("config") == doc);
  bool has_rate = false;
  for (const auto& c : manifest.at("checks")) has_rate = has_rate || c.at("name") == "rate_identity";
  CHECK(has_rate);
  CHECK(fs::exists(ws.root / "out" / "kernel_checks.csv"));
  CHECK_FALSE(fs::exists(ws.root / "out" / ".phononkin.lock"));
}

TEST_CASE("output directory lock") {
  Workspace ws("lock");
  fs::create_directories(ws.root / "out");
  std::ofstream(ws.root / "out" / ".phononkin.lock") << "busy";
  const nlohmann::json doc = {{"experiment", "kernel_checks"}, {"model", nn_model},
                              {"output_dir", (ws.root / "out").string()}};
  CHECK(run_config(ws.write("k.json", doc)).code == runner::runtime_error);
}

TEST_CASE("runs are reproducible across thread counts") {
  Workspace ws("repro");
  const nlohmann::json doc = {{"experiment", "spectrum_relax"}, {"model", nn_model}, {"lattice_size", 32},
                              {"ensemble_size", 8}, {"times", {0.0, 0.2}}, {"seed", 9}};
  const auto path = ws.write("s.json", doc);
  REQUIRE(run_config(path, {{"output_dir", (ws.root / "a").string()}, {"threads", 1}}).code == runner::ok);
  REQUIRE(run_config(path, {{"output_dir", (ws.root / "b").string()}, {"threads", 3}}).code == runner::ok);
  for (const char* f : {"E_eps_t.csv", "boltzmann_t.csv"}) {
    const auto a = slurp(ws.root / "a" / f);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(ws.root / "b" / f));
  }
  const auto m = nlohmann::json::parse(slurp(ws.root / "a" / "manifest.json"));
  CHECK(m.at("overrides").at("threads") == 1);
  CHECK(m.at("resolved").at("seed") == 9);
}
