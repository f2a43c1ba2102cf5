#include "runner.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

int main(int argc, char** argv) {
  namespace rn = phononkin::runner;
  CLI::App app{"Kinetic limit experiments for harmonic chains with momentum-exchange noise", "phononkin"};
  app.set_version_flag("--version", rn::version());
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  run->add_option("config", config, "path to the config file")->required();
  run->add_option("--seed", seed, "override the base seed");
  run->add_option("--out", out, "override the output directory");
  run->add_option("--threads", threads, "override the worker count (0 = all cores)");

  auto* list = app.add_subcommand("list", "list experiment ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : rn::config_error;
  }

  if (*list) {
    std::size_t width = 0;
    for (const auto& e : rn::list_experiments()) width = std::max(width, e.id.size());
    for (const auto& e : rn::list_experiments()) {
      std::cout << std::left << std::setw(static_cast<int>(width) + 2) << e.id << e.description << '\n';
    }
    return 0;
  }

  nlohmann::json overrides = nlohmann::json::object();
  if (seed) overrides["seed"] = *seed;
  if (out) overrides["output_dir"] = *out;
  if (threads) overrides["threads"] = *threads;
  return rn::run(config, overrides, std::cout, std::cerr);
}
