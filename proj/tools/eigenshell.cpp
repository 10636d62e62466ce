#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "eigenshell/cli/config.hpp"
#include "eigenshell/cli/experiments.hpp"

namespace cli = eigenshell::cli;

int main(int argc, char** argv) {
  CLI::App app{"eigenshell: classifier ratios over energy shells for quantum model systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  bool no_cache = false;
  unsigned threads = 1;

  for (const auto& name : cli::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "INI configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed");
    sub->add_flag("--no-cache", no_cache, "ignore and do not write the spectrum cache");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);

  const std::string subcommand = app.get_subcommands().front()->get_name();
  try {
    auto config = cli::ExperimentConfig::from_file(config_path);
    if (config.name() != subcommand) {
      throw cli::ConfigError("experiment.name", "config is for '" + config.name() + "' but subcommand is '" +
                                                    subcommand + "'");
    }
    cli::RunOptions options;
    options.out_dir = out_dir;
    options.seed = seed;
    options.use_cache = !no_cache;
    options.threads = threads;
    options.log = &std::cerr;
    const auto result = cli::run_experiment(config, options);
    if (result.cache_hit) std::cout << "cache hit\n";
    for (const auto& file : result.files) std::cout << file.string() << '\n';
  } catch (const cli::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
