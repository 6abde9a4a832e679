#include <CLI11.hpp>
#include <iostream>

#include "divform/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"divform: spectral analysis of divergence-form operators"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int seed = -1;
  bool no_cache = false;

  const std::vector<std::string> names = {"assemble", "spectrum", "affiliate",
                                          "liouville", "asympt",   "heatbound",
                                          "manifold", "report"};
  for (const auto& name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run-configuration file")->required();
    sub->add_option("--out", out_dir, "output directory override");
    sub->add_option("--seed", seed, "RNG seed override");
    sub->add_flag("--no-cache", no_cache, "disable the eigendecomposition cache");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    divform::RunConfig cfg = divform::parse_config_file(config_path);
    std::string requested = app.get_subcommands().front()->get_name();
    if (requested != cfg.command_name) {
      std::cerr << "config command '" << cfg.command_name
                << "' does not match subcommand '" << requested << "'\n";
      return 2;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<unsigned>(seed);
    if (no_cache) cfg.cache = false;

    divform::ResultRecord rec = divform::run(cfg);
    std::cout << rec.command << ": " << (rec.passed ? "pass" : "FAIL") << "\n";
    for (const auto& v : rec.verdicts) std::cout << "  " << v << "\n";
    for (const auto& p : rec.csv_paths) std::cout << "  wrote " << p << "\n";
    return rec.passed ? 0 : 1;
  } catch (const divform::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
