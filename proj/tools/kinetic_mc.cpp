#include <CLI11.hpp>
#include <iostream>

#include "kinetic/config.hpp"
#include "kinetic/errors.hpp"
#include "kinetic/experiments.hpp"

int main(int argc, char** argv) {
  using namespace kinetic;
  CLI::App app{"Monte Carlo runner for kinetic interaction models"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  unsigned workers = 1;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--workers", workers, "worker threads; results do not depend on it")->check(CLI::Range(1u, 1024u));
  run->add_option("--out", out_dir, "output directory (overrides out_dir)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "parse and validate a config file");
  validate->add_option("config", validate_path, "config file")->required();

  auto* list = app.add_subcommand("list-experiments", "print the canned experiment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  if (list->parsed()) {
    for (const auto& n : experiment_names()) std::cout << n << '\n';
    return kExitOk;
  }

  const std::string& path = run->parsed() ? config_path : validate_path;
  RunConfig cfg;
  try {
    cfg = load_config(path);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (validate->parsed()) {
    std::cout << "ok: " << cfg.experiment << " (seed " << cfg.seed << ")\n";
    return kExitOk;
  }

  const auto outcome = run_experiment(cfg, workers, out_dir.empty() ? cfg.out_dir : std::filesystem::path(out_dir), std::cerr);
  if (outcome.exit_code != kExitOk) {
    std::cerr << "error: " << outcome.message << '\n';
  } else {
    std::cout << "wrote " << outcome.out_dir.string() << '\n';
  }
  return outcome.exit_code;
}
