// Command-line front end: run/validate experiment configs, list presets.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ptrlab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ptrlab: processed time reversal laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "config file")->required();

  std::string validate_path;
  auto* validate =
      app.add_subcommand("validate", "parse and validate a config, do not run");
  validate->add_option("config", validate_path, "config file")->required();

  app.add_subcommand("presets", "list bundled medium presets");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("presets")) {
    ptrlab::print_presets(std::cout);
    return ptrlab::kOk;
  }
  if (app.got_subcommand("validate")) {
    const auto outcome = ptrlab::validate_config(validate_path);
    if (outcome.exit_code != ptrlab::kOk)
      std::cerr << "config error: " << outcome.message << '\n';
    else
      std::cout << "ok\n";
    return outcome.exit_code;
  }
  const auto outcome = ptrlab::run_experiment(config_path);
  if (outcome.exit_code != ptrlab::kOk) {
    std::cerr << (outcome.exit_code == ptrlab::kConfigError ? "config error: "
                                                            : "numerical failure: ")
              << outcome.message << '\n';
    return outcome.exit_code;
  }
  std::cout << "wrote " << outcome.manifest_path << '\n';
  for (const auto& f : outcome.outputs) std::cout << "  " << f << '\n';
  return ptrlab::kOk;
}
