#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "latoc/io.hpp"
#include "latoc/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.config_path, "path to the run configuration (JSON)")
      ->required();
  cmd->add_option("--output-dir", args.output_dir, "override the config's output directory");
  cmd->add_option("--seed", args.seed, "override the config's random seed");
}

int dispatch(const CommonArgs& args,
             int (*runner)(const latoc::RunConfig&, const std::string&,
                           std::optional<std::uint64_t>)) {
  std::string text;
  try {
    text = latoc::read_text_file(args.config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return latoc::kExitConfigError;
  }
  try {
    latoc::RunConfig config = latoc::parse_config(text);
    if (!args.output_dir.empty()) config.output_dir = args.output_dir;
    return runner(config, text, args.seed);
  } catch (const latoc::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return latoc::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal control of a BEC in optical lattices via lattice-phase pulses"};
  app.require_subcommand(1);

  CommonArgs propagate_args;
  CLI::App* propagate_cmd =
      app.add_subcommand("propagate", "evolve the initial state under a control pulse");
  add_common(propagate_cmd, propagate_args);

  CommonArgs optimize_args;
  CLI::App* optimize_cmd =
      app.add_subcommand("optimize", "synthesize a pulse driving initial to target");
  add_common(optimize_cmd, optimize_args);

  CommonArgs scan_args;
  CLI::App* scan_cmd =
      app.add_subcommand("beta-scan", "evaluate one pulse across a grid of mean-field strengths");
  add_common(scan_cmd, scan_args);

  std::string validate_path;
  CLI::App* validate_cmd = app.add_subcommand("validate-config", "check a configuration file");
  validate_cmd->add_option("config", validate_path, "path to the run configuration (JSON)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (propagate_cmd->parsed()) return dispatch(propagate_args, latoc::run_propagate);
  if (optimize_cmd->parsed()) return dispatch(optimize_args, latoc::run_optimize);
  if (scan_cmd->parsed()) return dispatch(scan_args, latoc::run_beta_scan);
  if (validate_cmd->parsed()) {
    try {
      latoc::parse_config(latoc::read_text_file(validate_path));
    } catch (const std::exception& e) {
      std::cerr << e.what() << '\n';
      return latoc::kExitConfigError;
    }
    std::cout << "config is valid\n";
    return latoc::kExitOk;
  }
  return latoc::kExitConfigError;
}
