#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "adpt/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace adpt::cli;
  CLI::App app{"ADP near-optimal tracking: training, simulation and controller comparison"};
  app.require_subcommand(1);

  CommandOptions options;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", options.config, "JSON config file")->required();
    cmd->add_option("--out", options.out, "output directory")->required();
    cmd->add_option("--weights", options.weights, "weight file (overrides the config)");
    cmd->add_option("--seed", seed, "random seed (overrides the config)");
    cmd->add_option("--jobs", options.jobs, "worker threads")->check(CLI::PositiveNumber);
  };
  auto* train = app.add_subcommand("train", "train value-function weights");
  auto* simulate = app.add_subcommand("simulate", "run one closed-loop scenario");
  auto* compare = app.add_subcommand("compare", "run the controller comparison suite");
  for (auto* cmd : {train, simulate, compare}) add_common(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }
  for (auto* cmd : {train, simulate, compare}) {
    if (cmd->count("--seed") > 0) options.seed = seed;
  }

  if (*train) return cmd_train(options, std::cerr);
  if (*simulate) return cmd_simulate(options, std::cerr);
  return cmd_compare(options, std::cerr);
}
