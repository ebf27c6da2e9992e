#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace adpt::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfigError = 2,
  kExitNotConverged = 3,
  kExitRunAborted = 4,
};

struct CommandOptions {
  std::string config;
  std::string weights;  // overrides the config's weight file
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

// Each command parses and validates everything before creating `out`, and
// writes only inside it, finishing with manifest.json. Progress goes to
// `log`. The return value is an ExitCode.

/// weights.txt (averaged), training_report.json, convergence.csv.
int cmd_train(const CommandOptions& options, std::ostream& log);
/// trajectory.csv, metrics.csv, summary.json.
int cmd_simulate(const CommandOptions& options, std::ostream& log);
/// suite_metrics.csv, tables.txt, optional trajectories/*.csv.
int cmd_compare(const CommandOptions& options, std::ostream& log);

std::string sha256_hex(const std::string& bytes);

}  // namespace adpt::cli
