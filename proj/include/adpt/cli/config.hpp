#pragma once

#include <filesystem>
#include <string>

#include "adpt/scenario.hpp"
#include "adpt/training.hpp"

namespace adpt::cli {

enum class Dimension {
  kAny,
  kDimensionless,
  kLength,
  kSpeed,
  kAcceleration,
  kTime,
  kFrequency,
  kMass,
  kTorque,
  kAngle,
  kAngularRate,
};

/// "250 mm", "1 kg", "5 N.m", "10 ms", "180 deg/s" or a bare number (taken
/// as SI). Returns the SI value. Throws ConfigError on unknown units or a
/// unit of the wrong dimension.
double parse_quantity(const std::string& text, Dimension expected);

struct TrainSetup {
  std::string name;
  PlantSpec plant;
  TrainingConfig training;
};

struct ScenarioSetup {
  ScenarioConfig scenario;
  std::string weights_path;  // resolved against the config directory; may be empty
};

struct SuiteSetup {
  SuiteConfig suite;
  std::string weights_path;
  bool write_trajectories = false;
};

// Parsers take the JSON text and the directory relative paths resolve
// against. All throw ConfigError with the offending key in the message.
TrainSetup parse_train_config(const std::string& text,
                              const std::filesystem::path& base_dir);
ScenarioSetup parse_scenario_config(const std::string& text,
                                    const std::filesystem::path& base_dir);
SuiteSetup parse_suite_config(const std::string& text,
                              const std::filesystem::path& base_dir);

/// Whole file as bytes. Throws ConfigError when unreadable.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace adpt::cli
