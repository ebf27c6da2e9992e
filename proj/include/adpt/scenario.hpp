#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adpt/controllers.hpp"
#include "adpt/delta_robot.hpp"
#include "adpt/simulation.hpp"
#include "adpt/training.hpp"

namespace adpt {

enum class PlantKind { kScalar, kDoubleIntegrator, kDelta };

struct PlantSpec {
  PlantKind kind = PlantKind::kDelta;
  double a = 1.0;        // scalar plant only
  double b = 1.0;        // scalar plant only
  double payload = 0.0;  // Delta only; affects the simulated plant, never the model
};

enum class ControllerKind { kAdp, kCt, kSmc, kDiscountedLqt };

struct ControllerSpec {
  ControllerKind kind = ControllerKind::kAdp;
  std::string weights_path;  // ADP only
  CtGains ct;
  SmcGains smc;
  double lqt_q = 1.0;
  double lqt_rho = 0.0;
};

enum class ReferenceKind { kConstant, kRamp, kSine, kCircle, kSteps };

struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::kCircle;
  Vector value;                  // constant / ramp start / sine amplitude
  Vector rate;                   // ramp
  double omega = 1.0;            // sine
  double phase = 0.0;            // sine
  double radius = 0.25;          // circle, m
  double circle_omega = 3.14159265358979323846;  // circle, rad/s
  double height = 0.5;           // circle z, m
  std::vector<Vector> setpoints; // steps
  double dwell = 5.0;            // steps, s
};

struct ScenarioConfig {
  std::string name;
  PlantSpec plant;
  ControllerSpec controller;
  ReferenceSpec reference;
  double t_final = 10.0;
  double control_rate = 500.0;
  int substeps = 4;
  Vector initial_state;
  double sat_limit = 5.0;  // N m; infinity disables clipping
  TimeWindow window;
  double cost_horizon = 5.0;
  CostWeights cost;
};

/// Q = D^T D with D = [20 I, I], R = 0.001 I.
CostWeights delta_cost_weights();
/// Home pose [0, 0, 0.5] m at rest.
Vector delta_home_state();
/// Training box used for the Delta: references across the circle and step
/// workspace, errors of a few centimetres and tenths of m/s.
RegionOfInterest delta_training_roi();
TrainingConfig delta_training_config();

/// Plant the simulator integrates (payload included).
CanonicalPlant build_plant(const PlantSpec& spec);
/// Plant the controller is designed on (always nominal).
CanonicalPlant build_model_plant(const PlantSpec& spec);
int plant_order(const PlantSpec& spec);
int plant_outputs(const PlantSpec& spec);

ReferenceSignal build_reference(const ReferenceSpec& spec, int order, int outputs);

/// `weights` is required for ADP controllers.
std::unique_ptr<Controller> build_controller(const ScenarioConfig& scenario,
                                             const ValueFunction* weights);

/// Checks dimensions and required fields. Throws ConfigError.
void validate(const ScenarioConfig& scenario);

struct ScenarioResult {
  ScenarioConfig config;
  TrajectoryLog log;
  std::optional<Metrics> metrics;  // empty when the run aborted
  std::string status;              // "ok" or the failure reason
};

ScenarioResult run_scenario(const ScenarioConfig& scenario,
                            const ValueFunction* weights);

// Presets for the comparison experiments.
ScenarioConfig circle_scenario(ControllerKind controller, double payload);
ScenarioConfig step_scenario(ControllerKind controller, double payload);
/// Scalar x_dot = x + u, r = 2, x0 = 1.
ScenarioConfig counterexample_scenario(ControllerKind controller);

std::string to_string(ControllerKind kind);
std::string to_string(PlantKind kind);

struct SuiteConfig {
  std::vector<ControllerKind> controllers = {ControllerKind::kCt, ControllerKind::kAdp,
                                             ControllerKind::kSmc};
  std::vector<std::string> scenarios = {"circle", "step"};
  std::vector<double> payloads = {0.0, 1.0};
  CtGains ct;
  SmcGains smc;
  double t_final = 10.0;
};

/// Cross product controllers x scenarios x payloads, in that nesting order.
std::vector<ScenarioConfig> expand_suite(const SuiteConfig& suite);

/// Runs every scenario; failures are recorded per entry and the suite
/// continues. Order of results matches `scenarios` for any `jobs`.
std::vector<ScenarioResult> scenario_suite(const std::vector<ScenarioConfig>& scenarios,
                                           const ValueFunction* weights, int jobs = 1);

/// One row per run: controller, scenario, payload, status, mean/std per axis,
/// total cost, max |u|, saturated ticks.
void write_suite_csv(std::ostream& os, const std::vector<ScenarioResult>& results);
/// Aligned text tables: mean/std of steady-state |e| per (scenario, payload)
/// and total cost per scenario.
void write_suite_tables(std::ostream& os, const std::vector<ScenarioResult>& results);

}  // namespace adpt
