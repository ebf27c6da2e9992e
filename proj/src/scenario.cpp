#include "adpt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "adpt/errors.hpp"
#include "adpt/plants.hpp"
#include "adpt/references.hpp"
#include "parallel.hpp"

namespace adpt {

CostWeights delta_cost_weights() {
  Matrix D = Matrix::Zero(3, 6);
  D.leftCols(3) = 20.0 * Matrix::Identity(3, 3);
  D.rightCols(3) = Matrix::Identity(3, 3);
  return CostWeights::make(D.transpose() * D, 0.001 * Matrix::Identity(3, 3));
}

Vector delta_home_state() {
  Vector X = Vector::Zero(6);
  X(2) = 0.5;
  return X;
}

RegionOfInterest delta_training_roi() {
  RegionOfInterest roi;
  roi.reference_lower.resize(6);
  roi.reference_upper.resize(6);
  roi.reference_lower << -0.18, -0.18, 0.42, -0.8, -0.8, -0.3;
  roi.reference_upper << 0.18, 0.18, 0.56, 0.8, 0.8, 0.3;
  roi.error_lower.resize(6);
  roi.error_upper.resize(6);
  roi.error_lower << -0.02, -0.02, -0.02, -0.2, -0.2, -0.2;
  roi.error_upper = -roi.error_lower;
  return roi;
}

TrainingConfig delta_training_config() {
  TrainingConfig c;
  c.cost = delta_cost_weights();
  c.roi = delta_training_roi();
  c.delta_T = 0.01;
  c.n_samples = 500;
  c.n_runs = 10;
  c.threshold = 1e-6;
  c.max_iterations = 2000;
  return c;
}

int plant_order(const PlantSpec& spec) {
  switch (spec.kind) {
    case PlantKind::kScalar: return 1;
    case PlantKind::kDoubleIntegrator: return 2;
    case PlantKind::kDelta: return 2;
  }
  return 0;
}

int plant_outputs(const PlantSpec& spec) {
  return spec.kind == PlantKind::kDelta ? 3 : 1;
}

CanonicalPlant build_plant(const PlantSpec& spec) {
  switch (spec.kind) {
    case PlantKind::kScalar: return scalar_linear_plant(spec.a, spec.b);
    case PlantKind::kDoubleIntegrator: return double_integrator_plant();
    case PlantKind::kDelta:
      return DeltaModel().with_payload(spec.payload).as_canonical_plant();
  }
  throw ConfigError("unknown plant kind");
}

CanonicalPlant build_model_plant(const PlantSpec& spec) {
  PlantSpec nominal = spec;
  nominal.payload = 0.0;
  return build_plant(nominal);
}

ReferenceSignal build_reference(const ReferenceSpec& spec, int order, int outputs) {
  const auto check_len = [outputs](const Vector& v, const char* what) {
    if (v.size() != outputs) {
      throw ConfigError(std::string("reference ") + what + " must have " +
                        std::to_string(outputs) + " entries");
    }
  };
  switch (spec.kind) {
    case ReferenceKind::kConstant:
      check_len(spec.value, "value");
      return constant_reference(order, spec.value);
    case ReferenceKind::kRamp:
      check_len(spec.value, "start");
      check_len(spec.rate, "rate");
      return ramp_reference(order, spec.value, spec.rate);
    case ReferenceKind::kSine:
      check_len(spec.value, "amplitude");
      return sine_reference(order, spec.value, spec.omega, spec.phase);
    case ReferenceKind::kCircle:
      if (order != 2 || outputs != 3) {
        throw ConfigError("circle reference needs a 3-output second-order plant");
      }
      return circle_reference(spec.radius, spec.circle_omega, spec.height);
    case ReferenceKind::kSteps:
      for (const auto& p : spec.setpoints) check_len(p, "setpoint");
      return step_sequence_reference(order, spec.setpoints, spec.dwell);
  }
  throw ConfigError("unknown reference kind");
}

void validate(const ScenarioConfig& s) {
  const int order = plant_order(s.plant);
  const int m = plant_outputs(s.plant);
  if (s.initial_state.size() != order * m) {
    throw ConfigError("initial_state must have " + std::to_string(order * m) +
                      " entries");
  }
  if (!(s.t_final > 0) || !(s.control_rate > 0) || s.substeps < 1) {
    throw ConfigError("t_final, control_rate and substeps must be positive");
  }
  if (!(s.sat_limit > 0)) throw ConfigError("sat_limit must be positive");
  if (s.cost.Q.rows() != order * m || s.cost.R.rows() != m) {
    throw ConfigError("cost weights do not match the plant dimensions");
  }
  if (s.window.empty()) throw ConfigError("steady-state window is empty");
  if (!(s.cost_horizon > 0) ||
      s.cost_horizon > s.t_final - 1.0 / s.control_rate + 1e-9) {
    throw ConfigError("cost_horizon must be positive and end by the last control tick");
  }
  const bool delta = s.plant.kind == PlantKind::kDelta;
  switch (s.controller.kind) {
    case ControllerKind::kCt:
    case ControllerKind::kSmc:
      if (!delta) throw ConfigError("CT and SMC controllers need the Delta plant");
      break;
    case ControllerKind::kDiscountedLqt:
      if (s.plant.kind != PlantKind::kScalar) {
        throw ConfigError("discounted LQT controller needs the scalar plant");
      }
      break;
    case ControllerKind::kAdp:
      break;
  }
  build_reference(s.reference, order, m);
}

std::unique_ptr<Controller> build_controller(const ScenarioConfig& s,
                                             const ValueFunction* weights) {
  const ReferenceSignal ref =
      build_reference(s.reference, plant_order(s.plant), plant_outputs(s.plant));
  switch (s.controller.kind) {
    case ControllerKind::kAdp:
      if (weights == nullptr) throw ConfigError("ADP controller needs weights");
      return std::make_unique<AdpController>(*weights, build_model_plant(s.plant),
                                             s.cost.R, ref, s.sat_limit);
    case ControllerKind::kCt:
      return std::make_unique<CtController>(s.controller.ct, DeltaModel(), ref,
                                            s.sat_limit);
    case ControllerKind::kSmc:
      return std::make_unique<SmcController>(s.controller.smc, DeltaModel(), ref,
                                             s.sat_limit);
    case ControllerKind::kDiscountedLqt: {
      ScalarLqtProblem p;
      p.a = s.plant.a;
      p.b = s.plant.b;
      p.q = s.controller.lqt_q;
      p.r_u = s.cost.R(0, 0);
      p.rho = s.controller.lqt_rho;
      return std::make_unique<DiscountedLqtController>(p, ref, s.sat_limit);
    }
  }
  throw ConfigError("unknown controller kind");
}

ScenarioResult run_scenario(const ScenarioConfig& s, const ValueFunction* weights) {
  validate(s);
  ScenarioResult result;
  result.config = s;
  const CanonicalPlant plant = build_plant(s.plant);
  const auto controller = build_controller(s, weights);
  const ReferenceSignal ref =
      build_reference(s.reference, plant_order(s.plant), plant_outputs(s.plant));
  SimulationOptions opts;
  opts.t_final = s.t_final;
  opts.control_rate = s.control_rate;
  opts.substeps = s.substeps;
  opts.cost = s.cost;
  result.log = run_closed_loop(plant, *controller, ref, s.initial_state, opts);
  if (result.log.aborted) {
    result.status = result.log.failure;
  } else {
    result.metrics = compute_metrics(result.log, s.window, s.cost_horizon);
    result.status = "ok";
  }
  return result;
}

namespace {

ScenarioConfig delta_base(ControllerKind controller, double payload) {
  ScenarioConfig s;
  s.plant.kind = PlantKind::kDelta;
  s.plant.payload = payload;
  s.controller.kind = controller;
  s.initial_state = delta_home_state();
  s.cost = delta_cost_weights();
  s.sat_limit = 5.0;
  return s;
}

}  // namespace

ScenarioConfig circle_scenario(ControllerKind controller, double payload) {
  ScenarioConfig s = delta_base(controller, payload);
  s.name = "circle";
  s.reference.kind = ReferenceKind::kCircle;
  s.t_final = 10.0;
  s.window = {{2.0, s.t_final}};
  return s;
}

ScenarioConfig step_scenario(ControllerKind controller, double payload) {
  ScenarioConfig s = delta_base(controller, payload);
  s.name = "step";
  s.reference.kind = ReferenceKind::kSteps;
  s.reference.setpoints = {Eigen::Vector3d(0.1, 0.1, 0.45),
                           Eigen::Vector3d(-0.1, -0.1, 0.6)};
  s.reference.dwell = 5.0;
  s.t_final = 10.0;
  s.window = {{2.0, 5.0}, {7.0, 10.0}};
  return s;
}

ScenarioConfig counterexample_scenario(ControllerKind controller) {
  ScenarioConfig s;
  s.name = "counterexample";
  s.plant.kind = PlantKind::kScalar;
  s.plant.a = 1.0;
  s.plant.b = 1.0;
  s.controller.kind = controller;
  s.controller.lqt_q = 1.0;
  s.controller.lqt_rho = 0.0;
  s.reference.kind = ReferenceKind::kConstant;
  s.reference.value = Vector::Constant(1, 2.0);
  s.initial_state = Vector::Constant(1, 1.0);
  s.t_final = 10.0;
  s.sat_limit = kNoSaturation;
  s.window = {{5.0, 10.0}};
  s.cost = CostWeights::make(Matrix::Identity(1, 1), Matrix::Identity(1, 1));
  return s;
}

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kAdp: return "adp";
    case ControllerKind::kCt: return "ct";
    case ControllerKind::kSmc: return "smc";
    case ControllerKind::kDiscountedLqt: return "discounted_lqt";
  }
  return "?";
}

std::string to_string(PlantKind kind) {
  switch (kind) {
    case PlantKind::kScalar: return "scalar";
    case PlantKind::kDoubleIntegrator: return "double_integrator";
    case PlantKind::kDelta: return "delta";
  }
  return "?";
}

std::vector<ScenarioConfig> expand_suite(const SuiteConfig& suite) {
  std::vector<ScenarioConfig> out;
  for (auto c : suite.controllers) {
    for (const auto& name : suite.scenarios) {
      for (double payload : suite.payloads) {
        ScenarioConfig s;
        if (name == "circle") {
          s = circle_scenario(c, payload);
        } else if (name == "step") {
          s = step_scenario(c, payload);
        } else {
          throw ConfigError("unknown suite scenario '" + name + "'");
        }
        s.controller.ct = suite.ct;
        s.controller.smc = suite.smc;
        if (suite.t_final != s.t_final) {
          s.t_final = suite.t_final;
          for (auto& w : s.window) w.second = std::min(w.second, s.t_final);
        }
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::vector<ScenarioResult> scenario_suite(const std::vector<ScenarioConfig>& scenarios,
                                           const ValueFunction* weights, int jobs) {
  std::vector<ScenarioResult> results(scenarios.size());
  detail::parallel_for(static_cast<int>(scenarios.size()), jobs, [&](int i) {
    const auto& s = scenarios[static_cast<std::size_t>(i)];
    auto& r = results[static_cast<std::size_t>(i)];
    try {
      r = run_scenario(s, weights);
    } catch (const std::exception& e) {
      r.config = s;
      r.status = std::string("failed: ") + e.what();
    }
  });
  return results;
}

namespace {

std::string payload_label(double payload) {
  std::ostringstream os;
  os << payload << "kg";
  return os.str();
}

}  // namespace

void write_suite_csv(std::ostream& os, const std::vector<ScenarioResult>& results) {
  os << "# adpt-suite-metrics v1\n";
  os << "controller,scenario,payload_kg,status,mean_abs_e_x_mm,mean_abs_e_y_mm,"
        "mean_abs_e_z_mm,std_abs_e_x_mm,std_abs_e_y_mm,std_abs_e_z_mm,"
        "total_cost,max_abs_u,saturated_ticks,failure\n";
  os << std::setprecision(10);
  for (const auto& r : results) {
    os << to_string(r.config.controller.kind) << ',' << r.config.name << ','
       << r.config.plant.payload << ',' << (r.status == "ok" ? "ok" : "failed");
    if (r.metrics) {
      const auto& m = *r.metrics;
      for (double v : m.mean_abs_error_mm) os << ',' << v;
      for (double v : m.std_abs_error_mm) os << ',' << v;
      os << ',' << m.total_cost << ',' << m.max_abs_control << ','
         << r.log.saturated_ticks() << ',';
    } else {
      std::string reason = r.status;
      std::replace(reason.begin(), reason.end(), ',', ';');
      std::replace(reason.begin(), reason.end(), '\n', ' ');
      os << ",,,,,,,,,," << reason;
    }
    os << '\n';
  }
}

void write_suite_tables(std::ostream& os, const std::vector<ScenarioResult>& results) {
  // Group by (scenario, payload) keeping first-seen order.
  std::vector<std::pair<std::string, double>> groups;
  for (const auto& r : results) {
    const std::pair<std::string, double> key{r.config.name, r.config.plant.payload};
    if (std::find(groups.begin(), groups.end(), key) == groups.end()) {
      groups.push_back(key);
    }
  }
  os << std::fixed << std::setprecision(4);
  for (const auto& [scenario, payload] : groups) {
    os << "Steady-state |e| (mm), scenario " << scenario << ", payload "
       << payload_label(payload) << '\n';
    os << std::left << std::setw(12) << "" << std::right << std::setw(12) << "x"
       << std::setw(12) << "y" << std::setw(12) << "z" << '\n';
    for (const char* stat : {"mean", "std"}) {
      os << stat << '\n';
      for (const auto& r : results) {
        if (r.config.name != scenario || r.config.plant.payload != payload) continue;
        os << std::left << std::setw(12) << to_string(r.config.controller.kind)
           << std::right;
        if (r.metrics) {
          const auto& v = std::string(stat) == "mean" ? r.metrics->mean_abs_error_mm
                                                     : r.metrics->std_abs_error_mm;
          for (double x : v) os << std::setw(12) << x;
        } else {
          os << "  failed: " << r.status;
        }
        os << '\n';
      }
    }
    os << '\n';
  }
  std::vector<std::string> scenarios;
  for (const auto& g : groups) {
    if (std::find(scenarios.begin(), scenarios.end(), g.first) == scenarios.end()) {
      scenarios.push_back(g.first);
    }
  }
  for (const auto& scenario : scenarios) {
    os << "Total cost over the cost horizon, scenario " << scenario << '\n';
    std::vector<ControllerKind> controllers;
    for (const auto& r : results) {
      if (r.config.name == scenario &&
          std::find(controllers.begin(), controllers.end(), r.config.controller.kind) ==
              controllers.end()) {
        controllers.push_back(r.config.controller.kind);
      }
    }
    os << std::left << std::setw(12) << "" << std::right;
    for (auto c : controllers) os << std::setw(14) << to_string(c);
    os << '\n';
    for (const auto& [name, payload] : groups) {
      if (name != scenario) continue;
      os << std::left << std::setw(12) << payload_label(payload) << std::right;
      for (auto c : controllers) {
        auto it = std::find_if(results.begin(), results.end(), [&](const ScenarioResult& r) {
          return r.config.name == scenario && r.config.plant.payload == payload &&
                 r.config.controller.kind == c;
        });
        if (it != results.end() && it->metrics) {
          os << std::setw(14) << it->metrics->total_cost;
        } else {
          os << std::setw(14) << "failed";
        }
      }
      os << '\n';
    }
    os << '\n';
  }
}

}  // namespace adpt
