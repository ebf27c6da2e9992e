#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "adpt/cli/commands.hpp"
#include "adpt/cli/config.hpp"
#include "adpt/errors.hpp"

using namespace adpt;
using namespace adpt::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("adpt_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
}

const char* kScalarTrain = R"({
  "name": "s",
  "plant": {"kind": "scalar", "a": 1},
  "cost": {"Q": [[1]], "R": [[1]]},
  "roi": {"error_lower": [-1], "error_upper": [1],
          "reference_lower": [-2], "reference_upper": [2]},
  "training": {"n_samples": 100, "n_runs": 2, "holdout_samples": 50}
})";

}  // namespace

TEST(Quantity, UnitsConvertToSi) {
  EXPECT_DOUBLE_EQ(parse_quantity("250 mm", Dimension::kLength), 0.25);
  EXPECT_DOUBLE_EQ(parse_quantity("25cm", Dimension::kLength), 0.25);
  EXPECT_DOUBLE_EQ(parse_quantity("1 kg", Dimension::kMass), 1.0);
  EXPECT_DOUBLE_EQ(parse_quantity("500 g", Dimension::kMass), 0.5);
  EXPECT_DOUBLE_EQ(parse_quantity("5 N.m", Dimension::kTorque), 5.0);
  EXPECT_DOUBLE_EQ(parse_quantity("10 ms", Dimension::kTime), 0.01);
  EXPECT_DOUBLE_EQ(parse_quantity("500 Hz", Dimension::kFrequency), 500.0);
  EXPECT_DOUBLE_EQ(parse_quantity("180 deg", Dimension::kAngle), std::numbers::pi);
  EXPECT_DOUBLE_EQ(parse_quantity("20 mm/s", Dimension::kSpeed), 0.02);
  EXPECT_DOUBLE_EQ(parse_quantity("-3.5", Dimension::kLength), -3.5);
  EXPECT_DOUBLE_EQ(parse_quantity("2 mm", Dimension::kAny), 0.002);
}

TEST(Quantity, RejectsBadInput) {
  EXPECT_THROW(parse_quantity("5 furlongs", Dimension::kLength), ConfigError);
  EXPECT_THROW(parse_quantity("5 kg", Dimension::kLength), ConfigError);
  EXPECT_THROW(parse_quantity("mm", Dimension::kLength), ConfigError);
  EXPECT_THROW(parse_quantity("5 mm extra", Dimension::kLength), ConfigError);
  EXPECT_THROW(parse_quantity("5 mm", Dimension::kDimensionless), ConfigError);
}

TEST(TrainConfig, ParsesScalarAndDeltaPresets) {
  const TrainSetup s = parse_train_config(kScalarTrain, ".");
  EXPECT_EQ(s.plant.kind, PlantKind::kScalar);
  EXPECT_EQ(s.training.n_runs, 2);
  EXPECT_EQ(s.training.roi.reference_upper(0), 2.0);
  const TrainSetup d =
      parse_train_config(R"({"plant": {"kind": "delta"}, "training": {"n_runs": 3}})", ".");
  EXPECT_EQ(d.training.n_runs, 3);
  EXPECT_EQ(d.training.cost.Q.rows(), 6);
  EXPECT_EQ(d.training.roi.error_lower.size(), 6);
}

TEST(TrainConfig, ErrorsNameTheKey) {
  auto message = [](const std::string& text) {
    try {
      parse_train_config(text, ".");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("{").find("malformed"), std::string::npos);
  EXPECT_NE(message(R"({"plant": {"kind": "scalar"}, "bogus": 1})").find("bogus"),
            std::string::npos);
  EXPECT_NE(message(R"({"plant": {"kind": "robot"}})").find("plant.kind"), std::string::npos);
  EXPECT_NE(message(R"({"plant": {"kind": "delta"}, "training": {"n_runs": 1.5}})")
                .find("training.n_runs"),
            std::string::npos);
  EXPECT_NE(message(R"({"plant": {"kind": "delta"}, "training": {"delta_T": "3 mm"}})")
                .find("training.delta_T"),
            std::string::npos);
  EXPECT_NE(message(R"({"plant": {"kind": "scalar"}})").find("roi"), std::string::npos);
}

TEST(ScenarioConfig, PresetWithMillimetreOverrides) {
  const auto setup = parse_scenario_config(R"({
    "preset": "circle",
    "plant": {"kind": "delta", "payload": "1 kg"},
    "controller": {"kind": "ct", "kp": 400, "kd": 40},
    "reference": {"kind": "circle", "radius": "200 mm", "height": "550 mm"},
    "sat_limit": "none"
  })", "/cfg");
  const ScenarioConfig& s = setup.scenario;
  EXPECT_EQ(s.plant.payload, 1.0);
  EXPECT_DOUBLE_EQ(s.reference.radius, 0.2);
  EXPECT_DOUBLE_EQ(s.reference.height, 0.55);
  EXPECT_EQ(s.controller.ct.kp, 400.0);
  EXPECT_TRUE(std::isinf(s.sat_limit));
  EXPECT_EQ(s.t_final, 10.0);
}

TEST(ScenarioConfig, WeightPathResolvesAgainstConfigDir) {
  const auto setup = parse_scenario_config(
      R"({"preset": "counterexample", "controller": {"kind": "adp", "weights": "w/s.txt"}})",
      "/etc/adpt");
  EXPECT_EQ(setup.weights_path, "/etc/adpt/w/s.txt");
}

TEST(ScenarioConfig, RejectsMismatches) {
  EXPECT_THROW(parse_scenario_config(
                   R"({"preset": "circle", "controller": {"kind": "ct", "phi": 1}})", "."),
               ConfigError);
  EXPECT_THROW(parse_scenario_config(
                   R"({"preset": "counterexample", "controller": {"kind": "smc"}})", "."),
               ConfigError);
  EXPECT_THROW(parse_scenario_config(
                   R"({"preset": "step", "controller": {"kind": "ct"}, "cost_horizon": "20 s"})",
                   "."),
               ConfigError);
  EXPECT_THROW(parse_scenario_config(
                   R"({"preset": "step", "controller": {"kind": "ct"}, "sat_limit": "5 kg"})",
                   "."),
               ConfigError);
}

TEST(ScenarioConfig, CustomScalarScenario) {
  const auto setup = parse_scenario_config(R"({
    "plant": {"kind": "scalar", "a": -1},
    "controller": {"kind": "discounted_lqt"},
    "reference": {"kind": "constant", "value": [0]},
    "initial_state": [1],
    "t_final": "2 s",
    "window": [[1, 5]]
  })", ".");
  EXPECT_EQ(setup.scenario.window.front().second, 2.0);
  const auto r = run_scenario(setup.scenario, nullptr);
  EXPECT_EQ(r.status, "ok");
  EXPECT_EQ(r.log.size(), 1000u);
}

TEST(Suite, ExpandsControllersScenariosPayloads) {
  const auto setup = parse_suite_config(
      R"({"payloads": ["0 kg", "500 g"], "t_final": "8 s", "ct": {"kp": 100}})", ".");
  const auto runs = expand_suite(setup.suite);
  ASSERT_EQ(runs.size(), 12u);
  EXPECT_EQ(runs[0].controller.kind, ControllerKind::kCt);
  EXPECT_EQ(runs[0].name, "circle");
  EXPECT_EQ(runs[1].plant.payload, 0.5);
  EXPECT_EQ(runs[2].name, "step");
  EXPECT_EQ(runs[4].controller.kind, ControllerKind::kAdp);
  EXPECT_EQ(runs[0].controller.ct.kp, 100.0);
  for (const auto& r : runs) {
    EXPECT_EQ(r.t_final, 8.0);
    for (const auto& w : r.window) EXPECT_LE(w.second, 8.0);
  }
  EXPECT_THROW(parse_suite_config(R"({"scenarios": ["square"]})", "."), ConfigError);
  EXPECT_THROW(parse_suite_config(R"({"controllers": []})", "."), ConfigError);
}

TEST(Counterexample, LqtHoldsTheStateAtOne) {
  const auto r = run_scenario(counterexample_scenario(ControllerKind::kDiscountedLqt), nullptr);
  ASSERT_EQ(r.status, "ok");
  ASSERT_EQ(r.log.size(), 5000u);
  double worst_x = 0.0;
  double worst_u = 0.0;
  for (std::size_t k = 0; k < r.log.size(); ++k) {
    worst_x = std::max(worst_x, std::abs(r.log.state[k](0) - 1.0));
    worst_u = std::max(worst_u, std::abs(r.log.control[k](0) + 1.0));
  }
  EXPECT_LT(worst_x, 1e-6);
  EXPECT_LT(worst_u, 1e-6);
}

TEST(Sha256, KnownVector) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Commands, MalformedConfigLeavesNoOutput) {
  const fs::path dir = fresh_dir("malformed");
  write_file(dir / "bad.json", R"({"plant": {"kind": "scalar"}, "cost": 3})");
  CommandOptions o;
  o.config = (dir / "bad.json").string();
  o.out = (dir / "out").string();
  std::ostringstream log;
  EXPECT_EQ(cmd_train(o, log), kExitConfigError);
  EXPECT_FALSE(fs::exists(dir / "out"));
  o.config = (dir / "missing.json").string();
  EXPECT_EQ(cmd_simulate(o, log), kExitConfigError);
  EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(Commands, AdpWithoutWeightsIsAConfigError) {
  const fs::path dir = fresh_dir("noweights");
  write_file(dir / "s.json", R"({"preset": "counterexample", "controller": {"kind": "adp"}})");
  CommandOptions o;
  o.config = (dir / "s.json").string();
  o.out = (dir / "out").string();
  std::ostringstream log;
  EXPECT_EQ(cmd_simulate(o, log), kExitConfigError);
  EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(Commands, TrainThenSimulateCounterexample) {
  const fs::path dir = fresh_dir("roundtrip");
  write_file(dir / "train.json", kScalarTrain);
  write_file(dir / "sim.json",
             R"({"preset": "counterexample", "controller": {"kind": "adp", "weights": "out/weights.txt"}})");
  CommandOptions o;
  o.config = (dir / "train.json").string();
  o.out = (dir / "out").string();
  o.seed = 5;
  std::ostringstream log;
  ASSERT_EQ(cmd_train(o, log), kExitOk) << log.str();
  for (const char* f : {"weights.txt", "training_report.json", "convergence.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  const auto vf = load_weights((dir / "out" / "weights.txt").string());
  EXPECT_NEAR(vf.weights()(0), 1.0 + std::sqrt(2.0), 0.01 * (1.0 + std::sqrt(2.0)));

  CommandOptions s;
  s.config = (dir / "sim.json").string();
  s.out = (dir / "sim").string();
  ASSERT_EQ(cmd_simulate(s, log), kExitOk) << log.str();
  std::ifstream is(dir / "sim" / "trajectory.csv");
  std::string line;
  int rows = -2;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 5000);
}

TEST(Commands, NonConvergenceExitCodeKeepsReport) {
  const fs::path dir = fresh_dir("cap");
  std::string text = kScalarTrain;
  text.replace(text.find("\"n_runs\": 2"), 11, "\"n_runs\": 1, \"max_iterations\": 3");
  write_file(dir / "t.json", text);
  CommandOptions o;
  o.config = (dir / "t.json").string();
  o.out = (dir / "out").string();
  std::ostringstream log;
  EXPECT_EQ(cmd_train(o, log), kExitNotConverged);
  EXPECT_TRUE(fs::exists(dir / "out" / "training_report.json"));
  EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
}
