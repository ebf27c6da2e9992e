#include "adpt/cli/commands.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "adpt/cli/config.hpp"
#include "adpt/errors.hpp"
#include "json.hpp"

#ifndef ADPT_VERSION
#define ADPT_VERSION "0.0.0"
#endif

namespace adpt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

// Collects every file written under the output directory for the manifest.
class OutputDir {
 public:
  OutputDir(std::string command, const CommandOptions& o, const std::string& config_bytes)
      : root_(o.out), started_(utc_now()) {
    manifest_["tool"] = "adpt";
    manifest_["version"] = ADPT_VERSION;
    manifest_["command"] = std::move(command);
    manifest_["config"] = {{"path", fs::absolute(o.config).lexically_normal().string()},
                           {"sha256", sha256_hex(config_bytes)}};
    manifest_["jobs"] = o.jobs;
  }

  void create() { fs::create_directories(root_); }

  void set(const std::string& key, json value) { manifest_[key] = std::move(value); }

  void write(const std::string& relative, const std::string& bytes) {
    const fs::path path = root_ / relative;
    fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << bytes;
    if (!os) throw std::runtime_error("cannot write " + path.string());
    artifacts_.push_back({{"path", relative}, {"sha256", sha256_hex(bytes)},
                          {"bytes", bytes.size()}});
  }

  void finish(int exit_code) {
    manifest_["artifacts"] = artifacts_;
    manifest_["started"] = started_;
    manifest_["finished"] = utc_now();
    manifest_["exit_code"] = exit_code;
    std::ofstream os(root_ / "manifest.json", std::ios::binary | std::ios::trunc);
    os << manifest_.dump(2) << "\n";
  }

 private:
  fs::path root_;
  std::string started_;
  json manifest_;
  json artifacts_ = json::array();
};

std::string config_dir(const std::string& path) {
  return fs::absolute(path).parent_path().string();
}

void check_options(const CommandOptions& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  if (o.out.empty()) throw ConfigError("--out is required");
  if (o.jobs < 1) throw ConfigError("--jobs must be at least 1");
  if (fs::exists(o.out) && !fs::is_directory(o.out)) {
    throw ConfigError("--out exists and is not a directory: " + o.out);
  }
}

ValueFunction load_weight_file(const std::string& path) {
  try {
    return load_weights(path);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("weights: ") + e.what());
  }
}

std::string metrics_csv(const ScenarioResult& r) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "# adpt-metrics v1\n";
  os << "axis,mean_abs_e_mm,std_abs_e_mm\n";
  if (r.metrics) {
    for (std::size_t i = 0; i < r.metrics->mean_abs_error_mm.size(); ++i) {
      os << i + 1 << "," << r.metrics->mean_abs_error_mm[i] << ","
         << r.metrics->std_abs_error_mm[i] << "\n";
    }
  }
  return os.str();
}

json metrics_json(const Metrics& m) {
  return {{"mean_abs_error_mm", m.mean_abs_error_mm},
          {"std_abs_error_mm", m.std_abs_error_mm},
          {"total_cost", m.total_cost},
          {"max_abs_control", m.max_abs_control},
          {"final_error_norm", m.final_error_norm},
          {"settling_time", m.settling_time},
          {"window_samples", m.window_samples}};
}

std::string csv_of(const TrajectoryLog& log) {
  std::ostringstream os;
  write_log_csv(os, log);
  return os.str();
}

template <typename Body>
int guarded(const char* command, std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << command << ": config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    log << command << ": " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < length; ++i) os << std::setw(2) << static_cast<int>(digest[i]);
  return os.str();
}

int cmd_train(const CommandOptions& o, std::ostream& log) {
  return guarded("train", log, [&]() -> int {
    check_options(o);
    const std::string text = read_text_file(o.config);
    TrainSetup setup = parse_train_config(text, config_dir(o.config));
    TrainingConfig& cfg = setup.training;
    if (o.seed) cfg.seed = *o.seed;
    cfg.jobs = o.jobs;
    const CanonicalPlant plant = build_model_plant(setup.plant);

    OutputDir out("train", o, text);
    out.create();
    out.set("seed", cfg.seed);
    log << "train " << setup.name << ": " << cfg.n_runs << " run(s), seed " << cfg.seed << "\n";

    std::vector<TrainingReport> runs;
    json report = {{"name", setup.name}, {"plant", to_string(setup.plant.kind)},
                   {"seed", cfg.seed}, {"n_runs", cfg.n_runs}, {"n_samples", cfg.n_samples},
                   {"delta_T", cfg.delta_T}, {"threshold", cfg.threshold}};
    try {
      runs = train_runs(plant, cfg);
    } catch (const std::exception& e) {
      report["error"] = e.what();
      out.write("training_report.json", report.dump(2) + "\n");
      out.finish(kExitFailure);
      throw;
    }

    int converged = 0;
    json run_list = json::array();
    std::ostringstream conv;
    conv << std::setprecision(12) << "# adpt-convergence v1\nrun,seed,iteration,max_delta_w,ls_residual\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const auto& run = runs[r];
      converged += run.converged ? 1 : 0;
      run_list.push_back({{"seed", run.seed},
                          {"iterations", run.iterations},
                          {"converged", run.converged},
                          {"monotonicity_violations", run.monotonicity_violations},
                          {"hjb_residual_mean_abs", run.hjb_residual.mean_abs},
                          {"hjb_residual_max_abs", run.hjb_residual.max_abs},
                          {"mean_running_cost", run.hjb_residual.mean_running_cost},
                          {"mean_fixed_point_gap", run.hjb_residual.mean_fixed_point_gap},
                          {"weights", vector_json(run.final_weights)}});
      for (std::size_t k = 0; k < run.weight_history.size(); ++k) {
        conv << r << "," << run.seed << "," << k + 1 << "," << run.weight_history[k] << ","
             << (k < run.ls_residual_history.size() ? run.ls_residual_history[k] : 0.0)
             << "\n";
      }
      log << "  run " << r << " seed " << run.seed << ": "
          << (run.converged ? "converged" : "NOT converged") << " after " << run.iterations
          << " iterations\n";
    }

    const AveragedWeights avg = average_weights(runs);
    json labels = json::array();
    for (int k = 0; k < avg.basis.size(); ++k) labels.push_back(avg.basis.label(k));
    report["runs"] = run_list;
    report["converged_runs"] = converged;
    report["averaged"] = {{"labels", labels}, {"mean", vector_json(avg.mean)},
                          {"stddev", vector_json(avg.stddev)}};

    std::ostringstream weights;
    write_weights(weights, avg.value_function(),
                  {{"name", setup.name},
                   {"plant", to_string(setup.plant.kind)},
                   {"seed", std::to_string(cfg.seed)},
                   {"runs", std::to_string(cfg.n_runs)},
                   {"converged_runs", std::to_string(converged)},
                   {"config_sha256", sha256_hex(text)}});
    out.write("weights.txt", weights.str());
    out.write("training_report.json", report.dump(2) + "\n");
    out.write("convergence.csv", conv.str());

    const int code = converged == static_cast<int>(runs.size()) ? kExitOk : kExitNotConverged;
    out.finish(code);
    log << "averaged weights of " << runs.size() << " run(s) written to " << o.out << "\n";
    return code;
  });
}

int cmd_simulate(const CommandOptions& o, std::ostream& log) {
  return guarded("simulate", log, [&]() -> int {
    check_options(o);
    const std::string text = read_text_file(o.config);
    ScenarioSetup setup = parse_scenario_config(text, config_dir(o.config));
    const ScenarioConfig& s = setup.scenario;
    const std::string weights_path = o.weights.empty() ? setup.weights_path : o.weights;
    std::optional<ValueFunction> vf;
    std::string weights_bytes;
    if (s.controller.kind == ControllerKind::kAdp) {
      if (weights_path.empty()) throw ConfigError("the adp controller needs a weight file");
      vf = load_weight_file(weights_path);
      weights_bytes = read_text_file(weights_path);
      const int n = plant_order(s.plant) * plant_outputs(s.plant);
      if (vf->basis().dim() != n) {
        throw ConfigError("weight file has dimension " + std::to_string(vf->basis().dim()) +
                          ", the plant needs " + std::to_string(n));
      }
    }

    OutputDir out("simulate", o, text);
    out.create();
    if (o.seed) out.set("seed", *o.seed);
    if (vf) out.set("weights", {{"path", fs::absolute(weights_path).lexically_normal().string()},
                                {"sha256", sha256_hex(weights_bytes)}});

    const ScenarioResult r = run_scenario(s, vf ? &*vf : nullptr);
    json summary = {{"name", s.name},
                    {"plant", to_string(s.plant.kind)},
                    {"payload_kg", s.plant.payload},
                    {"controller", to_string(s.controller.kind)},
                    {"status", r.status},
                    {"rows", r.log.size()},
                    {"saturated_ticks", r.log.saturated_ticks()}};
    if (r.log.size() > 0) {
      summary["final_time"] = r.log.time.back();
      summary["final_state"] = vector_json(r.log.state.back());
      summary["final_error"] = vector_json(r.log.error.back());
      summary["final_control"] = vector_json(r.log.control.back());
    }
    if (r.metrics) summary["metrics"] = metrics_json(*r.metrics);
    if (vf && r.log.size() > 1) {
      const LyapunovCheck lc = lyapunov_decrease(r.log, *vf);
      summary["lyapunov"] = {{"steps_out_of_floor", lc.steps_out_of_floor},
                             {"decreasing", lc.decreasing},
                             {"fraction", lc.fraction()}};
    }
    out.write("trajectory.csv", csv_of(r.log));
    out.write("metrics.csv", metrics_csv(r));
    out.write("summary.json", summary.dump(2) + "\n");
    const int code = r.log.aborted ? kExitRunAborted : kExitOk;
    out.finish(code);
    log << "simulate " << s.name << " (" << to_string(s.controller.kind) << "): " << r.status
        << ", " << r.log.size() << " rows\n";
    return code;
  });
}

int cmd_compare(const CommandOptions& o, std::ostream& log) {
  return guarded("compare", log, [&]() -> int {
    check_options(o);
    const std::string text = read_text_file(o.config);
    SuiteSetup setup = parse_suite_config(text, config_dir(o.config));
    const std::string weights_path = o.weights.empty() ? setup.weights_path : o.weights;
    const bool needs_weights =
        std::find(setup.suite.controllers.begin(), setup.suite.controllers.end(),
                  ControllerKind::kAdp) != setup.suite.controllers.end();
    std::optional<ValueFunction> vf;
    std::string weights_bytes;
    if (needs_weights) {
      if (weights_path.empty()) throw ConfigError("the adp controller needs a weight file");
      vf = load_weight_file(weights_path);
      weights_bytes = read_text_file(weights_path);
      if (vf->basis().dim() != 6) throw ConfigError("Delta weights must have dimension 6");
    }
    const auto scenarios = expand_suite(setup.suite);

    OutputDir out("compare", o, text);
    out.create();
    if (o.seed) out.set("seed", *o.seed);
    if (vf) out.set("weights", {{"path", fs::absolute(weights_path).lexically_normal().string()},
                                {"sha256", sha256_hex(weights_bytes)}});

    log << "compare: " << scenarios.size() << " runs on " << o.jobs << " worker(s)\n";
    const auto results = scenario_suite(scenarios, vf ? &*vf : nullptr, o.jobs);

    std::ostringstream csv;
    write_suite_csv(csv, results);
    std::ostringstream tables;
    write_suite_tables(tables, results);
    out.write("suite_metrics.csv", csv.str());
    out.write("tables.txt", tables.str());
    int failed = 0;
    for (const auto& r : results) {
      std::ostringstream payload;
      payload << r.config.plant.payload;
      const std::string tag = to_string(r.config.controller.kind) + "_" + r.config.name + "_" +
                              payload.str() + "kg";
      if (r.status != "ok") {
        ++failed;
        log << "  " << tag << ": " << r.status << "\n";
      }
      if (setup.write_trajectories) out.write("trajectories/" + tag + ".csv", csv_of(r.log));
    }
    const int code = failed == 0 ? kExitOk : kExitRunAborted;
    out.finish(code);
    log << "compare: " << results.size() - static_cast<std::size_t>(failed) << "/"
        << results.size() << " runs ok\n";
    return code;
  });
}

}  // namespace adpt::cli
