#include "adpt/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "adpt/errors.hpp"
#include "json.hpp"

namespace adpt::cli {

using nlohmann::json;

namespace {

struct Unit {
  Dimension dimension;
  double factor;
};

const std::map<std::string, Unit>& unit_table() {
  constexpr double deg = std::numbers::pi / 180.0;
  static const std::map<std::string, Unit> table = {
      {"m", {Dimension::kLength, 1.0}},
      {"cm", {Dimension::kLength, 1e-2}},
      {"mm", {Dimension::kLength, 1e-3}},
      {"m/s", {Dimension::kSpeed, 1.0}},
      {"mm/s", {Dimension::kSpeed, 1e-3}},
      {"m/s^2", {Dimension::kAcceleration, 1.0}},
      {"mm/s^2", {Dimension::kAcceleration, 1e-3}},
      {"s", {Dimension::kTime, 1.0}},
      {"ms", {Dimension::kTime, 1e-3}},
      {"Hz", {Dimension::kFrequency, 1.0}},
      {"kHz", {Dimension::kFrequency, 1e3}},
      {"kg", {Dimension::kMass, 1.0}},
      {"g", {Dimension::kMass, 1e-3}},
      {"N.m", {Dimension::kTorque, 1.0}},
      {"N*m", {Dimension::kTorque, 1.0}},
      {"Nm", {Dimension::kTorque, 1.0}},
      {"rad", {Dimension::kAngle, 1.0}},
      {"deg", {Dimension::kAngle, deg}},
      {"rad/s", {Dimension::kAngularRate, 1.0}},
      {"deg/s", {Dimension::kAngularRate, deg}},
  };
  return table;
}

const char* dimension_name(Dimension d) {
  switch (d) {
    case Dimension::kAny: return "any";
    case Dimension::kDimensionless: return "dimensionless";
    case Dimension::kLength: return "length";
    case Dimension::kSpeed: return "speed";
    case Dimension::kAcceleration: return "acceleration";
    case Dimension::kTime: return "time";
    case Dimension::kFrequency: return "frequency";
    case Dimension::kMass: return "mass";
    case Dimension::kTorque: return "torque";
    case Dimension::kAngle: return "angle";
    case Dimension::kAngularRate: return "angular rate";
  }
  return "?";
}

// Keys are reported with their path, e.g. "reference.radius".
class Node {
 public:
  Node(const json& value, std::string path) : v_(value), path_(std::move(path)) {}

  const json& raw() const { return v_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError((path_.empty() ? std::string("config") : path_) + ": " + what);
  }

  void require_object() const {
    if (!v_.is_object()) fail("expected an object");
  }

  void allow_keys(std::initializer_list<const char*> keys) const {
    require_object();
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, _] : v_.items()) {
      if (allowed.count(k) == 0) child_path_fail(k, "unknown key");
    }
  }

  bool has(const char* key) const { return v_.is_object() && v_.contains(key); }

  Node at(const char* key) const {
    require_object();
    if (!v_.contains(key)) child_path_fail(key, "missing required key");
    return Node(v_.at(key), join(key));
  }

  Node at(std::size_t i) const {
    return Node(v_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  double quantity(Dimension d) const {
    if (v_.is_number()) return v_.get<double>();
    if (v_.is_string()) {
      try {
        return parse_quantity(v_.get<std::string>(), d);
      } catch (const ConfigError& e) {
        fail(e.what());
      }
    }
    fail("expected a number or a quantity string");
  }

  double quantity_or(const char* key, Dimension d, double fallback) const {
    return has(key) ? at(key).quantity(d) : fallback;
  }

  int integer() const {
    if (!v_.is_number_integer()) fail("expected an integer");
    const auto x = v_.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      fail("integer out of range");
    }
    return static_cast<int>(x);
  }

  std::uint64_t unsigned_integer() const {
    if (!v_.is_number_integer() || (v_.is_number_integer() && !v_.is_number_unsigned() &&
                                    v_.get<long long>() < 0)) {
      fail("expected a nonnegative integer");
    }
    return v_.get<std::uint64_t>();
  }

  bool boolean() const {
    if (!v_.is_boolean()) fail("expected true or false");
    return v_.get<bool>();
  }

  std::string string() const {
    if (!v_.is_string()) fail("expected a string");
    return v_.get<std::string>();
  }

  std::size_t size() const {
    if (!v_.is_array()) fail("expected an array");
    return v_.size();
  }

  Vector vector(Dimension d) const {
    const std::size_t n = size();
    Vector out(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i)) = at(i).quantity(d);
    return out;
  }

  // [[...], ...] rows, or {"diag": [...]}.
  Matrix matrix() const {
    if (v_.is_object()) {
      allow_keys({"diag"});
      const Vector d = at("diag").vector(Dimension::kDimensionless);
      return d.asDiagonal();
    }
    const std::size_t rows = size();
    if (rows == 0) fail("empty matrix");
    const std::size_t cols = at(std::size_t{0}).size();
    Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
      const Node row = at(i);
      if (row.size() != cols) row.fail("ragged matrix row");
      for (std::size_t j = 0; j < cols; ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            row.at(j).quantity(Dimension::kDimensionless);
      }
    }
    return out;
  }

 private:
  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  [[noreturn]] void child_path_fail(const std::string& key, const std::string& what) const {
    throw ConfigError(join(key) + ": " + what);
  }

  const json& v_;
  std::string path_;
};

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

PlantSpec parse_plant(const Node& n) {
  n.allow_keys({"kind", "a", "b", "payload"});
  PlantSpec p;
  const std::string kind = n.at("kind").string();
  if (kind == "scalar") {
    p.kind = PlantKind::kScalar;
    p.a = n.quantity_or("a", Dimension::kAny, 1.0);
    p.b = n.quantity_or("b", Dimension::kAny, 1.0);
    if (p.b == 0.0) n.at("b").fail("input gain must be nonzero");
  } else if (kind == "double_integrator") {
    p.kind = PlantKind::kDoubleIntegrator;
  } else if (kind == "delta") {
    p.kind = PlantKind::kDelta;
    p.payload = n.quantity_or("payload", Dimension::kMass, 0.0);
    if (p.payload < 0.0) n.at("payload").fail("payload must be nonnegative");
  } else {
    n.at("kind").fail("unknown plant kind '" + kind + "'");
  }
  if (p.kind != PlantKind::kScalar && (n.has("a") || n.has("b"))) {
    n.fail("a and b apply to the scalar plant only");
  }
  if (p.kind != PlantKind::kDelta && n.has("payload")) {
    n.fail("payload applies to the delta plant only");
  }
  return p;
}

int state_dim(const PlantSpec& p) { return plant_order(p) * plant_outputs(p); }

CostWeights default_cost(const PlantSpec& p) {
  if (p.kind == PlantKind::kDelta) return delta_cost_weights();
  return CostWeights::make(Matrix::Identity(state_dim(p), state_dim(p)),
                           Matrix::Identity(plant_outputs(p), plant_outputs(p)));
}

CostWeights parse_cost(const Node& n, const PlantSpec& plant) {
  if (n.raw().is_string()) {
    if (n.string() == "delta") return delta_cost_weights();
    n.fail("unknown cost preset '" + n.string() + "'");
  }
  n.allow_keys({"Q", "R"});
  const Matrix Q = n.at("Q").matrix();
  const Matrix R = n.at("R").matrix();
  if (Q.rows() != state_dim(plant) || R.rows() != plant_outputs(plant)) {
    n.fail("Q must be " + std::to_string(state_dim(plant)) + "x" +
           std::to_string(state_dim(plant)) + " and R " +
           std::to_string(plant_outputs(plant)) + "x" +
           std::to_string(plant_outputs(plant)));
  }
  try {
    return CostWeights::make(Q, R);
  } catch (const std::invalid_argument& e) {
    n.fail(e.what());
  }
}

RegionOfInterest parse_roi(const Node& n, const PlantSpec& plant) {
  if (n.raw().is_string()) {
    if (n.string() == "delta" && plant.kind == PlantKind::kDelta) return delta_training_roi();
    n.fail("unknown ROI preset '" + n.string() + "' for this plant");
  }
  n.allow_keys({"error_lower", "error_upper", "reference_lower", "reference_upper"});
  RegionOfInterest roi;
  roi.error_lower = n.at("error_lower").vector(Dimension::kAny);
  roi.error_upper = n.at("error_upper").vector(Dimension::kAny);
  roi.reference_lower = n.at("reference_lower").vector(Dimension::kAny);
  roi.reference_upper = n.at("reference_upper").vector(Dimension::kAny);
  const auto n_dim = static_cast<Eigen::Index>(state_dim(plant));
  for (const Vector* v : {&roi.error_lower, &roi.error_upper, &roi.reference_lower,
                          &roi.reference_upper}) {
    if (v->size() != n_dim) n.fail("every bound needs " + std::to_string(n_dim) + " entries");
  }
  if ((roi.error_upper - roi.error_lower).minCoeff() < 0.0 ||
      (roi.reference_upper - roi.reference_lower).minCoeff() < 0.0) {
    n.fail("lower bounds must not exceed upper bounds");
  }
  return roi;
}

ControllerKind parse_controller_kind(const Node& n) {
  const std::string kind = n.string();
  if (kind == "adp") return ControllerKind::kAdp;
  if (kind == "ct") return ControllerKind::kCt;
  if (kind == "smc") return ControllerKind::kSmc;
  if (kind == "discounted_lqt") return ControllerKind::kDiscountedLqt;
  n.fail("unknown controller kind '" + kind + "'");
}

CtGains parse_ct(const Node& n, CtGains g, bool own_keys = true) {
  if (own_keys) n.allow_keys({"kp", "kd"});
  g.kp = n.quantity_or("kp", Dimension::kDimensionless, g.kp);
  g.kd = n.quantity_or("kd", Dimension::kDimensionless, g.kd);
  if (!(g.kp > 0 && g.kd > 0)) n.fail("gains must be positive");
  return g;
}

SmcGains parse_smc(const Node& n, SmcGains g, bool own_keys = true) {
  if (own_keys) n.allow_keys({"k", "lambda", "phi"});
  g.k = n.quantity_or("k", Dimension::kDimensionless, g.k);
  g.lambda = n.quantity_or("lambda", Dimension::kDimensionless, g.lambda);
  g.phi = n.quantity_or("phi", Dimension::kDimensionless, g.phi);
  if (!(g.k > 0 && g.lambda > 0 && g.phi > 0)) n.fail("gains must be positive");
  return g;
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal().string();
}

ReferenceSpec parse_reference(const Node& n, ReferenceSpec r) {
  n.require_object();
  const std::string kind = n.at("kind").string();
  if (kind == "constant") {
    n.allow_keys({"kind", "value"});
    r.kind = ReferenceKind::kConstant;
    r.value = n.at("value").vector(Dimension::kAny);
  } else if (kind == "ramp") {
    n.allow_keys({"kind", "start", "rate"});
    r.kind = ReferenceKind::kRamp;
    r.value = n.at("start").vector(Dimension::kAny);
    r.rate = n.at("rate").vector(Dimension::kAny);
  } else if (kind == "sine") {
    n.allow_keys({"kind", "amplitude", "omega", "phase"});
    r.kind = ReferenceKind::kSine;
    r.value = n.at("amplitude").vector(Dimension::kAny);
    r.omega = n.at("omega").quantity(Dimension::kAngularRate);
    r.phase = n.quantity_or("phase", Dimension::kAngle, 0.0);
  } else if (kind == "circle") {
    n.allow_keys({"kind", "radius", "omega", "height"});
    r.kind = ReferenceKind::kCircle;
    r.radius = n.quantity_or("radius", Dimension::kLength, r.radius);
    r.circle_omega = n.quantity_or("omega", Dimension::kAngularRate, r.circle_omega);
    r.height = n.quantity_or("height", Dimension::kLength, r.height);
    if (!(r.radius >= 0.0)) n.at("radius").fail("radius must be nonnegative");
  } else if (kind == "steps") {
    n.allow_keys({"kind", "setpoints", "dwell"});
    r.kind = ReferenceKind::kSteps;
    const Node pts = n.at("setpoints");
    r.setpoints.clear();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      r.setpoints.push_back(pts.at(i).vector(Dimension::kAny));
    }
    if (r.setpoints.empty()) pts.fail("need at least one setpoint");
    r.dwell = n.quantity_or("dwell", Dimension::kTime, r.dwell);
    if (!(r.dwell > 0.0)) n.at("dwell").fail("dwell must be positive");
  } else {
    n.at("kind").fail("unknown reference kind '" + kind + "'");
  }
  return r;
}

TimeWindow parse_window(const Node& n) {
  TimeWindow w;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const Node pair = n.at(i);
    if (pair.size() != 2) pair.fail("expected [begin, end]");
    const double a = pair.at(std::size_t{0}).quantity(Dimension::kTime);
    const double b = pair.at(std::size_t{1}).quantity(Dimension::kTime);
    if (!(b > a)) pair.fail("window end must follow its begin");
    w.emplace_back(a, b);
  }
  if (w.empty()) n.fail("window is empty");
  return w;
}

}  // namespace

double parse_quantity(const std::string& text, Dimension expected) {
  std::istringstream is(text);
  double value = 0.0;
  if (!(is >> value)) throw ConfigError("'" + text + "' does not start with a number");
  std::string unit;
  is >> unit;
  std::string rest;
  if (is >> rest) throw ConfigError("'" + text + "' has trailing text");
  if (!std::isfinite(value)) throw ConfigError("'" + text + "' is not finite");
  if (unit.empty()) return value;
  const auto& table = unit_table();
  const auto it = table.find(unit);
  if (it == table.end()) throw ConfigError("unknown unit '" + unit + "' in '" + text + "'");
  if (expected != Dimension::kAny && it->second.dimension != expected) {
    throw ConfigError("'" + text + "' is a " + dimension_name(it->second.dimension) +
                      ", expected " + dimension_name(expected));
  }
  return value * it->second.factor;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

TrainSetup parse_train_config(const std::string& text,
                              const std::filesystem::path& base_dir) {
  (void)base_dir;
  const json doc = parse_json(text);
  const Node root(doc, "");
  root.allow_keys({"name", "plant", "cost", "roi", "training"});
  TrainSetup s;
  s.name = root.has("name") ? root.at("name").string() : "train";
  s.plant = parse_plant(root.at("plant"));
  if (s.plant.payload != 0.0) root.at("plant").fail("training uses the nominal model; drop payload");
  const bool delta = s.plant.kind == PlantKind::kDelta;
  TrainingConfig& c = s.training;
  if (delta) c = delta_training_config();
  c.cost = root.has("cost") ? parse_cost(root.at("cost"), s.plant) : default_cost(s.plant);
  if (root.has("roi")) {
    c.roi = parse_roi(root.at("roi"), s.plant);
  } else if (!delta) {
    root.fail("roi is required for this plant");
  }
  if (root.has("training")) {
    const Node t = root.at("training");
    t.allow_keys({"delta_T", "substeps", "n_samples", "n_runs", "threshold",
                  "max_iterations", "seed", "ls_regularization", "max_normal_condition",
                  "holdout_samples", "resample_each_iteration", "monotonicity_tolerance",
                  "basis_scale"});
    c.delta_T = t.quantity_or("delta_T", Dimension::kTime, c.delta_T);
    if (t.has("substeps")) c.substeps = t.at("substeps").integer();
    if (t.has("n_samples")) c.n_samples = t.at("n_samples").integer();
    if (t.has("n_runs")) c.n_runs = t.at("n_runs").integer();
    c.threshold = t.quantity_or("threshold", Dimension::kDimensionless, c.threshold);
    if (t.has("max_iterations")) c.max_iterations = t.at("max_iterations").integer();
    if (t.has("seed")) c.seed = t.at("seed").unsigned_integer();
    c.ls_regularization =
        t.quantity_or("ls_regularization", Dimension::kDimensionless, c.ls_regularization);
    c.max_normal_condition = t.quantity_or("max_normal_condition", Dimension::kDimensionless,
                                           c.max_normal_condition);
    if (t.has("holdout_samples")) c.holdout_samples = t.at("holdout_samples").integer();
    if (t.has("resample_each_iteration")) {
      c.resample_each_iteration = t.at("resample_each_iteration").boolean();
    }
    c.monotonicity_tolerance = t.quantity_or("monotonicity_tolerance", Dimension::kDimensionless,
                                             c.monotonicity_tolerance);
    if (t.has("basis_scale")) c.basis_scale = t.at("basis_scale").vector(Dimension::kDimensionless);
  }
  try {
    c.validate(build_model_plant(s.plant));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("training: ") + e.what());
  }
  if (c.basis_scale.size() != 0 && c.basis_scale.minCoeff() <= 0.0) {
    throw ConfigError("training.basis_scale: entries must be positive");
  }
  return s;
}

ScenarioSetup parse_scenario_config(const std::string& text,
                                    const std::filesystem::path& base_dir) {
  const json doc = parse_json(text);
  const Node root(doc, "");
  root.allow_keys({"name", "preset", "plant", "controller", "reference", "t_final",
                   "control_rate", "substeps", "initial_state", "sat_limit", "window",
                   "cost_horizon", "cost"});
  const Node ctrl = root.at("controller");
  ctrl.allow_keys({"kind", "weights", "kp", "kd", "k", "lambda", "phi", "q", "rho"});
  const ControllerKind kind = parse_controller_kind(ctrl.at("kind"));

  ScenarioSetup setup;
  ScenarioConfig& s = setup.scenario;
  std::optional<PlantSpec> plant;
  if (root.has("plant")) plant = parse_plant(root.at("plant"));
  if (root.has("preset")) {
    const Node preset = root.at("preset");
    const std::string name = preset.string();
    const double payload = plant ? plant->payload : 0.0;
    if (name == "circle") {
      s = circle_scenario(kind, payload);
    } else if (name == "step") {
      s = step_scenario(kind, payload);
    } else if (name == "counterexample") {
      s = counterexample_scenario(kind);
    } else {
      preset.fail("unknown preset '" + name + "'");
    }
    if (plant) {
      if (plant->kind != s.plant.kind) root.at("plant").fail("plant kind differs from the preset");
      s.plant = *plant;
    }
  } else {
    if (!plant) root.fail("plant is required without a preset");
    s.plant = *plant;
    s.controller.kind = kind;
    s.cost = default_cost(s.plant);
    s.initial_state = s.plant.kind == PlantKind::kDelta
                          ? delta_home_state()
                          : Vector(Vector::Zero(state_dim(s.plant)));
    if (!root.has("reference")) root.fail("reference is required without a preset");
    if (!root.has("window")) root.fail("window is required without a preset");
  }
  s.name = root.has("name") ? root.at("name").string() : (s.name.empty() ? "scenario" : s.name);

  s.controller.kind = kind;
  if (ctrl.has("kp") || ctrl.has("kd")) {
    if (kind != ControllerKind::kCt) ctrl.fail("kp and kd apply to the ct controller");
    s.controller.ct = parse_ct(ctrl, s.controller.ct, false);
  }
  if (ctrl.has("k") || ctrl.has("lambda") || ctrl.has("phi")) {
    if (kind != ControllerKind::kSmc) ctrl.fail("k, lambda and phi apply to the smc controller");
    s.controller.smc = parse_smc(ctrl, s.controller.smc, false);
  }
  if (ctrl.has("q") || ctrl.has("rho")) {
    if (kind != ControllerKind::kDiscountedLqt) {
      ctrl.fail("q and rho apply to the discounted_lqt controller");
    }
    s.controller.lqt_q = ctrl.quantity_or("q", Dimension::kDimensionless, s.controller.lqt_q);
    s.controller.lqt_rho = ctrl.quantity_or("rho", Dimension::kAny, s.controller.lqt_rho);
  }
  if (ctrl.has("weights")) {
    if (kind != ControllerKind::kAdp) ctrl.fail("weights apply to the adp controller");
    setup.weights_path = resolve(base_dir, ctrl.at("weights").string());
    s.controller.weights_path = setup.weights_path;
  }

  if (root.has("reference")) s.reference = parse_reference(root.at("reference"), s.reference);
  s.t_final = root.quantity_or("t_final", Dimension::kTime, s.t_final);
  s.control_rate = root.quantity_or("control_rate", Dimension::kFrequency, s.control_rate);
  if (root.has("substeps")) s.substeps = root.at("substeps").integer();
  if (root.has("initial_state")) {
    s.initial_state = root.at("initial_state").vector(Dimension::kAny);
  }
  if (root.has("sat_limit")) {
    const Node sat = root.at("sat_limit");
    if (sat.raw().is_string() && sat.string() == "none") {
      s.sat_limit = kNoSaturation;
    } else {
      s.sat_limit = sat.quantity(Dimension::kTorque);
    }
  }
  if (root.has("window")) s.window = parse_window(root.at("window"));
  if (root.has("cost_horizon")) {
    s.cost_horizon = root.at("cost_horizon").quantity(Dimension::kTime);
  } else if (!root.has("preset")) {
    s.cost_horizon = std::min(s.cost_horizon, s.t_final - 1.0 / s.control_rate);
  }
  if (root.has("cost")) s.cost = parse_cost(root.at("cost"), s.plant);
  if (!root.has("preset")) {
    for (auto& w : s.window) w.second = std::min(w.second, s.t_final);
  }
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return setup;
}

SuiteSetup parse_suite_config(const std::string& text,
                              const std::filesystem::path& base_dir) {
  const json doc = parse_json(text);
  const Node root(doc, "");
  root.allow_keys({"controllers", "scenarios", "payloads", "weights", "ct", "smc",
                   "t_final", "write_trajectories"});
  SuiteSetup setup;
  SuiteConfig& s = setup.suite;
  if (root.has("controllers")) {
    const Node list = root.at("controllers");
    s.controllers.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const ControllerKind k = parse_controller_kind(list.at(i));
      if (k == ControllerKind::kDiscountedLqt) list.at(i).fail("not a Delta controller");
      s.controllers.push_back(k);
    }
  }
  if (root.has("scenarios")) {
    const Node list = root.at("scenarios");
    s.scenarios.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string name = list.at(i).string();
      if (name != "circle" && name != "step") list.at(i).fail("unknown scenario '" + name + "'");
      s.scenarios.push_back(name);
    }
  }
  if (root.has("payloads")) {
    const Node list = root.at("payloads");
    s.payloads.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const double p = list.at(i).quantity(Dimension::kMass);
      if (p < 0.0) list.at(i).fail("payload must be nonnegative");
      s.payloads.push_back(p);
    }
  }
  if (s.controllers.empty() || s.scenarios.empty() || s.payloads.empty()) {
    root.fail("controllers, scenarios and payloads must be nonempty");
  }
  if (root.has("ct")) s.ct = parse_ct(root.at("ct"), s.ct);
  if (root.has("smc")) s.smc = parse_smc(root.at("smc"), s.smc);
  s.t_final = root.quantity_or("t_final", Dimension::kTime, s.t_final);
  if (root.has("weights")) setup.weights_path = resolve(base_dir, root.at("weights").string());
  if (root.has("write_trajectories")) {
    setup.write_trajectories = root.at("write_trajectories").boolean();
  }
  // Expanding validates every scenario.
  try {
    for (const auto& sc : expand_suite(s)) validate(sc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return setup;
}

}  // namespace adpt::cli
