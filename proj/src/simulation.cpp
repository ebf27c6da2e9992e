#include "adpt/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "adpt/errors.hpp"

namespace adpt {

Vector integrate_step(const CanonicalPlant& plant, const Vector& X,
                      const Vector& u, double dt, int substeps) {
  if (!(dt > 0.0) || substeps < 1) {
    throw std::invalid_argument("integration step must be positive");
  }
  const double h = dt / substeps;
  Vector x = X;
  for (int s = 0; s < substeps; ++s) {
    const Vector k1 = companion_lift(plant, x, u);
    const Vector k2 = companion_lift(plant, x + 0.5 * h * k1, u);
    const Vector k3 = companion_lift(plant, x + 0.5 * h * k2, u);
    const Vector k4 = companion_lift(plant, x + h * k3, u);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

std::size_t TrajectoryLog::saturated_ticks() const {
  return static_cast<std::size_t>(std::count_if(
      saturated.begin(), saturated.end(), [](const std::vector<bool>& flags) {
        return std::find(flags.begin(), flags.end(), true) != flags.end();
      }));
}

TrajectoryLog run_closed_loop(const CanonicalPlant& plant,
                              const Controller& controller,
                              const ReferenceSignal& ref, const Vector& X0,
                              const SimulationOptions& options) {
  plant.check_state(X0);
  if (ref.state_dim() != plant.state_dim()) {
    throw DimensionError("reference does not match the plant");
  }
  if (!(options.control_rate > 0.0) || !(options.t_final > 0.0)) {
    throw std::invalid_argument("control rate and final time must be positive");
  }
  const double dt = 1.0 / options.control_rate;
  const auto ticks =
      static_cast<std::size_t>(std::llround(options.t_final * options.control_rate));

  TrajectoryLog log;
  log.outputs = plant.inputs();
  log.extra_names = controller.extra_names();
  for (auto* v : {&log.state, &log.error, &log.control, &log.extras}) {
    v->reserve(ticks);
  }

  Vector X = X0;
  for (std::size_t k = 0; k < ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (!X.allFinite() || X.norm() > options.blowup_guard) {
      log.aborted = true;
      log.failure = "state exceeded blow-up guard at t=" + std::to_string(t);
      break;
    }
    ControlCommand cmd;
    Vector E;
    try {
      E = X - ref(t).state;
      cmd = controller.compute(X, t);
    } catch (const std::exception& e) {
      log.aborted = true;
      log.failure = std::string("controller failed at t=") + std::to_string(t) +
                    ": " + e.what();
      break;
    }
    log.time.push_back(t);
    log.state.push_back(X);
    log.error.push_back(E);
    log.cost_integrand.push_back(
        options.cost.Q.size() == 0 ? 0.0 : options.cost.running_cost(E, cmd.u));
    log.control.push_back(cmd.u);
    log.saturated.push_back(cmd.saturated);
    log.extras.push_back(cmd.extras);
    try {
      X = integrate_step(plant, X, cmd.u, dt, options.substeps);
    } catch (const std::exception& e) {
      log.aborted = true;
      log.failure = std::string("plant integration failed at t=") +
                    std::to_string(t) + ": " + e.what();
      break;
    }
  }
  return log;
}

namespace {

bool in_window(const TimeWindow& window, double t) {
  return std::any_of(window.begin(), window.end(), [t](const auto& w) {
    return t >= w.first && t < w.second;
  });
}

}  // namespace

Metrics compute_metrics(const TrajectoryLog& log, const TimeWindow& window,
                        double cost_horizon) {
  const int m = log.outputs;
  Metrics out;
  out.mean_abs_error_mm.assign(static_cast<std::size_t>(m), 0.0);
  out.std_abs_error_mm.assign(static_cast<std::size_t>(m), 0.0);

  std::vector<std::size_t> rows;
  for (std::size_t k = 0; k < log.size(); ++k) {
    if (in_window(window, log.time[k])) rows.push_back(k);
  }
  if (rows.empty()) throw std::invalid_argument("steady-state window is empty");
  out.window_samples = rows.size();
  const auto count = static_cast<double>(rows.size());
  for (int i = 0; i < m; ++i) {
    double sum = 0.0;
    for (auto k : rows) sum += std::abs(log.error[k](i)) * 1000.0;
    const double mean = sum / count;
    double var = 0.0;
    for (auto k : rows) {
      const double d = std::abs(log.error[k](i)) * 1000.0 - mean;
      var += d * d;
    }
    out.mean_abs_error_mm[static_cast<std::size_t>(i)] = mean;
    out.std_abs_error_mm[static_cast<std::size_t>(i)] = std::sqrt(var / count);
  }

  if (log.time.empty() || log.time.back() + 1e-12 < cost_horizon) {
    throw std::invalid_argument("log does not cover the cost horizon");
  }
  for (std::size_t k = 0; k + 1 < log.size() && log.time[k] < cost_horizon; ++k) {
    const double t1 = std::min(log.time[k + 1], cost_horizon);
    const double h = t1 - log.time[k];
    double next = log.cost_integrand[k + 1];
    if (t1 < log.time[k + 1]) {
      const double frac = h / (log.time[k + 1] - log.time[k]);
      next = log.cost_integrand[k] + frac * (next - log.cost_integrand[k]);
    }
    out.total_cost += 0.5 * h * (log.cost_integrand[k] + next);
  }

  for (const auto& u : log.control) {
    out.max_abs_control = std::max(out.max_abs_control, u.cwiseAbs().maxCoeff());
  }
  out.final_error_norm = log.error.back().head(m).norm();
  for (std::size_t k = 0; k < log.size(); ++k) {
    if (log.error[k].head(m).norm() > 1e-3) out.settling_time = log.time[k];
  }
  return out;
}

LyapunovCheck lyapunov_decrease(const TrajectoryLog& log,
                                const ValueFunction& vf, double floor) {
  LyapunovCheck check;
  for (std::size_t k = 0; k + 1 < log.size(); ++k) {
    if (log.error[k].norm() <= floor) continue;
    ++check.steps_out_of_floor;
    if (vf.value(log.error[k + 1]) < vf.value(log.error[k])) ++check.decreasing;
  }
  return check;
}

void write_log_csv(std::ostream& os, const TrajectoryLog& log) {
  const std::size_t n = log.state.empty() ? 0 : static_cast<std::size_t>(log.state.front().size());
  const auto m = static_cast<std::size_t>(log.outputs);
  os << "# adpt-trajectory v1";
  if (log.aborted) os << " aborted: " << log.failure;
  os << '\n';
  os << 't';
  for (std::size_t i = 1; i <= n; ++i) os << ",X" << i;
  for (std::size_t i = 1; i <= n; ++i) os << ",E" << i;
  for (std::size_t i = 1; i <= m; ++i) os << ",u" << i;
  for (std::size_t i = 1; i <= m; ++i) os << ",sat" << i;
  os << ",cost";
  for (const auto& name : log.extra_names) os << ',' << name;
  os << '\n';
  os << std::setprecision(12);
  for (std::size_t k = 0; k < log.size(); ++k) {
    os << log.time[k];
    for (Eigen::Index i = 0; i < log.state[k].size(); ++i) os << ',' << log.state[k](i);
    for (Eigen::Index i = 0; i < log.error[k].size(); ++i) os << ',' << log.error[k](i);
    for (Eigen::Index i = 0; i < log.control[k].size(); ++i) os << ',' << log.control[k](i);
    for (bool s : log.saturated[k]) os << ',' << (s ? 1 : 0);
    os << ',' << log.cost_integrand[k];
    for (Eigen::Index i = 0; i < log.extras[k].size(); ++i) os << ',' << log.extras[k](i);
    os << '\n';
  }
}

}  // namespace adpt
