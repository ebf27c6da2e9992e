#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "adpt/controllers.hpp"
#include "adpt/plant.hpp"

namespace adpt {

/// RK4 integration of the plant over dt in `substeps` equal steps with u
/// held constant (zero-order hold).
Vector integrate_step(const CanonicalPlant& plant, const Vector& X,
                      const Vector& u, double dt, int substeps);

struct SimulationOptions {
  double t_final = 10.0;
  double control_rate = 500.0;  // Hz
  int substeps = 4;
  double blowup_guard = 1e3;    // abort when |X| exceeds this
  CostWeights cost;             // for the logged cost integrand
};

/// One row per control tick, sampled before the command is applied.
struct TrajectoryLog {
  int outputs = 0;  // m
  std::vector<double> time;
  std::vector<Vector> state;
  std::vector<Vector> error;
  std::vector<Vector> control;
  std::vector<std::vector<bool>> saturated;
  std::vector<double> cost_integrand;  // E'QE + u'Ru with the total control
  std::vector<std::string> extra_names;
  std::vector<Vector> extras;
  bool aborted = false;
  std::string failure;

  std::size_t size() const { return time.size(); }
  std::size_t saturated_ticks() const;
};

/// Fixed-rate closed loop: read state, evaluate the controller, hold the
/// command for one period while integrating the plant. Controller or plant
/// failures and blow-up end the run early with `aborted` set.
TrajectoryLog run_closed_loop(const CanonicalPlant& plant,
                              const Controller& controller,
                              const ReferenceSignal& ref, const Vector& X0,
                              const SimulationOptions& options);

/// Half-open time intervals [begin, end).
using TimeWindow = std::vector<std::pair<double, double>>;

struct Metrics {
  std::vector<double> mean_abs_error_mm;  // per output axis
  std::vector<double> std_abs_error_mm;
  double total_cost = 0.0;
  double max_abs_control = 0.0;
  double final_error_norm = 0.0;
  /// Last time the position error norm left a 1 mm band; 0 if never.
  double settling_time = 0.0;
  std::size_t window_samples = 0;
};

/// Per-axis mean and population std of |e| over the window (reported in
/// mm, i.e. position units times 1000) and the trapezoidal integral of the
/// cost integrand over [0, cost_horizon].
Metrics compute_metrics(const TrajectoryLog& log, const TimeWindow& window,
                        double cost_horizon = 5.0);

/// Fraction of steps with ||E_k|| > floor where V(E_{k+1}) < V(E_k), and the
/// number of such steps.
struct LyapunovCheck {
  std::size_t steps_out_of_floor = 0;
  std::size_t decreasing = 0;
  double fraction() const {
    return steps_out_of_floor == 0
               ? 1.0
               : static_cast<double>(decreasing) / static_cast<double>(steps_out_of_floor);
  }
};

LyapunovCheck lyapunov_decrease(const TrajectoryLog& log,
                                const ValueFunction& vf, double floor = 1e-6);

/// CSV with a version comment row, then columns
/// t, X1.., E1.., u1.., sat1.., cost, extras...
void write_log_csv(std::ostream& os, const TrajectoryLog& log);

}  // namespace adpt
