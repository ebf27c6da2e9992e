#pragma once

#include <cstdint>
#include <vector>

#include "adpt/plant.hpp"
#include "adpt/value_function.hpp"

namespace adpt {

/// Per-component sampling box for the error and for the reference state.
struct RegionOfInterest {
  Vector error_lower;
  Vector error_upper;
  Vector reference_lower;
  Vector reference_upper;
};

struct TrainingConfig {
  CostWeights cost;
  RegionOfInterest roi;
  double delta_T = 0.01;           // Bellman horizon, s
  int substeps = 4;                // RK4 steps per horizon
  int n_samples = 500;
  int n_runs = 10;
  double threshold = 1e-6;         // max |W_{i+1} - W_i| at convergence
  int max_iterations = 5000;
  std::uint64_t seed = 1;
  double ls_regularization = 1e-10;
  double max_normal_condition = 1e12;
  int holdout_samples = 200;
  bool resample_each_iteration = false;
  /// Relative slack added to the LS residuals in the monotonicity check.
  double monotonicity_tolerance = 1e-9;
  /// Diagonal input scaling for the basis; empty means unscaled.
  Vector basis_scale;
  /// Worker threads for the Bellman targets. Results do not depend on it.
  int jobs = 1;

  QuadraticBasis basis(int dim) const { return QuadraticBasis(dim, basis_scale); }
  /// Throws std::invalid_argument or DimensionError.
  void validate(const CanonicalPlant& plant) const;
};

struct SamplePair {
  Vector error;      // E
  Vector reference;  // X_d
};

struct SampleSet {
  std::vector<SamplePair> pairs;
  Matrix features;  // row k is phi(E_k)
};

struct ResidualStats {
  double mean_abs = 0.0;
  double max_abs = 0.0;
  double mean_running_cost = 0.0;
  /// Mean |target(E) - V(E)| over the same holdout.
  double mean_fixed_point_gap = 0.0;
};

struct TrainingReport {
  QuadraticBasis basis{1};
  Vector final_weights;
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  std::vector<double> weight_history;  // max |delta W| per iteration
  std::vector<double> ls_residual_history;  // max |fit - target| per iteration
  int monotonicity_violations = 0;
  ResidualStats hjb_residual;

  ValueFunction value_function() const { return {basis, final_weights}; }
};

/// Uniform draws inside the ROI, redrawn where the plant is not regular at
/// E + X_d or X_d. Deterministic for a given seed.
SampleSet sample_roi(const TrainingConfig& config, const CanonicalPlant& plant,
                     std::uint64_t seed);
SampleSet sample_roi(const TrainingConfig& config, const CanonicalPlant& plant);

/// du = -1/2 R^-1 G(E + X_d)^T dV/dE.
Vector transient_control(const ValueFunction& vf, const CanonicalPlant& plant,
                         const Vector& E, const Vector& X_d,
                         const Matrix& R);

/// Integral value-iteration target
///   int_0^dT (E'QE + du'R du) dt + V_i(E(dT))
/// with X_d held and du fed back from V_i along the rollout. A constant
/// control_offset is added to du when given (used by optimality probes).
double vi_target(const ValueFunction& vf_i, const CanonicalPlant& plant,
                 const SamplePair& pair, const TrainingConfig& config);
double vi_target(const ValueFunction& vf_i, const CanonicalPlant& plant,
                 const SamplePair& pair, const TrainingConfig& config,
                 const Vector& control_offset);

/// argmin_W sum_k (W'phi_k - target_k)^2 + reg |W|^2 via the normal
/// equations. Throws SingularityError when the normal matrix condition
/// exceeds max_condition (or is singular).
Vector least_squares_update(const Matrix& features, const Vector& targets,
                            double reg, double max_condition = 1e12);

/// One full value-iteration training from V_0 = 0 using config.seed.
TrainingReport train(const CanonicalPlant& plant, const TrainingConfig& config);
TrainingReport train(const CanonicalPlant& plant, const TrainingConfig& config,
                     std::uint64_t seed);

/// config.n_runs independent trainings with seeds seed, seed + 1, ...
std::vector<TrainingReport> train_runs(const CanonicalPlant& plant,
                                       const TrainingConfig& config);

struct AveragedWeights {
  QuadraticBasis basis{1};
  Vector mean;
  Vector stddev;  // sample standard deviation, zero for a single run

  ValueFunction value_function() const { return {basis, mean}; }
};

AveragedWeights average_weights(const std::vector<TrainingReport>& runs);

/// V_E'(F - F_d + G du*) + E'QE + du*'R du* at one (E, X_d).
double hjb_residual(const ValueFunction& vf, const CanonicalPlant& plant,
                    const SamplePair& pair, const CostWeights& cost);

ResidualStats holdout_statistics(const ValueFunction& vf,
                                 const CanonicalPlant& plant,
                                 const TrainingConfig& config,
                                 const SampleSet& holdout);

}  // namespace adpt
