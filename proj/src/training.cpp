#include "adpt/training.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "adpt/errors.hpp"
#include "parallel.hpp"
#include "random.hpp"

namespace adpt {

namespace {

constexpr std::uint64_t kHoldoutSeedOffset = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kResampleSeedOffset = 0xD1B54A32D192ED03ULL;

void check_box(const Vector& lo, const Vector& hi, int n, const char* what) {
  if (lo.size() != n || hi.size() != n) {
    throw DimensionError(std::string(what) + " bounds must have length " +
                         std::to_string(n));
  }
  if (!lo.allFinite() || !hi.allFinite() || (hi - lo).minCoeff() < 0.0) {
    throw std::invalid_argument(std::string(what) +
                                " bounds must be finite and ordered");
  }
}

Matrix feature_matrix(const QuadraticBasis& basis,
                      const std::vector<SamplePair>& pairs) {
  Matrix phi(static_cast<Eigen::Index>(pairs.size()), basis.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    phi.row(static_cast<Eigen::Index>(k)) = basis.eval(pairs[k].error);
  }
  return phi;
}

// Fixed-step RK4 rollout of the error dynamics under feedback from vf, with
// the running cost integrated alongside.
double bellman_target(const ValueFunction& vf, const CanonicalPlant& plant,
                      const SamplePair& pair, const TrainingConfig& config,
                      const Vector* offset) {
  const int n = plant.state_dim();
  const int m = plant.inputs();
  const Matrix& Q = config.cost.Q;
  const Matrix& R = config.cost.R;
  const Eigen::LLT<Matrix> r_llt(R);
  const Vector& Xd = pair.reference;
  const Vector fd = plant.terms(Xd).drift;

  auto rhs = [&](const Vector& E, double& cost_rate) {
    const AffineTerms t = plant.terms(E + Xd);
    const Vector grad = vf.gradient(E);
    Vector du = -0.5 * r_llt.solve(t.input_gain.transpose() * grad.tail(m));
    if (offset != nullptr) du += *offset;
    Vector Edot(n);
    Edot.head(n - m) = E.tail(n - m);
    Edot.tail(m) = t.drift - fd + t.input_gain * du;
    cost_rate = E.dot(Q * E) + du.dot(R * du);
    return Edot;
  };

  const double h = config.delta_T / config.substeps;
  Vector E = pair.error;
  double cost = 0.0;
  for (int s = 0; s < config.substeps; ++s) {
    double c1, c2, c3, c4;
    const Vector k1 = rhs(E, c1);
    const Vector k2 = rhs(E + 0.5 * h * k1, c2);
    const Vector k3 = rhs(E + 0.5 * h * k2, c3);
    const Vector k4 = rhs(E + h * k3, c4);
    E += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    cost += h / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
  }
  return cost + vf.value(E);
}

}  // namespace

void TrainingConfig::validate(const CanonicalPlant& plant) const {
  const int n = plant.state_dim();
  const int m = plant.inputs();
  if (cost.Q.rows() != n || cost.Q.cols() != n || cost.R.rows() != m ||
      cost.R.cols() != m) {
    throw DimensionError("Q must be n x n and R m x m for this plant");
  }
  check_box(roi.error_lower, roi.error_upper, n, "error ROI");
  check_box(roi.reference_lower, roi.reference_upper, n, "reference ROI");
  if (!(delta_T > 0.0)) throw std::invalid_argument("delta_T must be positive");
  if (substeps < 1) throw std::invalid_argument("substeps must be positive");
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("threshold must be positive");
  }
  if (max_iterations < 1 || n_runs < 1 || holdout_samples < 0) {
    throw std::invalid_argument("iteration, run and holdout counts invalid");
  }
  if (!(ls_regularization >= 0.0)) {
    throw std::invalid_argument("ls_regularization must be nonnegative");
  }
  const int terms = basis(n).size();
  if (n_samples < terms) {
    throw std::invalid_argument("n_samples (" + std::to_string(n_samples) +
                                ") must be at least the basis size (" +
                                std::to_string(terms) + ")");
  }
}

SampleSet sample_roi(const TrainingConfig& config, const CanonicalPlant& plant,
                     std::uint64_t seed) {
  const int n = plant.state_dim();
  check_box(config.roi.error_lower, config.roi.error_upper, n, "error ROI");
  check_box(config.roi.reference_lower, config.roi.reference_upper, n,
            "reference ROI");
  std::mt19937_64 gen(seed);
  const auto& roi = config.roi;
  const long cap = 100L * config.n_samples + 1000L;
  long attempts = 0;
  SampleSet set;
  set.pairs.reserve(static_cast<std::size_t>(config.n_samples));
  while (static_cast<int>(set.pairs.size()) < config.n_samples) {
    if (++attempts > cap) {
      throw TrainingError(
          "ROI sampling exceeded the retry cap: too few regular states");
    }
    SamplePair p{Vector(n), Vector(n)};
    for (int i = 0; i < n; ++i) {
      p.reference(i) = detail::uniform(gen, roi.reference_lower(i),
                                       roi.reference_upper(i));
    }
    for (int i = 0; i < n; ++i) {
      p.error(i) =
          detail::uniform(gen, roi.error_lower(i), roi.error_upper(i));
    }
    if (!plant.is_regular(p.reference) ||
        !plant.is_regular(p.error + p.reference)) {
      continue;
    }
    set.pairs.push_back(std::move(p));
  }
  set.features = feature_matrix(config.basis(n), set.pairs);
  return set;
}

SampleSet sample_roi(const TrainingConfig& config, const CanonicalPlant& plant) {
  return sample_roi(config, plant, config.seed);
}

Vector transient_control(const ValueFunction& vf, const CanonicalPlant& plant,
                         const Vector& E, const Vector& X_d, const Matrix& R) {
  plant.check_state(E);
  plant.check_state(X_d);
  const int m = plant.inputs();
  const Matrix g = plant.terms(E + X_d).input_gain;
  const Vector grad = vf.gradient(E);
  return -0.5 * R.llt().solve(g.transpose() * grad.tail(m));
}

double vi_target(const ValueFunction& vf_i, const CanonicalPlant& plant,
                 const SamplePair& pair, const TrainingConfig& config) {
  return bellman_target(vf_i, plant, pair, config, nullptr);
}

double vi_target(const ValueFunction& vf_i, const CanonicalPlant& plant,
                 const SamplePair& pair, const TrainingConfig& config,
                 const Vector& control_offset) {
  plant.check_control(control_offset);
  return bellman_target(vf_i, plant, pair, config, &control_offset);
}

Vector least_squares_update(const Matrix& features, const Vector& targets,
                            double reg, double max_condition) {
  if (features.rows() != targets.size()) {
    throw DimensionError("feature rows and target count differ");
  }
  if (features.rows() < features.cols()) {
    throw DimensionError("fewer samples than basis terms");
  }
  const Eigen::Index k = features.cols();
  Matrix normal = features.transpose() * features;
  normal.diagonal().array() += reg;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(normal, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(k - 1);
  if (!(lo > 0.0) || hi / lo > max_condition) {
    throw SingularityError("least-squares normal matrix condition " +
                           std::to_string(lo > 0.0 ? hi / lo : INFINITY) +
                           " exceeds " + std::to_string(max_condition));
  }
  return normal.ldlt().solve(features.transpose() * targets);
}

double hjb_residual(const ValueFunction& vf, const CanonicalPlant& plant,
                    const SamplePair& pair, const CostWeights& cost) {
  const Vector& E = pair.error;
  const Vector& Xd = pair.reference;
  const int n = plant.state_dim();
  const int m = plant.inputs();
  const AffineTerms actual = plant.terms(E + Xd);
  const AffineTerms desired = plant.terms(Xd);
  const Vector grad = vf.gradient(E);
  const Vector du =
      -0.5 * cost.R.llt().solve(actual.input_gain.transpose() * grad.tail(m));
  const double flow =
      grad.head(n - m).dot(E.tail(n - m)) +
      grad.tail(m).dot(actual.drift - desired.drift + actual.input_gain * du);
  return flow + cost.running_cost(E, du);
}

ResidualStats holdout_statistics(const ValueFunction& vf,
                                 const CanonicalPlant& plant,
                                 const TrainingConfig& config,
                                 const SampleSet& holdout) {
  ResidualStats stats;
  const auto count = holdout.pairs.size();
  if (count == 0) return stats;
  std::vector<double> residual(count), running(count), gap(count);
  detail::parallel_for(static_cast<int>(count), config.jobs, [&](int i) {
    const auto& p = holdout.pairs[static_cast<std::size_t>(i)];
    residual[i] = hjb_residual(vf, plant, p, config.cost);
    const Vector du =
        transient_control(vf, plant, p.error, p.reference, config.cost.R);
    running[i] = config.cost.running_cost(p.error, du);
    gap[i] = std::abs(vi_target(vf, plant, p, config) - vf.value(p.error));
  });
  for (std::size_t i = 0; i < count; ++i) {
    stats.mean_abs += std::abs(residual[i]);
    stats.max_abs = std::max(stats.max_abs, std::abs(residual[i]));
    stats.mean_running_cost += running[i];
    stats.mean_fixed_point_gap += gap[i];
  }
  stats.mean_abs /= static_cast<double>(count);
  stats.mean_running_cost /= static_cast<double>(count);
  stats.mean_fixed_point_gap /= static_cast<double>(count);
  return stats;
}

TrainingReport train(const CanonicalPlant& plant, const TrainingConfig& config) {
  return train(plant, config, config.seed);
}

TrainingReport train(const CanonicalPlant& plant, const TrainingConfig& config,
                     std::uint64_t seed) {
  config.validate(plant);
  const int n = plant.state_dim();
  const QuadraticBasis basis = config.basis(n);

  TrainingReport report;
  report.basis = basis;
  report.seed = seed;

  SampleSet samples = sample_roi(config, plant, seed);
  const int count = static_cast<int>(samples.pairs.size());
  Vector W = Vector::Zero(basis.size());
  Vector previous = Vector::Zero(count);
  double previous_residual = 0.0;
  Vector targets(count);

  for (int it = 1; it <= config.max_iterations; ++it) {
    if (config.resample_each_iteration && it > 1) {
      samples = sample_roi(config, plant,
                           seed + kResampleSeedOffset * static_cast<std::uint64_t>(it));
      previous = samples.features * W;
    }
    const ValueFunction vf(basis, W);
    try {
      detail::parallel_for(count, config.jobs, [&](int k) {
        targets(k) = vi_target(vf, plant,
                               samples.pairs[static_cast<std::size_t>(k)], config);
      });
    } catch (const std::runtime_error& e) {
      throw TrainingError("iteration " + std::to_string(it) +
                          ": rollout failed: " + e.what());
    }
    const Vector next = least_squares_update(
        samples.features, targets, config.ls_regularization,
        config.max_normal_condition);
    const Vector fitted = samples.features * next;
    const double residual = (fitted - targets).cwiseAbs().maxCoeff();
    for (int k = 0; k < count; ++k) {
      const double slack =
          residual + previous_residual +
          config.monotonicity_tolerance * std::max(1.0, std::abs(previous(k)));
      if (fitted(k) < previous(k) - slack) ++report.monotonicity_violations;
    }
    const double delta = (next - W).cwiseAbs().maxCoeff();
    if (!std::isfinite(delta)) {
      throw TrainingError("value iteration diverged at iteration " +
                          std::to_string(it));
    }
    report.weight_history.push_back(delta);
    report.ls_residual_history.push_back(residual);
    report.iterations = it;
    W = next;
    previous = fitted;
    previous_residual = residual;
    if (delta < config.threshold) {
      report.converged = true;
      break;
    }
  }
  report.final_weights = W;

  if (config.holdout_samples > 0) {
    TrainingConfig holdout_config = config;
    holdout_config.n_samples = config.holdout_samples;
    const SampleSet holdout =
        sample_roi(holdout_config, plant, seed + kHoldoutSeedOffset);
    report.hjb_residual = holdout_statistics(report.value_function(), plant,
                                             config, holdout);
  }
  return report;
}

std::vector<TrainingReport> train_runs(const CanonicalPlant& plant,
                                       const TrainingConfig& config) {
  std::vector<TrainingReport> runs;
  runs.reserve(static_cast<std::size_t>(config.n_runs));
  for (int r = 0; r < config.n_runs; ++r) {
    runs.push_back(train(plant, config, config.seed + static_cast<std::uint64_t>(r)));
  }
  return runs;
}

AveragedWeights average_weights(const std::vector<TrainingReport>& runs) {
  if (runs.empty()) throw std::invalid_argument("no training runs to average");
  const QuadraticBasis& basis = runs.front().basis;
  AveragedWeights out;
  out.basis = basis;
  out.mean = Vector::Zero(basis.size());
  for (const auto& r : runs) {
    if (!(r.basis == basis) || r.final_weights.size() != basis.size()) {
      throw DimensionError("training runs use different bases");
    }
    out.mean += r.final_weights;
  }
  const auto count = static_cast<double>(runs.size());
  out.mean /= count;
  out.stddev = Vector::Zero(basis.size());
  if (runs.size() > 1) {
    for (const auto& r : runs) {
      out.stddev += (r.final_weights - out.mean).cwiseAbs2();
    }
    out.stddev = (out.stddev / (count - 1.0)).cwiseSqrt();
  }
  return out;
}

}  // namespace adpt
