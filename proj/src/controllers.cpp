#include "adpt/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "adpt/errors.hpp"

namespace adpt {

ControlCommand saturate(const Vector& u, double limit) {
  ControlCommand cmd;
  cmd.u = u;
  cmd.saturated.assign(static_cast<std::size_t>(u.size()), false);
  if (!(limit > 0.0)) throw std::invalid_argument("saturation limit must be positive");
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > limit) {
      cmd.u(i) = std::copysign(limit, u(i));
      cmd.saturated[static_cast<std::size_t>(i)] = true;
    }
  }
  return cmd;
}

ControlCommand adp_control(const ValueFunction& vf, const CanonicalPlant& plant,
                           const Matrix& R, const Vector& X,
                           const ReferenceSignal& ref, double t,
                           double sat_limit) {
  const ReferenceSample r = ref(t);
  const Vector E = X - r.state;
  const AffineTerms at_state = plant.terms(X);
  const AffineTerms at_ref = plant.terms(r.state);
  const auto lu = at_state.input_gain.partialPivLu();
  const Vector steady = lu.solve(r.highest - at_ref.drift);
  const int m = plant.inputs();
  const Vector transient =
      -0.5 * R.llt().solve(at_state.input_gain.transpose() *
                           vf.gradient(E).tail(m));
  return saturate(steady + transient, sat_limit);
}

double boundary_sat(double x) { return std::clamp(x, -1.0, 1.0); }

namespace {

struct DeltaErrors {
  DeltaState state;
  Vector3 e;
  Vector3 e_dot;
  Vector3 w_ddot_d;
};

DeltaErrors delta_errors(const DeltaModel& model, const Vector& X,
                         const ReferenceSignal& ref, double t) {
  if (X.size() != 6 || ref.state_dim() != 6) {
    throw DimensionError("Delta controllers need 6-dimensional state and reference");
  }
  const ReferenceSample r = ref(t);
  DeltaErrors out;
  out.state = model.make_state(X.head<3>(), X.tail<3>());
  out.e = X.head<3>() - r.state.head<3>();
  out.e_dot = X.tail<3>() - r.state.tail<3>();
  out.w_ddot_d = r.highest;
  return out;
}

Vector3 computed_torque(const DeltaModel& model, const DeltaState& state,
                        const Vector3& accel) {
  const DeltaDynamics dyn = model.dynamics_matrices(state);
  return dyn.J.transpose().partialPivLu().solve(dyn.C * state.w_dot + dyn.G +
                                                dyn.M * accel);
}

}  // namespace

ControlCommand ct_control(const CtGains& gains, const DeltaModel& model,
                          const Vector& X, const ReferenceSignal& ref, double t,
                          double sat_limit) {
  const DeltaErrors d = delta_errors(model, X, ref, t);
  const Vector3 accel = d.w_ddot_d - gains.kd * d.e_dot - gains.kp * d.e;
  return saturate(computed_torque(model, d.state, accel), sat_limit);
}

ControlCommand smc_control(const SmcGains& gains, const DeltaModel& model,
                           const Vector& X, const ReferenceSignal& ref, double t,
                           double sat_limit) {
  if (!(gains.k > 0 && gains.lambda > 0 && gains.phi > 0)) {
    throw std::invalid_argument("sliding mode gains must be positive");
  }
  const DeltaErrors d = delta_errors(model, X, ref, t);
  const Vector3 surface = d.e_dot + gains.lambda * d.e;
  Vector3 switching;
  Vector3 ratio;
  for (int i = 0; i < 3; ++i) {
    ratio(i) = surface(i) / gains.phi;
    switching(i) = boundary_sat(ratio(i));
  }
  const Vector3 accel =
      d.w_ddot_d - gains.lambda * d.e_dot - gains.k * switching;
  ControlCommand cmd =
      saturate(computed_torque(model, d.state, accel), sat_limit);
  cmd.extras = ratio.cwiseAbs();
  return cmd;
}

ScalarLqtSolution ScalarLqtSolution::solve(const ScalarLqtProblem& p) {
  if (!(p.r_u > 0.0) || !(p.q >= 0.0) || !(p.rho >= 0.0) || p.b == 0.0) {
    throw std::domain_error("scalar LQT needs r_u > 0, q >= 0, rho >= 0, b != 0");
  }
  const double shifted = p.a - 0.5 * p.rho;
  const double gain_sq = p.b * p.b / p.r_u;
  ScalarLqtSolution s;
  s.P = (shifted + std::sqrt(shifted * shifted + p.q * gain_sq)) / gain_sq;
  s.kappa = gain_sq * s.P - p.a + p.rho;
  s.closed_loop_pole = p.a - gain_sq * s.P;
  if (!(s.closed_loop_pole < 0.0)) {
    throw std::domain_error(
        "discounted LQT optimum is not stabilizing for this q and rho");
  }
  return s;
}

double discounted_lqt_control(const ScalarLqtProblem& problem,
                              const ReferenceSignal& ref, double t, double x) {
  if (ref.state_dim() != 1) throw DimensionError("scalar LQT needs a scalar reference");
  const ScalarLqtSolution sol = ScalarLqtSolution::solve(problem);
  double feedforward = 0.0;
  if (ref.is_constant()) {
    feedforward = problem.q * ref(t).state(0) / sol.kappa;
  } else {
    // Composite Simpson over [0, 40 / kappa]; the kernel tail is e^-40.
    constexpr int kIntervals = 4000;
    const double span = 40.0 / sol.kappa;
    const double h = span / kIntervals;
    double sum = 0.0;
    for (int i = 0; i <= kIntervals; ++i) {
      const double tau = i * h;
      const double weight = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += weight * std::exp(-sol.kappa * tau) * ref(t + tau).state(0);
    }
    feedforward = problem.q * sum * h / 3.0;
  }
  return -(problem.b / problem.r_u) * (sol.P * x - feedforward);
}

AdpController::AdpController(ValueFunction vf, CanonicalPlant model, Matrix R,
                             ReferenceSignal ref, double sat_limit)
    : vf_(std::move(vf)),
      model_(std::move(model)),
      R_(std::move(R)),
      ref_(std::move(ref)),
      sat_limit_(sat_limit) {
  if (vf_.basis().dim() != model_.state_dim() ||
      ref_.state_dim() != model_.state_dim() ||
      R_.rows() != model_.inputs() || R_.cols() != model_.inputs()) {
    throw DimensionError("ADP controller parts have inconsistent dimensions");
  }
}

ControlCommand AdpController::compute(const Vector& X, double t) const {
  return adp_control(vf_, model_, R_, X, ref_, t, sat_limit_);
}

CtController::CtController(CtGains gains, DeltaModel model, ReferenceSignal ref,
                           double sat_limit)
    : gains_(gains), model_(std::move(model)), ref_(std::move(ref)), sat_limit_(sat_limit) {
  if (!(gains_.kp > 0 && gains_.kd > 0)) {
    throw std::invalid_argument("computed torque gains must be positive");
  }
}

ControlCommand CtController::compute(const Vector& X, double t) const {
  return ct_control(gains_, model_, X, ref_, t, sat_limit_);
}

SmcController::SmcController(SmcGains gains, DeltaModel model,
                             ReferenceSignal ref, double sat_limit)
    : gains_(gains), model_(std::move(model)), ref_(std::move(ref)), sat_limit_(sat_limit) {
  if (!(gains_.k > 0 && gains_.lambda > 0 && gains_.phi > 0)) {
    throw std::invalid_argument("sliding mode gains must be positive");
  }
}

ControlCommand SmcController::compute(const Vector& X, double t) const {
  return smc_control(gains_, model_, X, ref_, t, sat_limit_);
}

std::vector<std::string> SmcController::extra_names() const {
  return {"abs_s_over_phi_x", "abs_s_over_phi_y", "abs_s_over_phi_z"};
}

DiscountedLqtController::DiscountedLqtController(ScalarLqtProblem problem,
                                                 ReferenceSignal ref,
                                                 double sat_limit)
    : problem_(problem), ref_(std::move(ref)), sat_limit_(sat_limit) {
  ScalarLqtSolution::solve(problem_);
}

ControlCommand DiscountedLqtController::compute(const Vector& X, double t) const {
  if (X.size() != 1) throw DimensionError("scalar LQT needs a scalar state");
  return saturate(Vector::Constant(1, discounted_lqt_control(problem_, ref_, t, X(0))),
                  sat_limit_);
}

}  // namespace adpt
