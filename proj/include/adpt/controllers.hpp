#pragma once

#include <limits>
#include <string>
#include <vector>

#include "adpt/delta_robot.hpp"
#include "adpt/plant.hpp"
#include "adpt/value_function.hpp"

namespace adpt {

inline constexpr double kNoSaturation = std::numeric_limits<double>::infinity();

struct ControlCommand {
  Vector u;
  std::vector<bool> saturated;  // per channel
  Vector extras;                // controller-specific trace values
};

/// Clips each channel to [-limit, limit] and flags the clipped ones.
ControlCommand saturate(const Vector& u, double limit);

/// State-feedback law evaluated at the start of each control period.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual ControlCommand compute(const Vector& X, double t) const = 0;
  virtual std::string name() const = 0;
  /// Column names for ControlCommand::extras.
  virtual std::vector<std::string> extra_names() const { return {}; }
};

/// u = u_s + du*, with du* = -1/2 R^-1 G^T dV/dE from the trained value.
ControlCommand adp_control(const ValueFunction& vf, const CanonicalPlant& plant,
                           const Matrix& R, const Vector& X,
                           const ReferenceSignal& ref, double t,
                           double sat_limit = kNoSaturation);

struct CtGains {
  double kp = 1600.0;
  double kd = 100.0;
};

struct SmcGains {
  double k = 70.0;
  double lambda = 20.0;
  double phi = 0.35;  // boundary layer
};

/// Boundary-layer saturation: x for |x| <= 1, sign(x) otherwise.
double boundary_sat(double x);

/// tau = J^-T (C w_dot + G + M (w_ddot_d - Kd e_dot - Kp e)), e = w - w_d.
ControlCommand ct_control(const CtGains& gains, const DeltaModel& model,
                          const Vector& X, const ReferenceSignal& ref, double t,
                          double sat_limit = kNoSaturation);

/// S = e_dot + lambda e;
/// tau = J^-T (C w_dot + G + M (w_ddot_d - lambda e_dot - K sat(S / phi))).
/// extras carry |S / phi| per axis.
ControlCommand smc_control(const SmcGains& gains, const DeltaModel& model,
                           const Vector& X, const ReferenceSignal& ref, double t,
                           double sat_limit = kNoSaturation);

/// Scalar plant x_dot = a x + b u with cost
///   int exp(-rho t) (q (x - r)^2 + r_u u^2) dt.
struct ScalarLqtProblem {
  double a = 1.0;
  double b = 1.0;
  double q = 1.0;
  double r_u = 1.0;
  double rho = 0.0;
};

/// Closed-form discounted Riccati solution:
///   P = r_u / b^2 ((a - rho/2) + sqrt((a - rho/2)^2 + q b^2 / r_u)),
///   u = -(b / r_u) (P x - s(t)),
///   s(t) = q int_0^inf exp(-kappa tau) r(t + tau) dtau,
///   kappa = b^2 P / r_u - a + rho.
struct ScalarLqtSolution {
  double P = 0.0;
  double kappa = 0.0;
  double closed_loop_pole = 0.0;  // a - b^2 P / r_u

  /// Throws std::domain_error when the discounted optimum does not
  /// stabilize the plant.
  static ScalarLqtSolution solve(const ScalarLqtProblem& problem);
};

/// Exact-total-cost optimal tracking control. Constant references use the
/// closed form s = q r / kappa; other references integrate the feedforward
/// kernel numerically.
double discounted_lqt_control(const ScalarLqtProblem& problem,
                              const ReferenceSignal& ref, double t, double x);

class AdpController final : public Controller {
 public:
  AdpController(ValueFunction vf, CanonicalPlant model, Matrix R,
                ReferenceSignal ref, double sat_limit = kNoSaturation);
  ControlCommand compute(const Vector& X, double t) const override;
  std::string name() const override { return "adp"; }

 private:
  ValueFunction vf_;
  CanonicalPlant model_;
  Matrix R_;
  ReferenceSignal ref_;
  double sat_limit_;
};

class CtController final : public Controller {
 public:
  CtController(CtGains gains, DeltaModel model, ReferenceSignal ref,
               double sat_limit = kNoSaturation);
  ControlCommand compute(const Vector& X, double t) const override;
  std::string name() const override { return "ct"; }

 private:
  CtGains gains_;
  DeltaModel model_;
  ReferenceSignal ref_;
  double sat_limit_;
};

class SmcController final : public Controller {
 public:
  SmcController(SmcGains gains, DeltaModel model, ReferenceSignal ref,
                double sat_limit = kNoSaturation);
  ControlCommand compute(const Vector& X, double t) const override;
  std::string name() const override { return "smc"; }
  std::vector<std::string> extra_names() const override;

 private:
  SmcGains gains_;
  DeltaModel model_;
  ReferenceSignal ref_;
  double sat_limit_;
};

class DiscountedLqtController final : public Controller {
 public:
  DiscountedLqtController(ScalarLqtProblem problem, ReferenceSignal ref,
                          double sat_limit = kNoSaturation);
  ControlCommand compute(const Vector& X, double t) const override;
  std::string name() const override { return "discounted_lqt"; }

 private:
  ScalarLqtProblem problem_;
  ReferenceSignal ref_;
  double sat_limit_;
};

}  // namespace adpt
