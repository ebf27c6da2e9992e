#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "adpt/controllers.hpp"
#include "adpt/errors.hpp"
#include "adpt/plants.hpp"
#include "adpt/references.hpp"

using namespace adpt;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// Equilibrium of x_dot = a x + b u under u = -(b/r_u)(P x - s).
double lqt_equilibrium(const ScalarLqtProblem& p, double r) {
  const auto sol = ScalarLqtSolution::solve(p);
  const double s = p.q * r / sol.kappa;
  const double k = p.b * p.b / p.r_u;
  return k * s / (k * sol.P - p.a);
}

}  // namespace

TEST(Saturation, ClipsAndFlags) {
  const auto cmd = saturate(vec({6.0, -2.0, -7.5}), 5.0);
  EXPECT_EQ(cmd.u, vec({5.0, -2.0, -5.0}));
  EXPECT_EQ(cmd.saturated, (std::vector<bool>{true, false, true}));
  const auto free = saturate(vec({1e9}), kNoSaturation);
  EXPECT_EQ(free.u(0), 1e9);
  EXPECT_FALSE(free.saturated[0]);
  EXPECT_THROW(saturate(vec({1.0}), 0.0), std::invalid_argument);
  EXPECT_EQ(boundary_sat(0.3), 0.3);
  EXPECT_EQ(boundary_sat(-4.0), -1.0);
}

TEST(AdpControl, ScalarExample) {
  // V = (1 + sqrt 2) E^2, x = 1, r = 2: u_s = -2, du = -P E.
  const auto plant = scalar_linear_plant(1.0, 1.0);
  const ValueFunction vf(QuadraticBasis(1), vec({1.0 + std::sqrt(2.0)}));
  const auto ref = constant_reference(1, vec({2.0}));
  const auto cmd = adp_control(vf, plant, Matrix::Identity(1, 1), vec({1.0}), ref, 0.0);
  EXPECT_NEAR(cmd.u(0), std::sqrt(2.0) - 1.0, 1e-14);
}

TEST(AdpControl, ZeroErrorGivesSteadyStateControl) {
  const auto plant = double_integrator_plant();
  const ValueFunction vf(QuadraticBasis(2), vec({2.0, std::sqrt(3.0), std::sqrt(3.0)}));
  const auto ref = sine_reference(2, vec({0.5}), 2.0);
  for (double t : {0.0, 0.4, 1.3}) {
    const auto cmd = adp_control(vf, plant, Matrix::Identity(1, 1), ref(t).state, ref, t);
    EXPECT_NEAR(cmd.u(0), ref(t).highest(0), 1e-14);
  }
}

TEST(AdpControl, ControllerChecksDimensions) {
  const auto plant = double_integrator_plant();
  EXPECT_THROW(AdpController(ValueFunction::zero(QuadraticBasis(3)), plant,
                             Matrix::Identity(1, 1), constant_reference(2, vec({0.0}))),
               DimensionError);
}

TEST(DeltaControllers, GravityCompensationAtRest) {
  DeltaModel model;
  const Vector3 home(0.0, 0.0, 0.5);
  const auto ref = constant_reference(2, home);
  Vector X = Vector::Zero(6);
  X.head(3) = home;
  const Vector3 gravity = model.torque_map(model.make_state(home, Vector3::Zero()), Vector3::Zero());
  const auto ct = ct_control(CtGains{}, model, X, ref, 0.0);
  const auto smc = smc_control(SmcGains{}, model, X, ref, 0.0);
  EXPECT_LT((ct.u - Vector(gravity)).norm(), 1e-12);
  EXPECT_LT((smc.u - Vector(gravity)).norm(), 1e-12);
  EXPECT_TRUE(smc.extras.isZero());
}

TEST(DeltaControllers, ComputedTorqueImposesErrorDynamics) {
  DeltaModel model;
  const auto ref = circle_reference(0.1, 2.0, 0.5);
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> d(-0.02, 0.02);
  const CtGains gains;
  for (int k = 0; k < 50; ++k) {
    const double t = 0.1 * k;
    const auto r = ref(t);
    Vector X = r.state;
    for (int i = 0; i < 6; ++i) X(i) += d(gen);
    const auto cmd = ct_control(gains, model, X, ref, t);
    const Vector3 e = X.head(3) - r.state.head(3);
    const Vector3 e_dot = X.tail(3) - r.state.tail(3);
    const Vector3 a = model.acceleration(model.make_state(X.head<3>(), X.tail<3>()), cmd.u);
    const Vector3 e_ddot = a - Vector3(r.highest);
    EXPECT_LT((e_ddot + gains.kd * e_dot + gains.kp * e).norm(), 1e-9);
  }
}

TEST(DeltaControllers, SlidingModeInsideBoundaryLayer) {
  DeltaModel model;
  const auto ref = constant_reference(2, Vector3(0.0, 0.0, 0.5));
  Vector X(6);
  X << 0.001, -0.002, 0.5, 0.01, 0.0, 0.0;
  const SmcGains gains;
  const auto cmd = smc_control(gains, model, X, ref, 0.0);
  const Vector3 e = X.head(3) - Vector3(0.0, 0.0, 0.5);
  const Vector3 e_dot = X.tail(3);
  const Vector3 S = e_dot + gains.lambda * e;
  EXPECT_LT((cmd.extras - Vector(S.cwiseAbs() / gains.phi)).norm(), 1e-15);
  const Vector3 a = model.acceleration(model.make_state(X.head<3>(), X.tail<3>()), cmd.u);
  EXPECT_LT((a + gains.lambda * e_dot + gains.k * S / gains.phi).norm(), 1e-9);
  SmcController c(gains, model, ref);
  EXPECT_EQ(c.extra_names().size(), 3u);
}

TEST(ScalarLqt, CounterexampleClosedForm) {
  ScalarLqtProblem p;  // a = b = q = r_u = 1, rho = 0
  const auto sol = ScalarLqtSolution::solve(p);
  EXPECT_NEAR(sol.P, 1.0 + std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(sol.kappa, std::sqrt(2.0), 1e-14);
  const auto ref = constant_reference(1, vec({2.0}));
  EXPECT_NEAR(discounted_lqt_control(p, ref, 0.0, 1.0), -1.0, 1e-14);
  EXPECT_NEAR(lqt_equilibrium(p, 2.0), 1.0, 1e-14);
}

TEST(ScalarLqt, DiscountedRiccatiResidual) {
  for (double rho : {0.0, 0.3, 1.0}) {
    ScalarLqtProblem p{0.5, 2.0, 3.0, 0.7, rho};
    const auto sol = ScalarLqtSolution::solve(p);
    const double residual = (2.0 * p.a - p.rho) * sol.P -
                            sol.P * sol.P * p.b * p.b / p.r_u + p.q;
    EXPECT_NEAR(residual, 0.0, 1e-12);
  }
}

TEST(ScalarLqt, DiscountShiftsEquilibrium) {
  ScalarLqtProblem p;
  p.rho = 0.5;
  EXPECT_NEAR(lqt_equilibrium(p, 2.0), 2.0 / (2.0 - p.rho), 1e-12);
}

TEST(ScalarLqt, LargeStateWeightApproachesReference) {
  ScalarLqtProblem p;
  p.q = 1e6;
  EXPECT_NEAR(lqt_equilibrium(p, 2.0), 2.0, 1e-2);
}

TEST(ScalarLqt, RegulationWithZeroReference) {
  ScalarLqtProblem p;
  const auto ref = constant_reference(1, vec({0.0}));
  EXPECT_NEAR(discounted_lqt_control(p, ref, 0.0, 0.7), -(1.0 + std::sqrt(2.0)) * 0.7, 1e-14);
}

TEST(ScalarLqt, FeedforwardQuadratureMatchesRamp) {
  ScalarLqtProblem p{1.0, 1.0, 1.0, 1.0, 0.0};
  const auto sol = ScalarLqtSolution::solve(p);
  const auto ramp = ramp_reference(1, vec({0.5}), vec({0.2}));
  const double t = 1.5, x = 0.3;
  // s(t) = q ((c + d t) / kappa + d / kappa^2)
  const double s = p.q * ((0.5 + 0.2 * t) / sol.kappa + 0.2 / (sol.kappa * sol.kappa));
  EXPECT_NEAR(discounted_lqt_control(p, ramp, t, x), -(sol.P * x - s), 1e-10);
}

TEST(ScalarLqt, RejectsNonStabilizingDiscount) {
  ScalarLqtProblem p;
  p.rho = 10.0;
  EXPECT_THROW(ScalarLqtSolution::solve(p), std::domain_error);
  p.rho = 0.0;
  p.r_u = 0.0;
  EXPECT_THROW(ScalarLqtSolution::solve(p), std::domain_error);
}
