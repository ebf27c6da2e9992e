#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "adpt/delta_robot.hpp"
#include "adpt/errors.hpp"
#include "adpt/references.hpp"
#include "adpt/simulation.hpp"

using namespace adpt;

namespace {

Vector3 random_workspace_point(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> xy(-0.15, 0.15);
  std::uniform_real_distribution<double> z(0.4, 0.6);
  return {xy(gen), xy(gen), z(gen)};
}

Vector3 random_velocity(std::mt19937_64& gen, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  return {d(gen), d(gen), d(gen)};
}

Vector3 home() { return {0.0, 0.0, 0.5}; }

}  // namespace

TEST(DeltaKinematics, ElbowToPlatformDistanceIsForearmLength) {
  // Rebuild each elbow from the mounting geometry and check the closure
  // constraint directly.
  DeltaModel model;
  const auto& g = model.geometry();
  std::mt19937_64 gen(1);
  for (int k = 0; k < 200; ++k) {
    const Vector3 w = random_workspace_point(gen);
    const Vector3 q = model.inverse_kinematics(w);
    for (int i = 0; i < 3; ++i) {
      const double phi = g.leg_angles[static_cast<std::size_t>(i)];
      const Vector3 out(-std::sin(phi), std::cos(phi), 0.0);
      const Vector3 shoulder = g.base_radius * out;
      const Vector3 elbow = shoulder + g.upper_arm_length *
                                           (std::cos(q(i)) * out + Vector3::UnitZ() * std::sin(q(i)));
      const Vector3 joint = w + g.platform_radius * out;
      EXPECT_NEAR((joint - elbow).norm(), g.forearm_length, 1e-12);
      // Elbow-out branch: the elbow lies outside the shoulder radius.
      EXPECT_GT(elbow.dot(out), g.base_radius);
    }
  }
}

TEST(DeltaKinematics, ForwardInverseRoundTrip) {
  DeltaModel model;
  std::mt19937_64 gen(2);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Vector3 w = random_workspace_point(gen);
    const Vector3 back = model.forward_kinematics(model.inverse_kinematics(w));
    worst = std::max(worst, (back - w).norm());
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(DeltaKinematics, HomeIsSymmetric) {
  DeltaModel model;
  const Vector3 q = model.inverse_kinematics(home());
  EXPECT_NEAR(q(0), q(1), 1e-12);
  EXPECT_NEAR(q(1), q(2), 1e-12);
  EXPECT_GT(q(0), 0.0);  // arms point below the horizontal
}

TEST(DeltaKinematics, UnreachablePointsThrow) {
  DeltaModel model;
  EXPECT_THROW(model.inverse_kinematics(Vector3(0.0, 0.0, 0.9)), WorkspaceError);
  EXPECT_THROW(model.inverse_kinematics(Vector3(0.6, 0.0, 0.3)), WorkspaceError);
  EXPECT_TRUE(std::isinf(model.jacobian_condition(Vector3(0.0, 0.0, 0.9))));
}

TEST(DeltaKinematics, JacobianMatchesFiniteDifferences) {
  DeltaModel model;
  std::mt19937_64 gen(3);
  const double h = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Vector3 w = random_workspace_point(gen);
    const Matrix3 J = model.jacobian(w, model.inverse_kinematics(w));
    Matrix3 fd;
    for (int j = 0; j < 3; ++j) {
      Vector3 wp = w, wm = w;
      wp(j) += h;
      wm(j) -= h;
      fd.col(j) = (model.inverse_kinematics(wp) - model.inverse_kinematics(wm)) / (2 * h);
    }
    worst = std::max(worst, (fd - J).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(DeltaKinematics, JacobianRateMatchesFiniteDifferences) {
  DeltaModel model;
  std::mt19937_64 gen(4);
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    const Vector3 w = random_workspace_point(gen);
    const Vector3 v = random_velocity(gen, 1.0);
    const DeltaState s = model.make_state(w, v);
    const Vector3 wp = w + h * v, wm = w - h * v;
    const Matrix3 fd = (model.jacobian(wp, model.inverse_kinematics(wp)) -
                        model.jacobian(wm, model.inverse_kinematics(wm))) /
                       (2 * h);
    EXPECT_LT((fd - model.jacobian_rate(s)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(DeltaKinematics, ConditionNumberGrowsNearReachLimit) {
  DeltaModel model;
  // Bisect the reach limit along +x at z = 0.5.
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (std::isinf(model.jacobian_condition(Vector3(mid, 0.0, 0.5))) ? hi : lo) = mid;
  }
  const Vector3 edge(lo, 0.0, 0.5);
  EXPECT_GT(model.jacobian_condition(edge), 1e6);
  const DeltaModel strict(DeltaGeometry{}, DeltaInertia{}, 1e5);
  EXPECT_THROW(strict.jacobian(edge, strict.inverse_kinematics(edge)), SingularityError);
  EXPECT_LT(model.jacobian_condition(home()), 10.0);
}

TEST(DeltaDynamics, MassMatrixIsSymmetricPositiveDefinite) {
  DeltaModel model;
  std::mt19937_64 gen(5);
  for (int k = 0; k < 1000; ++k) {
    const DeltaState s = model.make_state(random_workspace_point(gen), random_velocity(gen, 1.0));
    const Matrix3 M = model.dynamics_matrices(s).M;
    EXPECT_LT((M - M.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix3> es(M);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(DeltaDynamics, MassRateMinusTwoCoriolisIsSkew) {
  DeltaModel model;
  std::mt19937_64 gen(6);
  const double h = 1e-4;
  const auto mass = [&](const Vector3& w) {
    return model.dynamics_matrices(model.make_state(w, Vector3::Zero())).M;
  };
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Vector3 w = random_workspace_point(gen);
    const Vector3 v = random_velocity(gen, 1.0);
    const DeltaState s = model.make_state(w, v);
    const DeltaDynamics dyn = model.dynamics_matrices(s);
    // Fourth-order central difference along the velocity.
    const Matrix3 M_dot = (8.0 * (mass(w + h * v) - mass(w - h * v)) -
                           (mass(w + 2 * h * v) - mass(w - 2 * h * v))) /
                          (12 * h);
    const Matrix3 N = M_dot - 2.0 * dyn.C;
    worst = std::max(worst, (N + N.transpose()).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(DeltaDynamics, EnergyConservedWithoutGravityOrTorque) {
  const DeltaModel model = DeltaModel().without_gravity();
  const CanonicalPlant plant = model.as_canonical_plant();
  Vector X(6);
  X << 0.02, -0.03, 0.5, 0.12, 0.08, -0.05;
  const auto energy = [&](const Vector& x) {
    return model.kinetic_energy(model.make_state(x.head<3>(), x.tail<3>()));
  };
  const double e0 = energy(X);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    X = integrate_step(plant, X, Vector::Zero(3), 1e-3, 4);
    worst = std::max(worst, std::abs(energy(X) - e0) / e0);
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(DeltaDynamics, GravityTorqueMatchesVirtualWork) {
  // Static torque from the potential energy written in joint coordinates,
  // differentiated numerically through forward kinematics.
  DeltaModel model;
  const auto& g = model.geometry();
  const auto& in = model.inertia();
  const double arm_moment = in.upper_arm_mass * g.upper_arm_com_ratio * g.upper_arm_length +
                            (1.0 - g.forearm_com_ratio) * in.forearm_pair_mass * g.upper_arm_length;
  const double m = model.effective_platform_mass();
  const auto potential = [&](const Vector3& q) {
    double U = -m * in.gravity * model.forward_kinematics(q).z();
    for (int i = 0; i < 3; ++i) U -= arm_moment * in.gravity * std::sin(q(i));
    return U;
  };
  std::mt19937_64 gen(7);
  for (int k = 0; k < 20; ++k) {
    const Vector3 w = random_workspace_point(gen);
    const Vector3 q = model.inverse_kinematics(w);
    Vector3 expected;
    const double h = 1e-6;
    for (int i = 0; i < 3; ++i) {
      Vector3 qp = q, qm = q;
      qp(i) += h;
      qm(i) -= h;
      expected(i) = (potential(qp) - potential(qm)) / (2 * h);
    }
    const Vector3 tau = model.torque_map(model.make_state(w, Vector3::Zero()), Vector3::Zero());
    EXPECT_LT((tau - expected).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(DeltaDynamics, GravityCompensationEqualAtHome) {
  DeltaModel model;
  const Vector3 tau = model.torque_map(model.make_state(home(), Vector3::Zero()), Vector3::Zero());
  EXPECT_NEAR(tau(0), tau(1), 1e-12);
  EXPECT_NEAR(tau(1), tau(2), 1e-12);
  EXPECT_LT(tau(0), 0.0);  // holds the arms up
  const Vector3 heavier = model.with_payload(1.0).torque_map(
      model.make_state(home(), Vector3::Zero()), Vector3::Zero());
  EXPECT_LT(heavier(0), tau(0));
}

TEST(DeltaDynamics, FreeFallAcceleratesDownward) {
  DeltaModel model;
  const Vector3 a = model.acceleration(model.make_state(home(), Vector3::Zero()), Vector3::Zero());
  EXPECT_GT(a.z(), 0.0);
  EXPECT_LT(a.z(), model.inertia().gravity);
  EXPECT_NEAR(a.x(), 0.0, 1e-12);
  EXPECT_NEAR(a.y(), 0.0, 1e-12);
}

TEST(DeltaDynamics, TorqueMapInvertsAcceleration) {
  DeltaModel model;
  std::mt19937_64 gen(8);
  for (int k = 0; k < 100; ++k) {
    const DeltaState s = model.make_state(random_workspace_point(gen), random_velocity(gen, 1.0));
    const Vector3 tau = random_velocity(gen, 3.0);
    const Vector3 a = model.acceleration(s, tau);
    EXPECT_LT((model.torque_map(s, a) - tau).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(DeltaDynamics, CanonicalFormMatchesModel) {
  DeltaModel model;
  const CanonicalPlant plant = model.as_canonical_plant();
  Vector X(6);
  X << 0.05, -0.02, 0.48, 0.3, -0.1, 0.2;
  Vector u(3);
  u << 0.5, -1.0, 0.2;
  const Vector Xdot = companion_lift(plant, X, u);
  const Vector3 a = model.acceleration(model.make_state(X.head<3>(), X.tail<3>()), u);
  EXPECT_LT((Xdot.head(3) - X.tail(3)).norm(), 1e-15);
  EXPECT_LT((Xdot.tail(3) - a).norm(), 1e-12);
}

TEST(DeltaDynamics, CircleFeedforwardStaysBelowTorqueLimit) {
  DeltaModel model;
  const auto ref = circle_reference(0.25, std::numbers::pi, 0.5);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto s = ref(k * 0.002);
    const Vector3 tau = model.torque_map(
        model.make_state(s.state.head<3>(), s.state.tail<3>()), s.highest);
    worst = std::max(worst, tau.cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 5.0);
}
