#pragma once

#include <array>
#include <numbers>

#include <Eigen/Dense>

#include "adpt/plant.hpp"

namespace adpt {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

/// Frame: origin at the centre of the fixed platform, z pointing down
/// (gravity along +z). Leg i is mounted at Rz(leg_angle_i) [0, r_b, 0];
/// its motor angle is measured from the horizontal outward direction,
/// positive downward.
struct DeltaGeometry {
  double base_radius = 0.2;                  // r_b, m
  double platform_radius = 0.05;             // r_a, m
  std::array<double, 3> leg_angles = {std::numbers::pi, -std::numbers::pi / 3,
                                      std::numbers::pi / 3};
  double upper_arm_length = 0.2;             // l_L, m
  double forearm_length = 0.52;              // l_K, m
  double upper_arm_com_ratio = 0.3933;       // r_L
  double forearm_com_ratio = 0.5;            // r_K, measured from the elbow
  double forearm_spacing = 0.08;             // d_K, m
};

struct DeltaInertia {
  double platform_mass = 1.055;              // m_P, kg
  double motor_inertia = 0.0465475;          // I_mo, kg m^2
  double upper_arm_mass = 0.116;             // m_L, kg
  double forearm_pair_mass = 2 * 0.05788;    // m_K, kg
  double upper_arm_inertia = 6.4345319e-4;   // I_L about its COM, kg m^2
  double forearm_pair_inertia = 5.74769459e-3;  // I_K, kg m^2
  double payload = 0.0;                      // extra end-effector mass, kg
  double gravity = 9.81;                     // m/s^2
};

/// Consistent workspace and joint-space state.
struct DeltaState {
  Vector3 w;
  Vector3 w_dot;
  Vector3 q;
  Vector3 q_dot;
};

/// Terms of M(w) w_ddot + C(w, w_dot) w_dot + G(w) = J^T tau.
struct DeltaDynamics {
  Matrix3 M;
  Matrix3 C;
  Vector3 G;
  Matrix3 J;
};

/// Lumped-parameter Delta robot model in workspace coordinates.
///
/// Each forearm pair is split into a point mass r_K m_K on the platform and
/// (1 - r_K) m_K at the elbow. The platform (with payload and forearm share)
/// is a point mass; each arm is a rigid body about its motor axis with
///   I_arm = I_mo + I_L + m_L (r_L l_L)^2 + (1 - r_K) m_K l_L^2 + I_K.
/// Then M = m_eff I + J^T D J and C = J^T D J_dot with D = I_arm * I, so
/// M_dot - 2C = J_dot^T D J - J^T D J_dot is skew-symmetric.
///
/// The Jacobian maps workspace to joint rates: q_dot = J w_dot, and joint
/// torques map to platform forces through J^T.
class DeltaModel {
 public:
  static constexpr double kDefaultMaxCondition = 1e8;

  explicit DeltaModel(DeltaGeometry geometry = {}, DeltaInertia inertia = {},
                      double max_condition = kDefaultMaxCondition);

  const DeltaGeometry& geometry() const { return geometry_; }
  const DeltaInertia& inertia() const { return inertia_; }
  DeltaModel with_payload(double payload) const;
  DeltaModel without_gravity() const;

  /// Elbow-out joint angles. Throws WorkspaceError when unreachable.
  Vector3 inverse_kinematics(const Vector3& w) const;
  /// Platform position for joint angles; the solution below the elbows.
  /// Throws WorkspaceError when the forearm spheres do not intersect.
  Vector3 forward_kinematics(const Vector3& q) const;

  /// Throws SingularityError when cond(J) exceeds the bound.
  Matrix3 jacobian(const Vector3& w, const Vector3& q) const;
  Matrix3 jacobian(const DeltaState& state) const;
  /// Unchecked condition number of J at w (infinite if unreachable).
  double jacobian_condition(const Vector3& w) const;
  /// dJ/dt along w_dot.
  Matrix3 jacobian_rate(const DeltaState& state) const;

  DeltaState make_state(const Vector3& w, const Vector3& w_dot) const;

  DeltaDynamics dynamics_matrices(const DeltaState& state) const;
  /// Inverse dynamics: tau with M w_ddot + C w_dot + G = J^T tau.
  Vector3 torque_map(const DeltaState& state, const Vector3& w_ddot) const;
  /// Forward dynamics for a given torque.
  Vector3 acceleration(const DeltaState& state, const Vector3& tau) const;
  double kinetic_energy(const DeltaState& state) const;

  /// Joint-space inertia of one arm about its motor axis.
  double arm_inertia() const;
  /// Mass moving with the platform.
  double effective_platform_mass() const;

  /// p = 2, m = 3 plant on X = [w; w_dot] with
  /// f = M^-1 (-C w_dot - G), g = M^-1 J^T.
  CanonicalPlant as_canonical_plant() const;

 private:
  Vector3 radial(int leg) const;

  DeltaGeometry geometry_;
  DeltaInertia inertia_;
  double max_condition_;
};

}  // namespace adpt
