#include "adpt/delta_robot.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "adpt/errors.hpp"

namespace adpt {

namespace {

const Vector3 kDown = Vector3::UnitZ();

struct LegTerms {
  Vector3 arm;        // a(theta): unit vector along the upper arm
  Vector3 arm_rate;   // da/dtheta
  Vector3 forearm;    // s: elbow to platform joint, |s| = l_K
  double denominator; // l_L s . da/dtheta
};

}  // namespace

DeltaModel::DeltaModel(DeltaGeometry geometry, DeltaInertia inertia,
                       double max_condition)
    : geometry_(geometry), inertia_(inertia), max_condition_(max_condition) {
  const auto& g = geometry_;
  if (!(g.base_radius > 0 && g.platform_radius > 0 && g.upper_arm_length > 0 &&
        g.forearm_length > 0)) {
    throw std::invalid_argument("Delta lengths must be positive");
  }
  const auto& i = inertia_;
  if (i.platform_mass < 0 || i.motor_inertia < 0 || i.upper_arm_mass < 0 ||
      i.forearm_pair_mass < 0 || i.upper_arm_inertia < 0 ||
      i.forearm_pair_inertia < 0 || i.payload < 0 || i.gravity < 0) {
    throw std::invalid_argument("Delta inertial parameters must be nonnegative");
  }
  if (arm_inertia() <= 0.0 || effective_platform_mass() <= 0.0) {
    throw std::invalid_argument("Delta model needs positive inertia");
  }
}

DeltaModel DeltaModel::with_payload(double payload) const {
  DeltaInertia i = inertia_;
  i.payload = payload;
  return DeltaModel(geometry_, i, max_condition_);
}

DeltaModel DeltaModel::without_gravity() const {
  DeltaInertia i = inertia_;
  i.gravity = 0.0;
  return DeltaModel(geometry_, i, max_condition_);
}

Vector3 DeltaModel::radial(int leg) const {
  const double phi = geometry_.leg_angles[static_cast<std::size_t>(leg)];
  return {-std::sin(phi), std::cos(phi), 0.0};
}

Vector3 DeltaModel::inverse_kinematics(const Vector3& w) const {
  const auto& g = geometry_;
  Vector3 q;
  for (int i = 0; i < 3; ++i) {
    const Vector3 u = radial(i);
    const Vector3 d = w + (g.platform_radius - g.base_radius) * u;
    const double a = 2.0 * g.upper_arm_length * d.dot(u);
    const double b = 2.0 * g.upper_arm_length * d.z();
    const double c = d.squaredNorm() + g.upper_arm_length * g.upper_arm_length -
                     g.forearm_length * g.forearm_length;
    const double rho = std::hypot(a, b);
    if (!(rho > 0.0) || std::abs(c) > rho) {
      throw WorkspaceError("position out of workspace for leg " +
                           std::to_string(i + 1));
    }
    q(i) = std::atan2(b, a) - std::acos(c / rho);
  }
  return q;
}

Vector3 DeltaModel::forward_kinematics(const Vector3& q) const {
  const auto& g = geometry_;
  std::array<Vector3, 3> centre;
  for (int i = 0; i < 3; ++i) {
    const Vector3 u = radial(i);
    const Vector3 arm = std::cos(q(i)) * u + std::sin(q(i)) * kDown;
    centre[static_cast<std::size_t>(i)] =
        (g.base_radius - g.platform_radius) * u + g.upper_arm_length * arm;
  }
  const Vector3 ab = centre[1] - centre[0];
  const Vector3 ac = centre[2] - centre[0];
  const Vector3 normal = ab.cross(ac);
  const double nn = normal.squaredNorm();
  if (!(nn > 0.0)) throw WorkspaceError("degenerate elbow configuration");
  const Vector3 offset =
      (ac.squaredNorm() * normal.cross(ab) + ab.squaredNorm() * ac.cross(normal)) /
      (2.0 * nn);
  const double h2 =
      g.forearm_length * g.forearm_length - offset.squaredNorm();
  if (h2 < 0.0) throw WorkspaceError("forearm spheres do not intersect");
  Vector3 n = normal / std::sqrt(nn);
  if (n.z() < 0.0) n = -n;
  return centre[0] + offset + std::sqrt(h2) * n;
}

namespace {

LegTerms leg_terms(const DeltaGeometry& g, const Vector3& u, const Vector3& w,
                   double theta) {
  LegTerms t;
  t.arm = std::cos(theta) * u + std::sin(theta) * kDown;
  t.arm_rate = -std::sin(theta) * u + std::cos(theta) * kDown;
  const Vector3 d = w + (g.platform_radius - g.base_radius) * u;
  t.forearm = d - g.upper_arm_length * t.arm;
  t.denominator = g.upper_arm_length * t.forearm.dot(t.arm_rate);
  return t;
}

}  // namespace

Matrix3 DeltaModel::jacobian(const Vector3& w, const Vector3& q) const {
  Matrix3 J;
  for (int i = 0; i < 3; ++i) {
    const LegTerms t = leg_terms(geometry_, radial(i), w, q(i));
    if (t.denominator == 0.0) {
      throw SingularityError("Delta Jacobian singular: arm aligned with forearm");
    }
    J.row(i) = t.forearm.transpose() / t.denominator;
  }
  const double cond = condition_number(J);
  if (!(cond <= max_condition_)) {
    throw SingularityError("Delta Jacobian condition number " +
                           std::to_string(cond) + " exceeds bound");
  }
  return J;
}

Matrix3 DeltaModel::jacobian(const DeltaState& state) const {
  return jacobian(state.w, state.q);
}

double DeltaModel::jacobian_condition(const Vector3& w) const {
  try {
    const Vector3 q = inverse_kinematics(w);
    Matrix3 J;
    for (int i = 0; i < 3; ++i) {
      const LegTerms t = leg_terms(geometry_, radial(i), w, q(i));
      J.row(i) = t.forearm.transpose() / t.denominator;
    }
    return J.allFinite() ? condition_number(J)
                         : std::numeric_limits<double>::infinity();
  } catch (const WorkspaceError&) {
    return std::numeric_limits<double>::infinity();
  }
}

Matrix3 DeltaModel::jacobian_rate(const DeltaState& state) const {
  const auto& g = geometry_;
  Matrix3 J_dot;
  for (int i = 0; i < 3; ++i) {
    const LegTerms t = leg_terms(g, radial(i), state.w, state.q(i));
    const double theta_dot = state.q_dot(i);
    const Vector3 s_dot = state.w_dot - g.upper_arm_length * t.arm_rate * theta_dot;
    const double den_dot =
        g.upper_arm_length *
        (s_dot.dot(t.arm_rate) - t.forearm.dot(t.arm) * theta_dot);
    J_dot.row(i) = s_dot.transpose() / t.denominator -
                   t.forearm.transpose() * den_dot /
                       (t.denominator * t.denominator);
  }
  return J_dot;
}

DeltaState DeltaModel::make_state(const Vector3& w, const Vector3& w_dot) const {
  DeltaState s;
  s.w = w;
  s.w_dot = w_dot;
  s.q = inverse_kinematics(w);
  s.q_dot = jacobian(w, s.q) * w_dot;
  return s;
}

double DeltaModel::arm_inertia() const {
  const auto& g = geometry_;
  const auto& i = inertia_;
  const double com = g.upper_arm_com_ratio * g.upper_arm_length;
  return i.motor_inertia + i.upper_arm_inertia + i.upper_arm_mass * com * com +
         (1.0 - g.forearm_com_ratio) * i.forearm_pair_mass *
             g.upper_arm_length * g.upper_arm_length +
         i.forearm_pair_inertia;
}

double DeltaModel::effective_platform_mass() const {
  return inertia_.platform_mass + inertia_.payload +
         3.0 * geometry_.forearm_com_ratio * inertia_.forearm_pair_mass;
}

DeltaDynamics DeltaModel::dynamics_matrices(const DeltaState& state) const {
  const auto& g = geometry_;
  const auto& in = inertia_;
  DeltaDynamics dyn;
  dyn.J = jacobian(state);
  const double d = arm_inertia();
  const double m = effective_platform_mass();
  dyn.M = m * Matrix3::Identity() + d * dyn.J.transpose() * dyn.J;
  dyn.C = d * dyn.J.transpose() * jacobian_rate(state);
  const double arm_moment =
      in.upper_arm_mass * g.upper_arm_com_ratio * g.upper_arm_length +
      (1.0 - g.forearm_com_ratio) * in.forearm_pair_mass * g.upper_arm_length;
  Vector3 joint_gravity;
  for (int i = 0; i < 3; ++i) {
    joint_gravity(i) = -arm_moment * in.gravity * std::cos(state.q(i));
  }
  dyn.G = -m * in.gravity * kDown + dyn.J.transpose() * joint_gravity;
  return dyn;
}

Vector3 DeltaModel::torque_map(const DeltaState& state,
                               const Vector3& w_ddot) const {
  const DeltaDynamics dyn = dynamics_matrices(state);
  return dyn.J.transpose().partialPivLu().solve(dyn.M * w_ddot +
                                                dyn.C * state.w_dot + dyn.G);
}

Vector3 DeltaModel::acceleration(const DeltaState& state,
                                 const Vector3& tau) const {
  const DeltaDynamics dyn = dynamics_matrices(state);
  return dyn.M.llt().solve(dyn.J.transpose() * tau - dyn.C * state.w_dot -
                           dyn.G);
}

double DeltaModel::kinetic_energy(const DeltaState& state) const {
  const DeltaDynamics dyn = dynamics_matrices(state);
  return 0.5 * state.w_dot.dot(dyn.M * state.w_dot);
}

CanonicalPlant DeltaModel::as_canonical_plant() const {
  const DeltaModel model = *this;
  return CanonicalPlant(
      2, 3,
      [model](const Vector& X) {
        const DeltaState s =
            model.make_state(X.head<3>(), X.tail<3>());
        const DeltaDynamics dyn = model.dynamics_matrices(s);
        const auto llt = dyn.M.llt();
        AffineTerms t;
        t.drift = llt.solve(-dyn.C * s.w_dot - dyn.G);
        t.input_gain = llt.solve(dyn.J.transpose());
        return t;
      },
      max_condition_);
}

}  // namespace adpt
