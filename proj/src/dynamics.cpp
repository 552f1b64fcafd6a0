#include "synergy/dynamics.hpp"

#include <cmath>

namespace synergy {

namespace {

void require_two_link(const ArmModel& model, const char* what) {
  if (model.n_links != 2)
    throw DimensionError(std::string(what) +
                         ": closed-form dynamics implemented for 2 links");
}

}  // namespace

Eigen::Matrix2d mass_matrix(const ArmModel& model, const Eigen::Vector2d& q) {
  require_two_link(model, "mass_matrix");
  const double l1 = model.link_lengths[0];
  const double m1 = model.link_masses[0], m2 = model.link_masses[1];
  const double c1 = model.link_com_offsets[0], c2 = model.link_com_offsets[1];
  const double I1 = model.link_inertias[0], I2 = model.link_inertias[1];
  const double cos2 = std::cos(q[1]);

  Eigen::Matrix2d M;
  M(0, 0) = I1 + I2 + m1 * c1 * c1 +
            m2 * (l1 * l1 + c2 * c2 + 2.0 * l1 * c2 * cos2);
  M(0, 1) = I2 + m2 * (c2 * c2 + l1 * c2 * cos2);
  M(1, 0) = M(0, 1);
  M(1, 1) = I2 + m2 * c2 * c2;
  return M;
}

Eigen::Vector2d coriolis_forces(const ArmModel& model, const Eigen::Vector2d& q,
                                const Eigen::Vector2d& qdot) {
  require_two_link(model, "coriolis_forces");
  const double h = -model.link_masses[1] * model.link_lengths[0] *
                   model.link_com_offsets[1] * std::sin(q[1]);
  Eigen::Vector2d c;
  c[0] = h * (2.0 * qdot[0] * qdot[1] + qdot[1] * qdot[1]);
  c[1] = -h * qdot[0] * qdot[0];
  return c;
}

Eigen::Vector2d gravity_forces(const ArmModel& model, const Eigen::Vector2d& q) {
  require_two_link(model, "gravity_forces");
  if (model.gravity == 0.0) return Eigen::Vector2d::Zero();
  const double g = model.gravity;
  const double l1 = model.link_lengths[0];
  const double m1 = model.link_masses[0], m2 = model.link_masses[1];
  const double c1 = model.link_com_offsets[0], c2 = model.link_com_offsets[1];
  Eigen::Vector2d gv;
  gv[0] = (m1 * c1 + m2 * l1) * g * std::cos(q[0]) +
          m2 * c2 * g * std::cos(q[0] + q[1]);
  gv[1] = m2 * c2 * g * std::cos(q[0] + q[1]);
  return gv;
}

Eigen::Vector2d joint_accelerations(const ArmModel& model,
                                    const Eigen::Vector2d& q,
                                    const Eigen::Vector2d& qdot,
                                    const Eigen::Vector2d& u) {
  const Eigen::Matrix2d M = mass_matrix(model, q);
  const Eigen::Vector2d damping(model.joint_damping[0] * qdot[0],
                                model.joint_damping[1] * qdot[1]);
  const Eigen::Vector2d rhs =
      u - coriolis_forces(model, q, qdot) - damping - gravity_forces(model, q);
  // 2x2 symmetric PD, solve directly
  const double det = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
  Eigen::Vector2d qdd;
  qdd[0] = (M(1, 1) * rhs[0] - M(0, 1) * rhs[1]) / det;
  qdd[1] = (M(0, 0) * rhs[1] - M(1, 0) * rhs[0]) / det;
  return qdd;
}

ActuationSignal inverse_dynamics(const ArmModel& model, const Trajectory& traj) {
  require_two_link(model, "inverse_dynamics");
  if (traj.dim() != model.n_links)
    throw DimensionError("inverse_dynamics: trajectory dimension mismatch");
  const int n = traj.size();
  Eigen::MatrixXd u(n, 2);
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector2d q = traj.q(k);
    const Eigen::Vector2d qd = traj.qdot(k);
    const Eigen::Vector2d qdd = traj.qddot(k);
    const Eigen::Vector2d damping(model.joint_damping[0] * qd[0],
                                  model.joint_damping[1] * qd[1]);
    u.row(k) = (mass_matrix(model, q) * qdd + coriolis_forces(model, q, qd) +
                damping + gravity_forces(model, q))
                   .transpose();
  }
  return ActuationSignal(traj.dt(), std::move(u));
}

namespace {

// RK4 sweep shared by the trajectory and final-state entry points; qs may be
// null when only the end state is wanted.
JointState integrate_rk4(const ArmModel& model, const ActuationSignal& u,
                         const JointState& init, Eigen::MatrixXd* qs) {
  require_two_link(model, "forward_dynamics");
  if (u.dim() != model.n_links || init.q.size() != model.n_links)
    throw DimensionError("forward_dynamics: dimension mismatch");
  if (!u.samples.allFinite())
    throw std::invalid_argument("forward_dynamics: non-finite actuation");

  const int n = u.size();
  const double dt = u.dt;
  if (qs) {
    qs->resize(n, 2);
    qs->row(0) = init.q.transpose();
  }
  Eigen::Vector2d q = init.q, qd = init.qdot;

  auto accel = [&](const Eigen::Vector2d& q_, const Eigen::Vector2d& qd_,
                   const Eigen::Vector2d& u_) {
    return joint_accelerations(model, q_, qd_, u_);
  };

  // Cubic Lagrange interpolation of the torque samples through the 4-point
  // window around interval k; falls back to linear for very short signals.
  auto u_at = [&](int k, double frac) -> Eigen::Vector2d {
    if (n < 4) return (1.0 - frac) * u.u(k) + frac * u.u(k + 1);
    const int i0 = std::clamp(k - 1, 0, n - 4);
    const double x = static_cast<double>(k) + frac;
    Eigen::Vector2d out = Eigen::Vector2d::Zero();
    for (int i = 0; i < 4; ++i) {
      double w = 1.0;
      for (int j = 0; j < 4; ++j)
        if (j != i) w *= (x - (i0 + j)) / static_cast<double>(i - j);
      out += w * u.u(i0 + i);
    }
    return out;
  };

  for (int k = 0; k < n - 1; ++k) {
    const Eigen::Vector2d u0 = u.u(k);
    const Eigen::Vector2d u1 = u.u(k + 1);
    const Eigen::Vector2d uh = u_at(k, 0.5);

    const Eigen::Vector2d k1q = qd;
    const Eigen::Vector2d k1v = accel(q, qd, u0);
    const Eigen::Vector2d k2q = qd + 0.5 * dt * k1v;
    const Eigen::Vector2d k2v = accel(q + 0.5 * dt * k1q, k2q, uh);
    const Eigen::Vector2d k3q = qd + 0.5 * dt * k2v;
    const Eigen::Vector2d k3v = accel(q + 0.5 * dt * k2q, k3q, uh);
    const Eigen::Vector2d k4q = qd + dt * k3v;
    const Eigen::Vector2d k4v = accel(q + dt * k3q, k4q, u1);

    q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    qd += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

    if (!q.allFinite() || !qd.allFinite())
      throw DivergenceError(
          "forward_dynamics: non-finite state at step " + std::to_string(k + 1),
          k + 1);
    if (qs) qs->row(k + 1) = q.transpose();
  }
  return JointState(q, qd);
}

}  // namespace

Trajectory forward_dynamics(const ArmModel& model, const ActuationSignal& u,
                            const JointState& init) {
  Eigen::MatrixXd qs;
  integrate_rk4(model, u, init, &qs);
  return Trajectory(u.dt, std::move(qs));
}

JointState forward_dynamics_final_state(const ArmModel& model,
                                        const ActuationSignal& u,
                                        const JointState& init) {
  return integrate_rk4(model, u, init, nullptr);
}

Eigen::Vector2d forward_kinematics(const ArmModel& model,
                                   const Eigen::VectorXd& q) {
  if (q.size() != model.n_links)
    throw DimensionError("forward_kinematics: dimension mismatch");
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  double angle = 0.0;
  for (int i = 0; i < model.n_links; ++i) {
    angle += q[i];
    p.x() += model.link_lengths[i] * std::cos(angle);
    p.y() += model.link_lengths[i] * std::sin(angle);
  }
  return p;
}

Eigen::Matrix<double, 2, Eigen::Dynamic> ee_jacobian(const ArmModel& model,
                                                     const Eigen::VectorXd& q) {
  if (q.size() != model.n_links)
    throw DimensionError("ee_jacobian: dimension mismatch");
  const int n = model.n_links;
  Eigen::Matrix<double, 2, Eigen::Dynamic> J(2, n);
  J.setZero();
  // column j accumulates the links distal to joint j
  double angle = 0.0;
  std::vector<double> cum(n);
  for (int i = 0; i < n; ++i) {
    angle += q[i];
    cum[i] = angle;
  }
  for (int j = 0; j < n; ++j) {
    double jx = 0.0, jy = 0.0;
    for (int i = j; i < n; ++i) {
      jx -= model.link_lengths[i] * std::sin(cum[i]);
      jy += model.link_lengths[i] * std::cos(cum[i]);
    }
    J(0, j) = jx;
    J(1, j) = jy;
  }
  return J;
}

Eigen::Vector2d inverse_kinematics(const ArmModel& model,
                                   const Eigen::Vector2d& p,
                                   ElbowBranch branch) {
  require_two_link(model, "inverse_kinematics");
  const double l1 = model.link_lengths[0], l2 = model.link_lengths[1];
  const double r = p.norm();
  const WorkspaceAnnulus ws = workspace_boundary(model);
  const double tol = 1e-9;
  if (r > ws.r_max + tol)
    throw ReachabilityError("inverse_kinematics: point beyond outer boundary",
                            r - ws.r_max);
  if (r < ws.r_min - tol)
    throw ReachabilityError("inverse_kinematics: point inside inner boundary",
                            ws.r_min - r);

  double c2 = (r * r - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
  c2 = std::clamp(c2, -1.0, 1.0);
  const double sign = (branch == ElbowBranch::up) ? 1.0 : -1.0;
  const double q2 = sign * std::acos(c2);
  const double q1 = std::atan2(p.y(), p.x()) -
                    std::atan2(l2 * std::sin(q2), l1 + l2 * std::cos(q2));
  return Eigen::Vector2d(q1, q2);
}

WorkspaceAnnulus workspace_boundary(const ArmModel& model) {
  require_two_link(model, "workspace_boundary");
  const double l1 = model.link_lengths[0], l2 = model.link_lengths[1];
  return WorkspaceAnnulus{std::abs(l1 - l2), l1 + l2};
}

double kinetic_energy(const ArmModel& model, const Eigen::Vector2d& q,
                      const Eigen::Vector2d& qdot) {
  return 0.5 * qdot.dot(mass_matrix(model, q) * qdot);
}

}  // namespace synergy
