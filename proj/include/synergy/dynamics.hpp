#pragma once

#include <utility>

#include "synergy/types.hpp"

namespace synergy {

enum class ElbowBranch { up, down };

struct WorkspaceAnnulus {
  double r_min = 0.0;
  double r_max = 0.0;
};

// Closed-form 2-link planar dynamics terms. The general N-link recursion is
// an internal extension point; every entry point below rejects n_links != 2.
Eigen::Matrix2d mass_matrix(const ArmModel& model, const Eigen::Vector2d& q);
Eigen::Vector2d coriolis_forces(const ArmModel& model, const Eigen::Vector2d& q,
                                const Eigen::Vector2d& qdot);
Eigen::Vector2d gravity_forces(const ArmModel& model, const Eigen::Vector2d& q);

// Joint accelerations from state and torque: qdd = M^-1 (u - C - B qd - g).
Eigen::Vector2d joint_accelerations(const ArmModel& model,
                                    const Eigen::Vector2d& q,
                                    const Eigen::Vector2d& qdot,
                                    const Eigen::Vector2d& u);

// D(q(t)) = u(t): torque required to follow traj, sampled at its N instants.
// Velocities/accelerations come from the trajectory's finite differences.
ActuationSignal inverse_dynamics(const ArmModel& model, const Trajectory& traj);

// Integrates the equations of motion under u from init with fixed-step
// classical RK4; torque is interpolated linearly between samples. The output
// is sampled at the same N instants as u.
Trajectory forward_dynamics(const ArmModel& model, const ActuationSignal& u,
                            const JointState& init);

// Exact integrator state at t = T (Trajectory velocities are re-derived by
// finite differences; use this where that resolution is not enough).
JointState forward_dynamics_final_state(const ArmModel& model,
                                        const ActuationSignal& u,
                                        const JointState& init);

// End-effector position for any N-link chain (cumulative link angles).
Eigen::Vector2d forward_kinematics(const ArmModel& model,
                                   const Eigen::VectorXd& q);

// End-effector Jacobian d(x,y)/dq.
Eigen::Matrix<double, 2, Eigen::Dynamic> ee_jacobian(const ArmModel& model,
                                                     const Eigen::VectorXd& q);

// 2-link closed-form inverse kinematics; branch picks the elbow sign
// (elbow-down: q2 <= 0). Throws ReachabilityError outside the annulus.
Eigen::Vector2d inverse_kinematics(const ArmModel& model,
                                   const Eigen::Vector2d& p, ElbowBranch branch);

WorkspaceAnnulus workspace_boundary(const ArmModel& model);

// Total kinetic energy 0.5 qd^T M qd.
double kinetic_energy(const ArmModel& model, const Eigen::Vector2d& q,
                      const Eigen::Vector2d& qdot);

}  // namespace synergy
