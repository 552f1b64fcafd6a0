#pragma once

#include "synergy/dynamics.hpp"
#include "synergy/types.hpp"

namespace synergy {

// Rest-to-rest point-to-point reaching task.
struct ReachingTask {
  Eigen::VectorXd q0;
  Eigen::VectorXd q0dot;
  Eigen::VectorXd qT;
  Eigen::VectorXd qTdot;
  double T = 0.0;

  static ReachingTask rest_to_rest(const Eigen::VectorXd& q0,
                                   const Eigen::VectorXd& qT, double T);
  void validate() const;  // enforces rest-to-rest and T > 0
};

struct ErrorReport {
  double err_I = 0.0;     // interpolation error [rad, rad/s mixed]
  double err_P = 0.0;     // projection error [N m s^1/2]
  double err_F = 0.0;     // forward-dynamics error, joint space
  double err_F_ee = 0.0;  // forward-dynamics error, end-effector space
};

enum class ErrorSpace { joint, end_effector };

// sqrt(||qT - q(T)||^2 + ||qdot(T)||^2), position differences wrapped to
// (-pi, pi].
double interpolation_error(const ReachingTask& task,
                           const Trajectory& interpolant);

// sqrt of the trapezoidal integral of ||u_target - u_realized||^2 over [0,T].
double projection_error(const ActuationSignal& u_target,
                        const ActuationSignal& u_realized);

// Final-state error of a realized trajectory against the task, in joint or
// end-effector coordinates (positions via FK, velocities via the Jacobian
// at the realized final posture).
double forward_dynamics_error(const ReachingTask& task,
                              const Trajectory& realized, ErrorSpace space,
                              const ArmModel& model);

}  // namespace synergy
