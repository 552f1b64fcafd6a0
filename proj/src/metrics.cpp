#include "synergy/metrics.hpp"

#include <cmath>

namespace synergy {

ReachingTask ReachingTask::rest_to_rest(const Eigen::VectorXd& q0,
                                        const Eigen::VectorXd& qT, double T) {
  ReachingTask t;
  t.q0 = q0;
  t.q0dot = Eigen::VectorXd::Zero(q0.size());
  t.qT = qT;
  t.qTdot = Eigen::VectorXd::Zero(qT.size());
  t.T = T;
  t.validate();
  return t;
}

void ReachingTask::validate() const {
  if (q0.size() != qT.size() || q0.size() != q0dot.size() ||
      qT.size() != qTdot.size())
    throw DimensionError("ReachingTask: inconsistent dimensions");
  if (!(T > 0.0)) throw std::invalid_argument("ReachingTask: T must be > 0");
  if (q0dot.norm() != 0.0 || qTdot.norm() != 0.0)
    throw std::invalid_argument(
        "ReachingTask: only rest-to-rest tasks are supported");
}

double interpolation_error(const ReachingTask& task,
                           const Trajectory& interpolant) {
  if (interpolant.dim() != task.qT.size())
    throw DimensionError("interpolation_error: dimension mismatch");
  const int last = interpolant.size() - 1;
  const Eigen::VectorXd dq =
      wrap_angles(task.qT - interpolant.q(last));
  const Eigen::VectorXd dv = interpolant.qdot(last);
  return std::sqrt(dq.squaredNorm() + dv.squaredNorm());
}

double projection_error(const ActuationSignal& u_target,
                        const ActuationSignal& u_realized) {
  if (u_target.size() != u_realized.size() ||
      u_target.dim() != u_realized.dim() || u_target.dt != u_realized.dt)
    throw DimensionError("projection_error: signal discretizations differ");
  const int n = u_target.size();
  double integral = 0.0;
  double prev = (u_target.u(0) - u_realized.u(0)).squaredNorm();
  for (int k = 1; k < n; ++k) {
    const double cur = (u_target.u(k) - u_realized.u(k)).squaredNorm();
    integral += 0.5 * (prev + cur) * u_target.dt;
    prev = cur;
  }
  return std::sqrt(integral);
}

double forward_dynamics_error(const ReachingTask& task,
                              const Trajectory& realized, ErrorSpace space,
                              const ArmModel& model) {
  if (realized.dim() != task.qT.size())
    throw DimensionError("forward_dynamics_error: dimension mismatch");
  const int last = realized.size() - 1;
  const Eigen::VectorXd q_end = realized.q(last);
  const Eigen::VectorXd qd_end = realized.qdot(last);
  if (space == ErrorSpace::joint) {
    const Eigen::VectorXd dq = wrap_angles(q_end - task.qT);
    const Eigen::VectorXd dv = qd_end - task.qTdot;
    return std::sqrt(dq.squaredNorm() + dv.squaredNorm());
  }
  const Eigen::Vector2d p_end = forward_kinematics(model, q_end);
  const Eigen::Vector2d p_task = forward_kinematics(model, task.qT);
  const Eigen::Vector2d v_end = ee_jacobian(model, q_end) * qd_end;
  const Eigen::Vector2d v_task = ee_jacobian(model, task.qT) * task.qTdot;
  return std::sqrt((p_end - p_task).squaredNorm() +
                   (v_end - v_task).squaredNorm());
}

}  // namespace synergy
