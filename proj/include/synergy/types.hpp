#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace synergy {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when an end-effector point lies outside the reachable annulus.
struct ReachabilityError : std::runtime_error {
  double deficit;  // distance [m] by which the point misses the annulus
  ReachabilityError(const std::string& msg, double deficit_)
      : std::runtime_error(msg), deficit(deficit_) {}
};

// Non-finite state encountered during forward integration.
struct DivergenceError : std::runtime_error {
  int step;  // index of the failing time step
  DivergenceError(const std::string& msg, int step_)
      : std::runtime_error(msg), step(step_) {}
};

// No admissible grid target left when trying to add a proto-task.
struct SaturationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Proto-task whose kinematic solution exceeds the interpolation threshold.
struct ProtoTaskRejectedError : std::runtime_error {
  double err_i;
  ProtoTaskRejectedError(const std::string& msg, double err_i_)
      : std::runtime_error(msg), err_i(err_i_) {}
};

// ---------------------------------------------------------------------------
// Arm model
// ---------------------------------------------------------------------------

// Physical parameters of a planar serial chain with revolute joints.
// Units: lengths/offsets [m], masses [kg], inertias [kg m^2] (about the
// link center of mass), damping [N m s/rad], gravity [m/s^2] in -y.
struct ArmModel {
  int n_links = 0;
  std::vector<double> link_lengths;
  std::vector<double> link_masses;
  std::vector<double> link_com_offsets;
  std::vector<double> link_inertias;
  std::vector<double> joint_damping;
  double gravity = 0.0;

  // Validates parameter ranges; throws std::invalid_argument on violation.
  void validate() const;

  // Default anthropometric-ish 2-link arm used by the experiments.
  static ArmModel two_link_default();

  // FNV-1a hash of the canonicalized parameters, hex-encoded.
  std::string fingerprint() const;
};

struct JointState {
  Eigen::VectorXd q;     // joint angles [rad], unwrapped
  Eigen::VectorXd qdot;  // joint velocities [rad/s]

  JointState() = default;
  JointState(Eigen::VectorXd q_, Eigen::VectorXd qdot_);

  static JointState rest(const Eigen::VectorXd& q_) {
    return JointState(q_, Eigen::VectorXd::Zero(q_.size()));
  }
};

// ---------------------------------------------------------------------------
// Sampled signals
// ---------------------------------------------------------------------------

// Time-discretized joint-space path. Velocities and accelerations are
// derived from the samples by 2nd-order finite differences (central in the
// interior, one-sided at the ends) so that they are always recomputable
// from the positions alone.
class Trajectory {
 public:
  // samples: N x dim matrix, row k = q(k*dt). Requires N >= 2, dt > 0.
  Trajectory(double dt, Eigen::MatrixXd samples);

  double dt() const { return dt_; }
  int size() const { return static_cast<int>(positions_.rows()); }
  int dim() const { return static_cast<int>(positions_.cols()); }
  double duration() const { return dt_ * (size() - 1); }

  const Eigen::MatrixXd& positions() const { return positions_; }
  const Eigen::MatrixXd& velocities() const { return velocities_; }
  const Eigen::MatrixXd& accelerations() const { return accelerations_; }

  Eigen::VectorXd q(int k) const { return positions_.row(k).transpose(); }
  Eigen::VectorXd qdot(int k) const { return velocities_.row(k).transpose(); }
  Eigen::VectorXd qddot(int k) const { return accelerations_.row(k).transpose(); }

  JointState final_state() const {
    return JointState(q(size() - 1), qdot(size() - 1));
  }

  // The finite-difference scheme, exposed so callers can recheck the
  // derived sequences against the samples.
  static Eigen::MatrixXd finite_difference(const Eigen::MatrixXd& samples,
                                           double dt, int order);

 private:
  double dt_;
  Eigen::MatrixXd positions_;
  Eigen::MatrixXd velocities_;
  Eigen::MatrixXd accelerations_;
};

// Time-discretized joint-torque signal u(t) [N m]; synergies are these.
struct ActuationSignal {
  double dt = 0.0;
  Eigen::MatrixXd samples;  // N x dim, row k = u(k*dt)

  ActuationSignal() = default;
  ActuationSignal(double dt_, Eigen::MatrixXd samples_);

  int size() const { return static_cast<int>(samples.rows()); }
  int dim() const { return static_cast<int>(samples.cols()); }
  double duration() const { return dt * (size() - 1); }
  Eigen::VectorXd u(int k) const { return samples.row(k).transpose(); }
};

// ---------------------------------------------------------------------------
// Small angle helpers
// ---------------------------------------------------------------------------

// Maps an angle difference to (-pi, pi].
double wrap_angle(double x);
Eigen::VectorXd wrap_angles(const Eigen::VectorXd& x);

}  // namespace synergy
