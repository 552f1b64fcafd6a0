#include "synergy/solver.hpp"

#include <cmath>

#include "synergy/dynamics.hpp"

namespace synergy {

namespace {

Eigen::VectorXd stack_time_major(const Eigen::MatrixXd& samples) {
  const int n = static_cast<int>(samples.rows());
  const int d = static_cast<int>(samples.cols());
  Eigen::VectorXd v(n * d);
  for (int k = 0; k < n; ++k)
    v.segment(k * d, d) = samples.row(k).transpose();
  return v;
}

}  // namespace

BasisSet::BasisSet(std::vector<ActuationSignal> synergies,
                   std::vector<Trajectory> responses, JointState initial_state)
    : synergies_(std::move(synergies)),
      responses_(std::move(responses)),
      initial_state_(std::move(initial_state)) {
  if (synergies_.empty() || synergies_.size() != responses_.size())
    throw DimensionError("BasisSet: synergies and responses must pair up");
  const int n = responses_.front().size();
  const int d = responses_.front().dim();
  const double dt = responses_.front().dt();
  for (std::size_t i = 0; i < synergies_.size(); ++i) {
    if (synergies_[i].size() != n || synergies_[i].dim() != d ||
        synergies_[i].dt != dt || responses_[i].size() != n ||
        responses_[i].dim() != d || responses_[i].dt() != dt)
      throw DimensionError("BasisSet: mismatched discretization at element " +
                           std::to_string(i));
  }
  if (initial_state_.q.size() != d)
    throw DimensionError("BasisSet: initial state dimension mismatch");

  const int n_basis = static_cast<int>(synergies_.size());
  phi_.resize(n * d, n_basis);
  end_constraints_.resize(2 * d, n_basis);
  for (int i = 0; i < n_basis; ++i) {
    phi_.col(i) = stack_time_major(synergies_[i].samples);
    end_constraints_.col(i).head(d) =
        responses_[i].q(n - 1) - initial_state_.q;
    end_constraints_.col(i).tail(d) = responses_[i].qdot(n - 1);
  }
  phi_svd_.compute(phi_, Eigen::ComputeThinU | Eigen::ComputeThinV);

  // Equilibrate rows, but never amplify a row that is roundoff-level
  // relative to the largest one (e.g. end velocities of rest-to-rest
  // responses): those rows carry no information worth enforcing.
  end_row_scale_.resize(2 * d);
  double max_row = 0.0;
  for (int r = 0; r < 2 * d; ++r)
    max_row = std::max(max_row, end_constraints_.row(r).norm());
  const double floor = 1e-7 * max_row;
  for (int r = 0; r < 2 * d; ++r) {
    const double nrm = std::max(end_constraints_.row(r).norm(), floor);
    end_row_scale_[r] = nrm > 0.0 ? 1.0 / nrm : 1.0;
  }
  end_svd_.compute(end_row_scale_.asDiagonal() * end_constraints_,
                   Eigen::ComputeThinU | Eigen::ComputeThinV);
}

Eigen::VectorXd pinv_solve(const Eigen::BDCSVD<Eigen::MatrixXd>& svd,
                           const Eigen::VectorXd& rhs, double rel_cutoff) {
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? rel_cutoff * s(0) : 0.0;
  Eigen::VectorXd proj = svd.matrixU().transpose() * rhs;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    proj[i] = (s[i] > cutoff) ? proj[i] / s[i] : 0.0;
  return svd.matrixV() * proj;
}

CombinatorVector solve_kinematic(const BasisSet& basis,
                                 const ReachingTask& task) {
  task.validate();
  const int d = basis.dim();
  if (task.q0.size() != d)
    throw DimensionError("solve_kinematic: task dimension mismatch");
  if ((task.q0 - basis.initial_state().q).lpNorm<Eigen::Infinity>() > 1e-9)
    throw std::invalid_argument(
        "solve_kinematic: task must start at the basis initial posture");
  if (std::abs(task.T - basis.duration()) > 1e-9)
    throw std::invalid_argument(
        "solve_kinematic: task duration must match basis discretization");

  Eigen::VectorXd rhs(2 * d);
  rhs.head(d) = task.qT - task.q0;
  rhs.tail(d).setZero();

  const Eigen::VectorXd rhs_scaled = basis.end_row_scale().cwiseProduct(rhs);
  CombinatorVector a;
  a.kind = CombinatorKind::kinematic_a;
  a.coefficients = pinv_solve(basis.end_constraint_svd(), rhs_scaled);
  // a few steps of iterative refinement tighten the residual toward eps
  const Eigen::MatrixXd& A = basis.end_constraint_matrix();
  auto residual = [&](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(
        basis.end_row_scale().cwiseProduct(rhs - A * x));
  };
  double prev_res = residual(a.coefficients).norm();
  for (int it = 0; it < 4 && prev_res > 1e-15; ++it) {
    const Eigen::VectorXd da =
        pinv_solve(basis.end_constraint_svd(), residual(a.coefficients));
    const Eigen::VectorXd cand = a.coefficients + da;
    const double next_res = residual(cand).norm();
    if (next_res >= prev_res) break;
    a.coefficients = cand;
    prev_res = next_res;
  }

  const Eigen::VectorXd& s = basis.end_constraint_svd().singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > kSvdCutoff * s(0)) ++rank;
  a.rank_deficient = rank < 2 * d;
  return a;
}

Trajectory combine_responses(const BasisSet& basis, const CombinatorVector& a) {
  if (a.coefficients.size() != basis.size())
    throw DimensionError("combine_responses: coefficient count mismatch");
  const Eigen::RowVectorXd q0 = basis.initial_state().q.transpose();
  Eigen::MatrixXd samples =
      q0.replicate(basis.n_samples(), 1);
  for (int i = 0; i < basis.size(); ++i)
    samples += a.coefficients[i] *
               (basis.response(i).positions().rowwise() - q0);
  return Trajectory(basis.dt(), std::move(samples));
}

ActuationSignal combine_synergies(const BasisSet& basis,
                                  const CombinatorVector& b) {
  if (b.coefficients.size() != basis.size())
    throw DimensionError("combine_synergies: coefficient count mismatch");
  Eigen::MatrixXd samples =
      Eigen::MatrixXd::Zero(basis.n_samples(), basis.dim());
  for (int i = 0; i < basis.size(); ++i)
    samples += b.coefficients[i] * basis.synergy(i).samples;
  return ActuationSignal(basis.dt(), std::move(samples));
}

ActuationSignal compute_task_actuation(const ArmModel& model,
                                       const BasisSet& basis,
                                       const CombinatorVector& a) {
  if (a.kind != CombinatorKind::kinematic_a)
    throw std::invalid_argument(
        "compute_task_actuation: expected kinematic combinators");
  return inverse_dynamics(model, combine_responses(basis, a));
}

CombinatorVector project_onto_synergies(const BasisSet& basis,
                                        const ActuationSignal& u_target) {
  if (u_target.size() != basis.n_samples() || u_target.dim() != basis.dim() ||
      u_target.dt != basis.dt())
    throw DimensionError("project_onto_synergies: discretization mismatch");
  CombinatorVector b;
  b.kind = CombinatorKind::synergy_b;
  b.coefficients =
      pinv_solve(basis.synergy_svd(), stack_time_major(u_target.samples));
  return b;
}

CombinatorVector map_M(const ArmModel& model, const BasisSet& basis,
                       const CombinatorVector& a) {
  return project_onto_synergies(basis,
                                compute_task_actuation(model, basis, a));
}

TaskSolution solve_task(const ArmModel& model, const BasisSet& basis,
                        const ReachingTask& task) {
  CombinatorVector a = solve_kinematic(basis, task);
  Trajectory interpolant = combine_responses(basis, a);
  ActuationSignal u_target = inverse_dynamics(model, interpolant);
  CombinatorVector b = project_onto_synergies(basis, u_target);
  ActuationSignal u_realized = combine_synergies(basis, b);
  Trajectory realized =
      forward_dynamics(model, u_realized, basis.initial_state());

  ErrorReport errors;
  // evaluate the final-state mismatch through the end-constraint columns:
  // algebraically identical to differentiating the combined trajectory, but
  // avoids the 1/dt roundoff amplification of endpoint finite differences
  const int d = basis.dim();
  const Eigen::VectorXd end =
      basis.end_constraint_matrix() * a.coefficients;  // [q(T)-q0; qdot(T)]
  const Eigen::VectorXd dq =
      wrap_angles(task.qT - basis.initial_state().q - end.head(d));
  errors.err_I = std::sqrt(dq.squaredNorm() + end.tail(d).squaredNorm());
  errors.err_P = projection_error(u_target, u_realized);
  errors.err_F = forward_dynamics_error(task, realized, ErrorSpace::joint, model);
  errors.err_F_ee =
      forward_dynamics_error(task, realized, ErrorSpace::end_effector, model);

  return TaskSolution{std::move(a),          std::move(b),
                      std::move(interpolant), std::move(u_target),
                      std::move(u_realized),  std::move(realized),
                      errors};
}

}  // namespace synergy
