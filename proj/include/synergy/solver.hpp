#pragma once

#include <vector>

#include "synergy/metrics.hpp"
#include "synergy/types.hpp"

namespace synergy {

// Relative singular-value cutoff used by both the end-constraint solve and
// the synergy projection.
inline constexpr double kSvdCutoff = 1e-10;

enum class CombinatorKind { kinematic_a, synergy_b, probe_lambda };

struct CombinatorVector {
  Eigen::VectorXd coefficients;
  CombinatorKind kind = CombinatorKind::kinematic_a;
  // Set when the end-constraint system had rank below the number of
  // constraints; the solution is still the minimum-norm minimizer.
  bool rank_deficient = false;
};

// Paired synergies Phi and dynamic responses Theta sharing one time
// discretization and one initial state. Immutable; the stacked matrices and
// their SVDs are precomputed at construction.
class BasisSet {
 public:
  BasisSet(std::vector<ActuationSignal> synergies,
           std::vector<Trajectory> responses, JointState initial_state);

  int size() const { return static_cast<int>(synergies_.size()); }
  int n_samples() const { return responses_.front().size(); }
  int dim() const { return responses_.front().dim(); }
  double dt() const { return responses_.front().dt(); }
  double duration() const { return responses_.front().duration(); }

  const ActuationSignal& synergy(int i) const { return synergies_[i]; }
  const Trajectory& response(int i) const { return responses_[i]; }
  const std::vector<ActuationSignal>& synergies() const { return synergies_; }
  const std::vector<Trajectory>& responses() const { return responses_; }
  const JointState& initial_state() const { return initial_state_; }

  // N*dim-by-N_phi matrix; column i is synergy i stacked time-major.
  const Eigen::MatrixXd& synergy_matrix() const { return phi_; }
  // 2*dim-by-N_theta end-constraint matrix in deviation coordinates:
  // column i = [theta_i(T) - q0; thetadot_i(T)].
  const Eigen::MatrixXd& end_constraint_matrix() const { return end_constraints_; }

  const Eigen::BDCSVD<Eigen::MatrixXd>& synergy_svd() const { return phi_svd_; }
  // SVD of the row-equilibrated end-constraint matrix; apply end_row_scale()
  // to the right-hand side before solving. Equilibration leaves the
  // minimum-norm solution of the consistent system unchanged but keeps tiny
  // velocity rows (responses ending near rest) above the singular cutoff.
  const Eigen::BDCSVD<Eigen::MatrixXd>& end_constraint_svd() const {
    return end_svd_;
  }
  const Eigen::VectorXd& end_row_scale() const { return end_row_scale_; }

 private:
  std::vector<ActuationSignal> synergies_;
  std::vector<Trajectory> responses_;
  JointState initial_state_;
  Eigen::MatrixXd phi_;
  Eigen::MatrixXd end_constraints_;
  Eigen::VectorXd end_row_scale_;
  Eigen::BDCSVD<Eigen::MatrixXd> phi_svd_;
  Eigen::BDCSVD<Eigen::MatrixXd> end_svd_;
};

struct TaskSolution {
  CombinatorVector a;
  CombinatorVector b;
  Trajectory interpolant;           // Theta(t) a (+ q0 offset)
  ActuationSignal actuation_target;  // u~ = D(Theta a)
  ActuationSignal actuation_realized;  // Phi b
  Trajectory realized;              // forward dynamics of Phi b
  ErrorReport errors;
};

// Minimum-norm least-squares solve of an SVD'd system with the relative
// cutoff above. Shared by interpolation and projection.
Eigen::VectorXd pinv_solve(const Eigen::BDCSVD<Eigen::MatrixXd>& svd,
                           const Eigen::VectorXd& rhs,
                           double rel_cutoff = kSvdCutoff);

// Kinematic solve (deviation coordinates): finds a with
// [theta_i(T)-q0; thetadot_i(T)] a = [qT-q0; 0], minimum-norm least squares.
CombinatorVector solve_kinematic(const BasisSet& basis,
                                 const ReachingTask& task);

// Interpolant trajectory q0 + sum_i a_i (theta_i - q0).
Trajectory combine_responses(const BasisSet& basis, const CombinatorVector& a);

// Realized actuation Phi b.
ActuationSignal combine_synergies(const BasisSet& basis,
                                  const CombinatorVector& b);

// u~ = D(Theta a).
ActuationSignal compute_task_actuation(const ArmModel& model,
                                       const BasisSet& basis,
                                       const CombinatorVector& a);

// b = Phi^+ u, minimum-norm minimizer of ||u - Phi b||.
CombinatorVector project_onto_synergies(const BasisSet& basis,
                                        const ActuationSignal& u_target);

// The composed map M = Phi^+ o D o Theta.
CombinatorVector map_M(const ArmModel& model, const BasisSet& basis,
                       const CombinatorVector& a);

// Full pipeline: kinematic solve, task actuation, projection, forward
// integration of Phi b, error report.
TaskSolution solve_task(const ArmModel& model, const BasisSet& basis,
                        const ReachingTask& task);

}  // namespace synergy
