#pragma once

#include <cstdint>
#include <vector>

#include "synergy/exploration.hpp"
#include "synergy/solver.hpp"

namespace synergy {

struct ProtoTask {
  enum class Provenance { random_seed, error_driven };
  Eigen::Vector2d target;  // end-effector point [m]
  Provenance provenance = Provenance::random_seed;
};

// Polar evaluation grid over the workspace annulus, shrunk away from both
// boundaries.
struct GridSpec {
  int n_angles = 24;
  int n_radii = 12;
  double shrink = 0.05;  // fraction of the radial span removed at each end
};

struct ErrorMap {
  std::vector<Eigen::Vector2d> grid;
  std::vector<double> err_p;     // NaN marks a failed target
  std::vector<double> err_f_ee;
  int basis_size = 0;

  // Mean over finite err_p entries.
  double mean_err_p() const;
};

struct ReductionParams {
  double err_i_threshold = 1e-6;  // proto-task acceptance
  double d_min = 0.05;            // exclusion radius for new proto-tasks [m]
  GridSpec grid;
};

std::vector<Eigen::Vector2d> make_grid(const ArmModel& model,
                                       const GridSpec& spec);

// Full exploration archive viewed as a (trivially paired) basis.
BasisSet basis_from_archive(const ExplorationArchive& archive);

// Converts a proto-task target into a rest-to-rest ReachingTask starting at
// the basis initial posture (inverse kinematics at the posture's branch).
ReachingTask proto_to_task(const ArmModel& model, const BasisSet& basis,
                           const Eigen::Vector2d& target);

// Solves each proto-task kinematically against the exploration basis; the
// interpolants become the reduced responses, their inverse dynamics the
// reduced synergies. Throws ProtoTaskRejectedError when err_I exceeds the
// acceptance threshold.
BasisSet reduce(const ArmModel& model, const BasisSet& exploration_basis,
                const std::vector<ProtoTask>& proto_tasks,
                const ReductionParams& params);

// err_P / err_F_ee of solve_task at every grid target; per-target failures
// are recorded as NaN.
ErrorMap evaluate_error_map(const ArmModel& model, const BasisSet& basis,
                            const std::vector<Eigen::Vector2d>& grid);

// Grid target with maximal err_P at distance >= d_min from every existing
// proto-task; ties break toward the lowest grid index.
ProtoTask add_proto_task(const ErrorMap& map,
                         const std::vector<ProtoTask>& existing, double d_min);

struct GrowthResult {
  BasisSet basis;
  std::vector<ErrorMap> maps;       // one per basis size 2..n_target
  std::vector<ProtoTask> proto_tasks;
};

// Seeds two random proto-tasks, then alternates error-map evaluation,
// error-driven proto-task addition and reduction until n_target proto-tasks
// (or saturation). Deterministic for a fixed seed.
GrowthResult grow_basis(const ArmModel& model, const BasisSet& exploration_basis,
                        int n_target, std::uint64_t seed,
                        const ReductionParams& params);

}  // namespace synergy
