#include "synergy/reduction.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace synergy {

double ErrorMap::mean_err_p() const {
  double sum = 0.0;
  int n = 0;
  for (double v : err_p)
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

BasisSet basis_from_archive(const ExplorationArchive& archive) {
  return BasisSet(archive.signals, archive.responses,
                  archive.config.initial_state);
}

std::vector<Eigen::Vector2d> make_grid(const ArmModel& model,
                                       const GridSpec& spec) {
  const WorkspaceAnnulus ws = workspace_boundary(model);
  const double span = ws.r_max - ws.r_min;
  const double r_lo = ws.r_min + spec.shrink * span;
  const double r_hi = ws.r_max - spec.shrink * span;
  std::vector<Eigen::Vector2d> grid;
  grid.reserve(spec.n_angles * spec.n_radii);
  for (int ir = 0; ir < spec.n_radii; ++ir) {
    const double r = spec.n_radii == 1
                         ? 0.5 * (r_lo + r_hi)
                         : r_lo + (r_hi - r_lo) * ir / (spec.n_radii - 1);
    for (int ia = 0; ia < spec.n_angles; ++ia) {
      const double phi = 2.0 * M_PI * ia / spec.n_angles;
      grid.emplace_back(r * std::cos(phi), r * std::sin(phi));
    }
  }
  return grid;
}

ReachingTask proto_to_task(const ArmModel& model, const BasisSet& basis,
                           const Eigen::Vector2d& target) {
  const JointState& init = basis.initial_state();
  const Eigen::Vector2d qT =
      inverse_kinematics(model, target, branch_of(init));
  Eigen::VectorXd qT_unwrapped(2);
  // keep the goal on the same winding as the start
  for (int j = 0; j < 2; ++j)
    qT_unwrapped[j] = init.q[j] + wrap_angle(qT[j] - init.q[j]);
  return ReachingTask::rest_to_rest(init.q, qT_unwrapped, basis.duration());
}

BasisSet reduce(const ArmModel& model, const BasisSet& exploration_basis,
                const std::vector<ProtoTask>& proto_tasks,
                const ReductionParams& params) {
  if (proto_tasks.empty())
    throw std::invalid_argument("reduce: need at least one proto-task");
  std::vector<Trajectory> responses;
  std::vector<ActuationSignal> synergies;
  responses.reserve(proto_tasks.size());
  synergies.reserve(proto_tasks.size());
  for (std::size_t i = 0; i < proto_tasks.size(); ++i) {
    const ReachingTask task =
        proto_to_task(model, exploration_basis, proto_tasks[i].target);
    const CombinatorVector a = solve_kinematic(exploration_basis, task);
    Trajectory interpolant = combine_responses(exploration_basis, a);
    const double err_i = interpolation_error(task, interpolant);
    if (err_i > params.err_i_threshold)
      throw ProtoTaskRejectedError(
          "reduce: proto-task " + std::to_string(i) +
              " interpolation error " + std::to_string(err_i) +
              " above threshold",
          err_i);
    synergies.push_back(inverse_dynamics(model, interpolant));
    responses.push_back(std::move(interpolant));
  }
  return BasisSet(std::move(synergies), std::move(responses),
                  exploration_basis.initial_state());
}

ErrorMap evaluate_error_map(const ArmModel& model, const BasisSet& basis,
                            const std::vector<Eigen::Vector2d>& grid) {
  ErrorMap map;
  map.grid = grid;
  map.basis_size = basis.size();
  map.err_p.resize(grid.size());
  map.err_f_ee.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      const ReachingTask task = proto_to_task(model, basis, grid[i]);
      const TaskSolution sol = solve_task(model, basis, task);
      map.err_p[i] = sol.errors.err_P;
      map.err_f_ee[i] = sol.errors.err_F_ee;
    } catch (const std::exception&) {
      map.err_p[i] = std::numeric_limits<double>::quiet_NaN();
      map.err_f_ee[i] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return map;
}

ProtoTask add_proto_task(const ErrorMap& map,
                         const std::vector<ProtoTask>& existing, double d_min) {
  if (map.grid.empty()) throw std::invalid_argument("add_proto_task: empty map");
  int best = -1;
  double best_err = -1.0;
  for (std::size_t i = 0; i < map.grid.size(); ++i) {
    if (!std::isfinite(map.err_p[i])) continue;
    bool excluded = false;
    for (const auto& p : existing)
      if ((map.grid[i] - p.target).norm() < d_min) {
        excluded = true;
        break;
      }
    if (excluded) continue;
    if (map.err_p[i] > best_err) {  // strict: ties keep the lowest index
      best_err = map.err_p[i];
      best = static_cast<int>(i);
    }
  }
  if (best < 0)
    throw SaturationError(
        "add_proto_task: every grid target within d_min of a proto-task");
  return ProtoTask{map.grid[best], ProtoTask::Provenance::error_driven};
}

GrowthResult grow_basis(const ArmModel& model,
                        const BasisSet& exploration_basis, int n_target,
                        std::uint64_t seed, const ReductionParams& params) {
  if (n_target < 2)
    throw std::invalid_argument("grow_basis: n_target must be >= 2");

  const WorkspaceAnnulus ws = workspace_boundary(model);
  const double span = ws.r_max - ws.r_min;
  const double r_lo = ws.r_min + params.grid.shrink * span;
  const double r_hi = ws.r_max - params.grid.shrink * span;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<ProtoTask> protos;
  // two random seed targets, uniform on the shrunk annulus; resample targets
  // whose kinematic solution is rejected
  while (static_cast<int>(protos.size()) < 2) {
    const double r = std::sqrt(r_lo * r_lo + unit(rng) * (r_hi * r_hi - r_lo * r_lo));
    const double phi = 2.0 * M_PI * unit(rng);
    ProtoTask cand{Eigen::Vector2d(r * std::cos(phi), r * std::sin(phi)),
                   ProtoTask::Provenance::random_seed};
    std::vector<ProtoTask> trial = protos;
    trial.push_back(cand);
    try {
      (void)reduce(model, exploration_basis, trial, params);
      protos = std::move(trial);
    } catch (const ProtoTaskRejectedError&) {
    } catch (const ReachabilityError&) {
    }
  }

  const std::vector<Eigen::Vector2d> grid = make_grid(model, params.grid);
  std::vector<ErrorMap> maps;
  BasisSet basis = reduce(model, exploration_basis, protos, params);
  while (true) {
    maps.push_back(evaluate_error_map(model, basis, grid));
    if (static_cast<int>(protos.size()) >= n_target) break;
    ProtoTask next;
    try {
      next = add_proto_task(maps.back(), protos, params.d_min);
    } catch (const SaturationError&) {
      break;  // keep the basis built so far
    }
    std::vector<ProtoTask> trial = protos;
    trial.push_back(next);
    try {
      BasisSet grown = reduce(model, exploration_basis, trial, params);
      protos = std::move(trial);
      basis = std::move(grown);
    } catch (const ProtoTaskRejectedError&) {
      break;  // best candidate not solvable; stop growing
    }
  }
  return GrowthResult{std::move(basis), std::move(maps), std::move(protos)};
}

}  // namespace synergy
