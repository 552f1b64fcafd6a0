#pragma once

#include <string>
#include <vector>

#include "synergy/archive_io.hpp"
#include "synergy/config.hpp"
#include "synergy/reduction.hpp"

namespace synergy {

struct ExploreOutputs {
  ExplorationArchive min_jerk;
  ExplorationArchive random;
  std::string min_jerk_path;
  std::string random_path;
};

struct Solve13Row {
  int task_id = 0;
  ErrorReport errors;
  bool failed = false;
};

struct Solve13Result {
  std::vector<Solve13Row> rows;
  ErrorReport max_errors;  // column-wise maxima over successful rows
};

struct BoxStats {
  double mean = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0;
  double whisker_lo = 0.0, whisker_hi = 0.0;  // 1.5 IQR, capped to data
  std::vector<double> outliers;
};

struct ComparisonTarget {
  std::vector<double> subset_err_p;     // one entry per random subset
  std::vector<double> subset_err_f_ee;
  BoxStats stats_err_p;
  BoxStats stats_err_f_ee;
  double reduced_err_p = 0.0;
  double reduced_err_f_ee = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonTarget> targets;
  double reduced_mean_err_p = 0.0;      // mean over targets
  double subset_mean_err_p = 0.0;       // mean of subset means
  double separation_ratio = 0.0;        // subset_mean / reduced_mean
  // Reduced synergies are synthesized, never members of the archive.
  bool reduced_disjoint_from_archive = true;
};

BoxStats box_stats(std::vector<double> values);

// Runs both exploration classes, writes the two archives and the
// end-effector trace CSVs (explore_{minjerk,random}_ee.csv).
ExploreOutputs cmd_explore(const ExperimentConfig& config);

// Solves the 13 evaluation targets with the full archive; writes
// solve13_<label>_summary.csv, per-target solution JSON and realized
// end-effector traces.
Solve13Result cmd_solve13(const ExperimentConfig& config,
                          const ExplorationArchive& archive,
                          const std::string& label);

// Grows the reduced basis to n_proto_tasks; writes basis.json, the
// per-iteration error maps (CSV + SVG) and proto_tasks.json.
GrowthResult cmd_reduce(const ExperimentConfig& config,
                        const ExplorationArchive& archive);

// Compares the reduced basis against random archive subsets of the same
// size on the evaluation targets; writes compare.csv and compare_summary.json.
ComparisonReport cmd_compare(const ExperimentConfig& config,
                             const ExplorationArchive& archive,
                             const BasisSet& reduced);

// Solves a single task (JSON: {"target": [x, y]} or {"qT": [..]}) against a
// basis; writes solution JSON and a trajectory CSV.
TaskSolution cmd_solve(const ExperimentConfig& config, const BasisSet& basis,
                       const std::string& task_json_path);

}  // namespace synergy
