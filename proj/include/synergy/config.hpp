#pragma once

#include <string>
#include <vector>

#include "synergy/exploration.hpp"
#include "synergy/reduction.hpp"

namespace synergy {

// Everything a harness run needs; all randomness flows from the named seeds.
struct ExperimentConfig {
  ArmModel model;
  Eigen::VectorXd initial_posture;  // shared start of every signal and task

  ExplorationConfig explore_min_jerk;
  ExplorationConfig explore_random;

  std::vector<Eigen::Vector2d> evaluation_targets;  // the 13 task targets
  double target_circle_radius = 0.25;  // used when targets are not listed

  ReductionParams reduction;
  int n_proto_tasks = 6;
  std::uint64_t reduction_seed = 7;

  int n_subsets = 100;
  int subset_size = 6;
  std::uint64_t subset_seed = 11;

  std::string output_dir = "out";

  void validate() const;
  // Hash of the full (serialized) configuration, for output provenance.
  std::string fingerprint() const;
};

// Built-in defaults matching the experiments: 2-link arm, 100 min-jerk +
// 90 low-passed random signals over 1 s at dt = 5e-3, 13 evaluation targets
// (12 on a circle around the initial end-effector point, clipped to the
// workspace, plus one near the outer boundary).
ExperimentConfig default_experiment_config();

// Evaluation targets derived from model and initial posture.
std::vector<Eigen::Vector2d> default_evaluation_targets(
    const ArmModel& model, const Eigen::VectorXd& initial_posture,
    double circle_radius);

// Loads a config file: flat "key = value" lines (numbers, comma lists,
// strings, '#' comments) or a JSON object with the same dotted keys nested.
// Unset keys keep their defaults.
ExperimentConfig load_experiment_config(const std::string& path);

std::string config_to_json_string(const ExperimentConfig& cfg);

}  // namespace synergy
