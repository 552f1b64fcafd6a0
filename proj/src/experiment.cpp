#include "synergy/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace synergy {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

std::string provenance_line(const ExperimentConfig& cfg) {
  return "# config=" + cfg.fingerprint() + " model=" + cfg.model.fingerprint() +
         "\n";
}

void write_ee_traces(const ExperimentConfig& cfg,
                     const std::vector<Trajectory>& trajs,
                     const std::string& path) {
  std::ostringstream out;
  out << provenance_line(cfg) << "signal_id,t,x,y\n";
  char buf[128];
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const Trajectory& tr = trajs[i];
    for (int k = 0; k < tr.size(); ++k) {
      const Eigen::Vector2d p = forward_kinematics(cfg.model, tr.q(k));
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", i,
                    k * tr.dt(), p.x(), p.y());
      out << buf;
    }
  }
  write_file(path, out.str());
}

ReachingTask target_task(const ExperimentConfig& cfg, const BasisSet& basis,
                         const Eigen::Vector2d& target) {
  return proto_to_task(cfg.model, basis, target);
}

}  // namespace

BoxStats box_stats(std::vector<double> values) {
  BoxStats s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  const auto quantile = [&](double p) {
    const double idx = p * (values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(idx);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = idx - lo;
    return values[lo] * (1.0 - frac) + values[hi] * frac;
  };
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr, hi_fence = s.q3 + 1.5 * iqr;
  s.whisker_lo = values.back();
  s.whisker_hi = values.front();
  for (double v : values) {
    if (v >= lo_fence && v <= hi_fence) {
      s.whisker_lo = std::min(s.whisker_lo, v);
      s.whisker_hi = std::max(s.whisker_hi, v);
    } else {
      s.outliers.push_back(v);
    }
  }
  return s;
}

ExploreOutputs cmd_explore(const ExperimentConfig& config) {
  config.validate();
  fs::create_directories(config.output_dir);
  ExploreOutputs out;
  out.min_jerk = run_exploration(config.model, config.explore_min_jerk);
  out.random = run_exploration(config.model, config.explore_random);
  out.min_jerk_path =
      (fs::path(config.output_dir) / "minjerk_archive.json").string();
  out.random_path =
      (fs::path(config.output_dir) / "random_archive.json").string();
  save_archive(out.min_jerk, out.min_jerk_path);
  save_archive(out.random, out.random_path);
  write_ee_traces(config, out.min_jerk.responses,
                  (fs::path(config.output_dir) / "explore_minjerk_ee.csv").string());
  write_ee_traces(config, out.random.responses,
                  (fs::path(config.output_dir) / "explore_random_ee.csv").string());
  return out;
}

Solve13Result cmd_solve13(const ExperimentConfig& config,
                          const ExplorationArchive& archive,
                          const std::string& label) {
  config.validate();
  validate_archive(config.model, archive);
  fs::create_directories(config.output_dir);
  const BasisSet basis = basis_from_archive(archive);

  Solve13Result result;
  std::vector<Trajectory> realized;
  json solutions = json::array();
  for (std::size_t i = 0; i < config.evaluation_targets.size(); ++i) {
    Solve13Row row;
    row.task_id = static_cast<int>(i);
    try {
      const ReachingTask task =
          target_task(config, basis, config.evaluation_targets[i]);
      TaskSolution sol = solve_task(config.model, basis, task);
      row.errors = sol.errors;
      json sj = task_solution_to_json(sol);
      sj["task_id"] = row.task_id;
      solutions.push_back(std::move(sj));
      realized.push_back(std::move(sol.realized));
    } catch (const std::exception& e) {
      row.failed = true;
      std::fprintf(stderr, "solve13: task %d failed: %s\n", row.task_id,
                   e.what());
    }
    result.rows.push_back(row);
  }
  for (const auto& row : result.rows) {
    if (row.failed) continue;
    result.max_errors.err_I = std::max(result.max_errors.err_I, row.errors.err_I);
    result.max_errors.err_P = std::max(result.max_errors.err_P, row.errors.err_P);
    result.max_errors.err_F = std::max(result.max_errors.err_F, row.errors.err_F);
    result.max_errors.err_F_ee =
        std::max(result.max_errors.err_F_ee, row.errors.err_F_ee);
  }

  std::ostringstream csv;
  csv << provenance_line(config) << "task_id,err_I,err_P,err_F,err_F_ee\n";
  char buf[160];
  for (const auto& row : result.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", row.task_id,
                  row.errors.err_I, row.errors.err_P, row.errors.err_F,
                  row.errors.err_F_ee);
    csv << buf;
  }
  std::snprintf(buf, sizeof(buf), "max,%.17g,%.17g,%.17g,%.17g\n",
                result.max_errors.err_I, result.max_errors.err_P,
                result.max_errors.err_F, result.max_errors.err_F_ee);
  csv << buf;
  const fs::path dir(config.output_dir);
  write_file((dir / ("solve13_" + label + "_summary.csv")).string(), csv.str());
  write_file((dir / ("solve13_" + label + "_solutions.json")).string(),
             json{{"config_fingerprint", config.fingerprint()},
                  {"model_fingerprint", config.model.fingerprint()},
                  {"solutions", solutions}}
                 .dump());
  write_ee_traces(config, realized,
                  (dir / ("solve13_" + label + "_ee.csv")).string());
  return result;
}

GrowthResult cmd_reduce(const ExperimentConfig& config,
                        const ExplorationArchive& archive) {
  config.validate();
  validate_archive(config.model, archive);
  fs::create_directories(config.output_dir);
  const BasisSet full = basis_from_archive(archive);
  GrowthResult grown = grow_basis(config.model, full, config.n_proto_tasks,
                                  config.reduction_seed, config.reduction);
  const fs::path dir(config.output_dir);
  for (std::size_t i = 0; i < grown.maps.size(); ++i) {
    const std::string stem =
        "error_map_" + std::to_string(grown.maps[i].basis_size);
    save_error_map_csv(grown.maps[i], (dir / (stem + ".csv")).string());
    save_error_map_svg(grown.maps[i], config.model,
                       (dir / (stem + ".svg")).string());
  }
  save_basis(grown.basis, config.model.fingerprint(),
             (dir / "reduced_basis.json").string());
  save_proto_tasks_json(grown.proto_tasks, (dir / "proto_tasks.json").string());
  return grown;
}

ComparisonReport cmd_compare(const ExperimentConfig& config,
                             const ExplorationArchive& archive,
                             const BasisSet& reduced) {
  config.validate();
  validate_archive(config.model, archive);
  fs::create_directories(config.output_dir);

  const int n_targets = static_cast<int>(config.evaluation_targets.size());
  ComparisonReport report;
  report.targets.resize(n_targets);

  // reduced-basis reference values
  for (int t = 0; t < n_targets; ++t) {
    const ReachingTask task =
        target_task(config, reduced, config.evaluation_targets[t]);
    const TaskSolution sol = solve_task(config.model, reduced, task);
    report.targets[t].reduced_err_p = sol.errors.err_P;
    report.targets[t].reduced_err_f_ee = sol.errors.err_F_ee;
  }

  // reduced synergies are synthesized from interpolants; verify they do not
  // coincide with any archive signal
  for (int i = 0; i < reduced.size(); ++i)
    for (const auto& s : archive.signals)
      if (s.samples == reduced.synergy(i).samples)
        report.reduced_disjoint_from_archive = false;

  std::mt19937_64 rng(config.subset_seed);
  const int n_signals = static_cast<int>(archive.signals.size());
  if (config.subset_size > n_signals)
    throw std::invalid_argument("cmd_compare: subset larger than archive");
  std::vector<int> indices(n_signals);
  std::iota(indices.begin(), indices.end(), 0);

  for (int s = 0; s < config.n_subsets; ++s) {
    // deterministic partial Fisher-Yates draw of subset_size indices
    for (int k = 0; k < config.subset_size; ++k) {
      std::uniform_int_distribution<int> pick(k, n_signals - 1);
      std::swap(indices[k], indices[pick(rng)]);
    }
    std::vector<ActuationSignal> sub_u;
    std::vector<Trajectory> sub_r;
    for (int k = 0; k < config.subset_size; ++k) {
      sub_u.push_back(archive.signals[indices[k]]);
      sub_r.push_back(archive.responses[indices[k]]);
    }
    const BasisSet subset(std::move(sub_u), std::move(sub_r),
                          archive.config.initial_state);
    for (int t = 0; t < n_targets; ++t) {
      try {
        const ReachingTask task =
            target_task(config, subset, config.evaluation_targets[t]);
        const TaskSolution sol = solve_task(config.model, subset, task);
        report.targets[t].subset_err_p.push_back(sol.errors.err_P);
        report.targets[t].subset_err_f_ee.push_back(sol.errors.err_F_ee);
      } catch (const std::exception&) {
        report.targets[t].subset_err_p.push_back(
            std::numeric_limits<double>::quiet_NaN());
        report.targets[t].subset_err_f_ee.push_back(
            std::numeric_limits<double>::quiet_NaN());
      }
    }
  }

  double subset_mean_sum = 0.0, reduced_sum = 0.0;
  for (int t = 0; t < n_targets; ++t) {
    auto& tgt = report.targets[t];
    std::vector<double> finite;
    for (double v : tgt.subset_err_p)
      if (std::isfinite(v)) finite.push_back(v);
    tgt.stats_err_p = box_stats(finite);
    std::vector<double> finite_ee;
    for (double v : tgt.subset_err_f_ee)
      if (std::isfinite(v)) finite_ee.push_back(v);
    tgt.stats_err_f_ee = box_stats(finite_ee);
    subset_mean_sum += tgt.stats_err_p.mean;
    reduced_sum += tgt.reduced_err_p;
  }
  report.subset_mean_err_p = subset_mean_sum / n_targets;
  report.reduced_mean_err_p = reduced_sum / n_targets;
  report.separation_ratio =
      report.reduced_mean_err_p > 0.0
          ? report.subset_mean_err_p / report.reduced_mean_err_p
          : std::numeric_limits<double>::infinity();

  // boxplot-ready long-format CSV
  std::ostringstream csv;
  csv << provenance_line(config) << "target_id,subset_id,err_P,err_F_ee\n";
  char buf[128];
  for (int t = 0; t < n_targets; ++t)
    for (std::size_t s = 0; s < report.targets[t].subset_err_p.size(); ++s) {
      std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g,%.17g\n", t, s,
                    report.targets[t].subset_err_p[s],
                    report.targets[t].subset_err_f_ee[s]);
      csv << buf;
    }
  const fs::path dir(config.output_dir);
  write_file((dir / "compare.csv").string(), csv.str());

  json jt = json::array();
  for (int t = 0; t < n_targets; ++t) {
    const auto& tgt = report.targets[t];
    auto stats_json = [](const BoxStats& s) {
      return json{{"mean", s.mean},           {"q1", s.q1},
                  {"median", s.median},       {"q3", s.q3},
                  {"whisker_lo", s.whisker_lo}, {"whisker_hi", s.whisker_hi},
                  {"outliers", s.outliers}};
    };
    jt.push_back({{"target_id", t},
                  {"reduced_err_P", tgt.reduced_err_p},
                  {"reduced_err_F_ee", tgt.reduced_err_f_ee},
                  {"subset_err_P", stats_json(tgt.stats_err_p)},
                  {"subset_err_F_ee", stats_json(tgt.stats_err_f_ee)}});
  }
  write_file((dir / "compare_summary.json").string(),
             json{{"config_fingerprint", config.fingerprint()},
                  {"model_fingerprint", config.model.fingerprint()},
                  {"reduced_mean_err_P", report.reduced_mean_err_p},
                  {"subset_mean_err_P", report.subset_mean_err_p},
                  {"separation_ratio", report.separation_ratio},
                  {"reduced_disjoint_from_archive",
                   report.reduced_disjoint_from_archive},
                  {"targets", jt}}
                 .dump(2));
  return report;
}

TaskSolution cmd_solve(const ExperimentConfig& config, const BasisSet& basis,
                       const std::string& task_json_path) {
  config.validate();
  fs::create_directories(config.output_dir);
  const json j = json::parse(read_file_maybe_gzip(task_json_path));
  ReachingTask task;
  if (j.contains("target")) {
    const Eigen::Vector2d target(j.at("target").at(0).get<double>(),
                                 j.at("target").at(1).get<double>());
    task = target_task(config, basis, target);
  } else if (j.contains("qT")) {
    Eigen::VectorXd qT(j.at("qT").size());
    for (std::size_t i = 0; i < j.at("qT").size(); ++i)
      qT[i] = j.at("qT").at(i).get<double>();
    task = ReachingTask::rest_to_rest(basis.initial_state().q, qT,
                                      basis.duration());
  } else {
    throw std::runtime_error("task file needs a \"target\" or \"qT\" field");
  }

  TaskSolution sol = solve_task(config.model, basis, task);
  const fs::path dir(config.output_dir);
  json out = task_solution_to_json(sol);
  out["config_fingerprint"] = config.fingerprint();
  out["model_fingerprint"] = config.model.fingerprint();
  write_file((dir / "solution.json").string(), out.dump(2));

  std::ostringstream csv;
  csv << provenance_line(config)
      << "t,q1,q2,q1_realized,q2_realized,u1,u2\n";
  char buf[256];
  for (int k = 0; k < sol.interpolant.size(); ++k) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  k * sol.interpolant.dt(), sol.interpolant.positions()(k, 0),
                  sol.interpolant.positions()(k, 1),
                  sol.realized.positions()(k, 0), sol.realized.positions()(k, 1),
                  sol.actuation_realized.samples(k, 0),
                  sol.actuation_realized.samples(k, 1));
    csv << buf;
  }
  write_file((dir / "solution_trajectory.csv").string(), csv.str());
  return sol;
}

}  // namespace synergy
