#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "synergy/experiment.hpp"

namespace {

using synergy::ExperimentConfig;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Config file (key=value or JSON)");
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--seed", opts.seed, "Override the command's seed");
}

ExperimentConfig make_config(const CommonOpts& opts) {
  ExperimentConfig cfg = opts.config_path.empty()
                             ? synergy::default_experiment_config()
                             : synergy::load_experiment_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  return cfg;
}

void emit_error_json(const std::exception& e, const char* kind) {
  const nlohmann::json j{{"error", kind}, {"message", e.what()}};
  std::fprintf(stderr, "%s\n", j.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synergy-based open-loop controller synthesis for planar reaching"};
  app.require_subcommand(1);

  CommonOpts explore_opts, solve13_opts, reduce_opts, compare_opts, solve_opts;
  std::string archive_path, basis_path, task_path;

  CLI::App* explore = app.add_subcommand(
      "explore", "Generate both exploration archives and end-effector traces");
  add_common(explore, explore_opts);

  CLI::App* solve13 = app.add_subcommand(
      "solve13", "Solve the evaluation targets with a full archive");
  add_common(solve13, solve13_opts);
  solve13->add_option("--archive", archive_path, "Exploration archive JSON(.gz)")
      ->required();

  CLI::App* reduce = app.add_subcommand(
      "reduce", "Grow the reduced basis from proto-tasks, with error maps");
  add_common(reduce, reduce_opts);
  reduce->add_option("--archive", archive_path, "Exploration archive JSON(.gz)")
      ->required();

  CLI::App* compare = app.add_subcommand(
      "compare", "Compare the reduced basis against random archive subsets");
  add_common(compare, compare_opts);
  compare->add_option("--archive", archive_path, "Exploration archive JSON(.gz)")
      ->required();
  compare->add_option("--basis", basis_path, "Reduced basis JSON")->required();

  CLI::App* solve =
      app.add_subcommand("solve", "Solve a single task given as JSON");
  add_common(solve, solve_opts);
  solve->add_option("--task", task_path, "Task JSON ({\"target\":[x,y]})")
      ->required();
  solve->add_option("--archive", archive_path, "Exploration archive JSON(.gz)");
  solve->add_option("--basis", basis_path, "Reduced basis JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (explore->parsed()) {
      ExperimentConfig cfg = make_config(explore_opts);
      if (explore_opts.seed) {
        cfg.explore_min_jerk.rng_seed = *explore_opts.seed;
        cfg.explore_random.rng_seed = *explore_opts.seed + 1;
      }
      const auto out = synergy::cmd_explore(cfg);
      std::printf("explore: %zu min-jerk + %zu random pairs -> %s\n",
                  out.min_jerk.signals.size(), out.random.signals.size(),
                  cfg.output_dir.c_str());
    } else if (solve13->parsed()) {
      ExperimentConfig cfg = make_config(solve13_opts);
      const auto archive = synergy::load_archive(archive_path);
      const std::string label =
          archive.config.signal_class == synergy::SignalClass::min_jerk
              ? "minjerk"
              : "random";
      const auto res = synergy::cmd_solve13(cfg, archive, label);
      std::printf("solve13 (%s): max err_I=%.3e err_P=%.3e err_F=%.3e "
                  "err_F_ee=%.3e\n",
                  label.c_str(), res.max_errors.err_I, res.max_errors.err_P,
                  res.max_errors.err_F, res.max_errors.err_F_ee);
    } else if (reduce->parsed()) {
      ExperimentConfig cfg = make_config(reduce_opts);
      if (reduce_opts.seed) cfg.reduction_seed = *reduce_opts.seed;
      const auto archive = synergy::load_archive(archive_path);
      const auto grown = synergy::cmd_reduce(cfg, archive);
      std::printf("reduce: %d proto-tasks, final workspace-average "
                  "err_P=%.3e\n",
                  grown.basis.size(), grown.maps.back().mean_err_p());
    } else if (compare->parsed()) {
      ExperimentConfig cfg = make_config(compare_opts);
      if (compare_opts.seed) cfg.subset_seed = *compare_opts.seed;
      const auto archive = synergy::load_archive(archive_path);
      const auto basis = synergy::load_basis(basis_path);
      const auto report = synergy::cmd_compare(cfg, archive, basis);
      std::printf("compare: reduced mean err_P=%.3e, subset mean=%.3e, "
                  "ratio=%.1fx\n",
                  report.reduced_mean_err_p, report.subset_mean_err_p,
                  report.separation_ratio);
    } else if (solve->parsed()) {
      ExperimentConfig cfg = make_config(solve_opts);
      if (basis_path.empty() && archive_path.empty())
        throw std::runtime_error("solve: need --basis or --archive");
      std::optional<synergy::BasisSet> basis;
      if (!basis_path.empty()) {
        basis = synergy::load_basis(basis_path);
      } else {
        const auto archive = synergy::load_archive(archive_path);
        synergy::validate_archive(cfg.model, archive);
        basis = synergy::basis_from_archive(archive);
      }
      const auto sol = synergy::cmd_solve(cfg, *basis, task_path);
      std::printf("solve: err_I=%.3e err_P=%.3e err_F=%.3e err_F_ee=%.3e\n",
                  sol.errors.err_I, sol.errors.err_P, sol.errors.err_F,
                  sol.errors.err_F_ee);
    }
  } catch (const synergy::ReachabilityError& e) {
    emit_error_json(e, "reachability");
    return 1;
  } catch (const synergy::DivergenceError& e) {
    emit_error_json(e, "divergence");
    return 1;
  } catch (const synergy::DimensionError& e) {
    emit_error_json(e, "dimension");
    return 1;
  } catch (const std::exception& e) {
    emit_error_json(e, "runtime");
    return 1;
  }
  return 0;
}
