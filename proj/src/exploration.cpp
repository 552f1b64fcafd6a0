#include "synergy/exploration.hpp"

#include <cmath>
#include <iostream>
#include <random>

namespace synergy {

void ExplorationConfig::validate() const {
  if (count < 1) throw std::invalid_argument("ExplorationConfig: count >= 1");
  if (!(dt > 0.0) || !(duration > 0.0))
    throw std::invalid_argument("ExplorationConfig: dt and duration > 0");
  if (!(cutoff > 0.0) || cutoff >= 0.5 / dt)
    throw std::invalid_argument("ExplorationConfig: cutoff in (0, Nyquist)");
  if (amplitude < 0.0)
    throw std::invalid_argument("ExplorationConfig: amplitude >= 0");
  if (initial_state.q.size() == 0)
    throw std::invalid_argument("ExplorationConfig: initial state unset");
  if (!(target_disc_frac > 0.0))
    throw std::invalid_argument("ExplorationConfig: target_disc_frac > 0");
}

double min_jerk_profile(double tau) {
  const double t3 = tau * tau * tau;
  return t3 * (10.0 - 15.0 * tau + 6.0 * tau * tau);
}

double min_jerk_profile_rate(double tau) {
  const double t2 = tau * tau;
  return t2 * (30.0 - 60.0 * tau + 30.0 * t2);
}

ElbowBranch branch_of(const JointState& state) {
  if (state.q.size() < 2)
    throw DimensionError("branch_of: need a 2-link posture");
  return state.q[1] >= 0.0 ? ElbowBranch::up : ElbowBranch::down;
}

namespace {

// Uniform point on the annulus [r_min, r_max] intersected with the disc of
// radius disc_r around p0 (rejection sampling).
Eigen::Vector2d sample_target(std::mt19937_64& rng, const WorkspaceAnnulus& ws,
                              const Eigen::Vector2d& p0, double disc_r) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lo2 = ws.r_min * ws.r_min, hi2 = ws.r_max * ws.r_max;
  for (int tries = 0; tries < 10000; ++tries) {
    const double r = std::sqrt(lo2 + unit(rng) * (hi2 - lo2));
    const double phi = 2.0 * M_PI * unit(rng);
    const Eigen::Vector2d p(r * std::cos(phi), r * std::sin(phi));
    if ((p - p0).norm() <= disc_r) return p;
  }
  throw std::runtime_error("sample_target: rejection sampling failed");
}

// Joint-space trajectory tracing a straight min-jerk stroke from p0 to
// target. Throws ReachabilityError if the chord leaves the annulus.
Trajectory min_jerk_joint_path(const ArmModel& model, const JointState& init,
                               const Eigen::Vector2d& target, double duration,
                               double dt, ElbowBranch branch) {
  const Eigen::Vector2d p0 = forward_kinematics(model, init.q);
  const int n = static_cast<int>(std::lround(duration / dt)) + 1;
  Eigen::MatrixXd qs(n, model.n_links);
  Eigen::VectorXd prev = init.q;
  for (int k = 0; k < n; ++k) {
    const double tau = static_cast<double>(k) / (n - 1);
    const Eigen::Vector2d p = p0 + (target - p0) * min_jerk_profile(tau);
    Eigen::Vector2d q = inverse_kinematics(model, p, branch);
    // keep angles unwrapped and continuous along the path
    for (int j = 0; j < 2; ++j)
      q[j] = prev[j] + wrap_angle(q[j] - prev[j]);
    qs.row(k) = q.transpose();
    prev = q;
  }
  return Trajectory(dt, std::move(qs));
}

ActuationSignal single_lowpass_random(std::mt19937_64& rng,
                                      const ExplorationConfig& cfg, int dim) {
  const int n = cfg.n_samples();
  std::uniform_real_distribution<double> uni(-cfg.amplitude, cfg.amplitude);
  Eigen::MatrixXd u(n, dim);
  const double rc = 1.0 / (2.0 * M_PI * cfg.cutoff);
  const double alpha = cfg.dt / (rc + cfg.dt);
  for (int j = 0; j < dim; ++j) {
    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) x[k] = uni(rng);
    // zero-phase: one pass forward, one pass backward
    double y = x[0];
    for (int k = 0; k < n; ++k) {
      y += alpha * (x[k] - y);
      x[k] = y;
    }
    y = x[n - 1];
    for (int k = n - 1; k >= 0; --k) {
      y += alpha * (x[k] - y);
      x[k] = y;
    }
    u.col(j) = x;
  }
  for (int k = 0; k < n; ++k) {
    const double s = min_jerk_profile(static_cast<double>(k) / (n - 1));
    u.row(k) *= 4.0 * s * (1.0 - s);
  }
  return ActuationSignal(cfg.dt, std::move(u));
}

}  // namespace

std::vector<ActuationSignal> generate_min_jerk_actuations(
    const ArmModel& model, const ExplorationConfig& cfg) {
  cfg.validate();
  if (cfg.signal_class != SignalClass::min_jerk)
    throw std::invalid_argument("generate_min_jerk_actuations: wrong class");
  std::mt19937_64 rng(cfg.rng_seed);
  const WorkspaceAnnulus ws = workspace_boundary(model);
  const Eigen::Vector2d p0 = forward_kinematics(model, cfg.initial_state.q);
  const ElbowBranch branch = branch_of(cfg.initial_state);
  const double disc_r = cfg.target_disc_frac * ws.r_max;

  std::vector<ActuationSignal> out;
  out.reserve(cfg.count);
  const int max_retries = 50;
  for (int i = 0; i < cfg.count; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt < max_retries && !ok; ++attempt) {
      const Eigen::Vector2d target = sample_target(rng, ws, p0, disc_r);
      try {
        Trajectory path = min_jerk_joint_path(model, cfg.initial_state, target,
                                              cfg.duration, cfg.dt, branch);
        ActuationSignal u = inverse_dynamics(model, path);
        Trajectory check = forward_dynamics(model, u, cfg.initial_state);
        const Eigen::Vector2d p_end =
            forward_kinematics(model, check.q(check.size() - 1));
        if ((p_end - target).norm() <= 1e-4) {
          out.push_back(std::move(u));
          ok = true;
        }
      } catch (const ReachabilityError&) {
        // chord left the annulus; resample
      } catch (const DivergenceError&) {
        // resample
      }
    }
    if (!ok)
      throw std::runtime_error(
          "generate_min_jerk_actuations: no valid target after retries");
  }
  return out;
}

std::vector<ActuationSignal> generate_lowpass_random_actuations(
    const ExplorationConfig& cfg) {
  cfg.validate();
  if (cfg.signal_class != SignalClass::lowpass_random)
    throw std::invalid_argument(
        "generate_lowpass_random_actuations: wrong class");
  std::mt19937_64 rng(cfg.rng_seed);
  const int dim = static_cast<int>(cfg.initial_state.q.size());
  std::vector<ActuationSignal> out;
  out.reserve(cfg.count);
  for (int i = 0; i < cfg.count; ++i)
    out.push_back(single_lowpass_random(rng, cfg, dim));
  return out;
}

ExplorationArchive run_exploration(const ArmModel& model,
                                   const ExplorationConfig& cfg) {
  cfg.validate();
  ExplorationArchive archive;
  archive.config = cfg;
  archive.model_fingerprint = model.fingerprint();

  if (cfg.signal_class == SignalClass::min_jerk) {
    archive.signals = generate_min_jerk_actuations(model, cfg);
    for (const auto& u : archive.signals)
      archive.responses.push_back(forward_dynamics(model, u, cfg.initial_state));
    return archive;
  }

  std::mt19937_64 rng(cfg.rng_seed);
  const int dim = static_cast<int>(cfg.initial_state.q.size());
  const int max_retries = 20;
  for (int i = 0; i < cfg.count; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt < max_retries && !ok; ++attempt) {
      ActuationSignal u = single_lowpass_random(rng, cfg, dim);
      try {
        Trajectory resp = forward_dynamics(model, u, cfg.initial_state);
        archive.signals.push_back(std::move(u));
        archive.responses.push_back(std::move(resp));
        ok = true;
      } catch (const DivergenceError& e) {
        std::cerr << "run_exploration: signal " << i << " diverged ("
                  << e.what() << "), redrawing\n";
      }
    }
    if (!ok)
      throw std::runtime_error(
          "run_exploration: repeated divergence for random signal " +
          std::to_string(i));
  }
  return archive;
}

}  // namespace synergy
