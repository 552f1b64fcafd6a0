#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "synergy/dynamics.hpp"
#include "synergy/types.hpp"

namespace synergy {

enum class SignalClass { min_jerk, lowpass_random };

struct ExplorationConfig {
  SignalClass signal_class = SignalClass::lowpass_random;
  int count = 90;
  double duration = 3.0;   // T [s]
  double dt = 5e-3;
  JointState initial_state;
  double amplitude = 0.5;  // torque scale for the random class [N m]
  double cutoff = 2.0;     // low-pass cutoff [Hz]
  // Min-jerk targets are sampled uniformly on the workspace annulus
  // intersected with a disc of radius target_disc_frac * r_max around the
  // initial end-effector point.
  double target_disc_frac = 0.9;
  std::uint64_t rng_seed = 0;

  int n_samples() const { return static_cast<int>(std::lround(duration / dt)) + 1; }
  void validate() const;
};

// Phi_0 / Theta_0 pairs collected during the exploration phase.
struct ExplorationArchive {
  ExplorationConfig config;
  std::vector<ActuationSignal> signals;    // Phi_0
  std::vector<Trajectory> responses;       // Theta_0
  std::string model_fingerprint;
};

// Minimum-jerk time profile s(tau) = 10 tau^3 - 15 tau^4 + 6 tau^5.
double min_jerk_profile(double tau);
double min_jerk_profile_rate(double tau);  // ds/dtau

// Torques whose forward dynamics trace straight minimum-jerk end-effector
// strokes to randomly sampled reachable targets. Each actuation is verified
// by forward integration (final end-effector error <= 1e-4 m); failing
// targets are resampled, with bounded retries.
std::vector<ActuationSignal> generate_min_jerk_actuations(
    const ArmModel& model, const ExplorationConfig& cfg);

// Uniform random torques, zero-phase forward-backward single-pole low-pass
// at cfg.cutoff, then windowed by 4 s(tau)(1-s(tau)) so torque vanishes at
// both endpoints. Deterministic given cfg.rng_seed.
std::vector<ActuationSignal> generate_lowpass_random_actuations(
    const ExplorationConfig& cfg);

// Generates signals per class and integrates each one from
// cfg.initial_state; divergent random signals are dropped and redrawn.
ExplorationArchive run_exploration(const ArmModel& model,
                                   const ExplorationConfig& cfg);

// Elbow branch matching the sign of the initial posture's elbow angle.
ElbowBranch branch_of(const JointState& state);

}  // namespace synergy
