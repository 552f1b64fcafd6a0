#include "synergy/types.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

namespace synergy {

void ArmModel::validate() const {
  if (n_links < 1) throw std::invalid_argument("ArmModel: n_links must be >= 1");
  auto expect_size = [&](const std::vector<double>& v, const char* name) {
    if (static_cast<int>(v.size()) != n_links)
      throw std::invalid_argument(std::string("ArmModel: ") + name +
                                  " must have n_links entries");
  };
  expect_size(link_lengths, "link_lengths");
  expect_size(link_masses, "link_masses");
  expect_size(link_com_offsets, "link_com_offsets");
  expect_size(link_inertias, "link_inertias");
  expect_size(joint_damping, "joint_damping");
  for (int i = 0; i < n_links; ++i) {
    if (!(link_lengths[i] > 0.0))
      throw std::invalid_argument("ArmModel: link length must be > 0");
    if (!(link_masses[i] > 0.0))
      throw std::invalid_argument("ArmModel: link mass must be > 0");
    if (!(link_inertias[i] > 0.0))
      throw std::invalid_argument("ArmModel: link inertia must be > 0");
    if (link_com_offsets[i] < 0.0 || link_com_offsets[i] > link_lengths[i])
      throw std::invalid_argument("ArmModel: com offset outside [0, length]");
    if (joint_damping[i] < 0.0)
      throw std::invalid_argument("ArmModel: damping must be >= 0");
  }
  if (!std::isfinite(gravity) || gravity < 0.0)
    throw std::invalid_argument("ArmModel: gravity must be finite and >= 0");
}

ArmModel ArmModel::two_link_default() {
  ArmModel m;
  m.n_links = 2;
  m.link_lengths = {0.30, 0.33};
  m.link_masses = {2.10, 1.65};
  m.link_com_offsets = {0.15, 0.18};
  m.link_inertias = {0.0159, 0.0257};
  m.joint_damping = {0.1, 0.1};
  m.gravity = 0.0;
  m.validate();
  return m;
}

std::string ArmModel::fingerprint() const {
  // FNV-1a 64 over a canonical text rendering of the parameters.
  std::string canon = "n=" + std::to_string(n_links);
  char buf[64];
  auto append = [&](const std::vector<double>& v, const char* tag) {
    canon += tag;
    for (double x : v) {
      std::snprintf(buf, sizeof(buf), "%.17g,", x);
      canon += buf;
    }
  };
  append(link_lengths, ";l=");
  append(link_masses, ";m=");
  append(link_com_offsets, ";c=");
  append(link_inertias, ";I=");
  append(joint_damping, ";b=");
  std::snprintf(buf, sizeof(buf), ";g=%.17g", gravity);
  canon += buf;

  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

JointState::JointState(Eigen::VectorXd q_, Eigen::VectorXd qdot_)
    : q(std::move(q_)), qdot(std::move(qdot_)) {
  if (q.size() != qdot.size())
    throw DimensionError("JointState: q and qdot sizes differ");
  if (!q.allFinite() || !qdot.allFinite())
    throw std::invalid_argument("JointState: non-finite entries");
}

namespace {

// Fornberg weights: coefficients of a finite-difference approximation of the
// m-th derivative at x0 from samples at grid offsets `grid`.
Eigen::VectorXd fd_weights(double x0, const Eigen::VectorXd& grid, int m) {
  const int n = static_cast<int>(grid.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, m + 1);
  c(0, 0) = 1.0;
  double c1 = 1.0;
  double c4 = grid[0] - x0;
  for (int i = 1; i < n; ++i) {
    int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = grid[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = grid[i] - grid[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(m);
}

}  // namespace

Eigen::MatrixXd Trajectory::finite_difference(const Eigen::MatrixXd& f,
                                              double dt, int order) {
  const int n = static_cast<int>(f.rows());
  Eigen::MatrixXd d(n, f.cols());
  // 6-point stencils (4th-order accurate for both derivatives); for short
  // signals use whatever points exist
  const int width = std::min(n, 6);
  const double scale = order == 1 ? dt : dt * dt;
  for (int k = 0; k < n; ++k) {
    const int first = std::clamp(k - width / 2, 0, n - width);
    Eigen::VectorXd grid(width);
    for (int i = 0; i < width; ++i) grid[i] = first + i;
    const Eigen::VectorXd w =
        fd_weights(static_cast<double>(k), grid, order) / scale;
    d.row(k).setZero();
    for (int i = 0; i < width; ++i) d.row(k) += w[i] * f.row(first + i);
  }
  if (n == 2 && order == 2) d.setZero();
  return d;
}

Trajectory::Trajectory(double dt, Eigen::MatrixXd samples) : dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("Trajectory: dt must be > 0");
  if (samples.rows() < 2)
    throw std::invalid_argument("Trajectory: need at least 2 samples");
  if (!samples.allFinite())
    throw std::invalid_argument("Trajectory: non-finite samples");
  positions_ = std::move(samples);
  velocities_ = finite_difference(positions_, dt_, 1);
  accelerations_ = finite_difference(positions_, dt_, 2);
}

ActuationSignal::ActuationSignal(double dt_, Eigen::MatrixXd samples_)
    : dt(dt_), samples(std::move(samples_)) {
  if (!(dt > 0.0)) throw std::invalid_argument("ActuationSignal: dt must be > 0");
  if (samples.rows() < 2)
    throw std::invalid_argument("ActuationSignal: need at least 2 samples");
}

double wrap_angle(double x) {
  double w = std::remainder(x, 2.0 * M_PI);  // in [-pi, pi]
  if (w <= -M_PI) w += 2.0 * M_PI;
  return w;
}

Eigen::VectorXd wrap_angles(const Eigen::VectorXd& x) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = wrap_angle(x[i]);
  return out;
}

}  // namespace synergy
