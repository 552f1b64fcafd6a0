#include <doctest.h>

#include <cmath>

#include "synergy/archive_io.hpp"
#include "synergy/reduction.hpp"

using namespace synergy;

namespace {

const ArmModel kArm = ArmModel::two_link_default();

ExplorationArchive make_archive(int count, std::uint64_t seed) {
  ExplorationConfig cfg;
  cfg.signal_class = SignalClass::lowpass_random;
  cfg.count = count;
  cfg.duration = 1.0;
  cfg.dt = 5e-3;
  cfg.amplitude = 5.0;
  cfg.cutoff = 2.0;
  cfg.rng_seed = seed;
  cfg.initial_state = JointState::rest(Eigen::Vector2d(M_PI / 4.0, M_PI / 2.0));
  return run_exploration(kArm, cfg);
}

}  // namespace

TEST_CASE("polar grid stays inside the shrunk annulus") {
  GridSpec spec;  // 24 x 12, 5% shrink
  const auto grid = make_grid(kArm, spec);
  CHECK(grid.size() == 24u * 12u);
  const WorkspaceAnnulus ws = workspace_boundary(kArm);
  const double span = ws.r_max - ws.r_min;
  const double r_lo = ws.r_min + spec.shrink * span;
  const double r_hi = ws.r_max - spec.shrink * span;
  for (const auto& p : grid) {
    CHECK(p.norm() >= r_lo - 1e-12);
    CHECK(p.norm() <= r_hi + 1e-12);
  }

  GridSpec tiny{4, 3, 0.1};
  const auto small = make_grid(kArm, tiny);
  CHECK(small.size() == 12u);
  // radii span the shrunk interval inclusively
  double min_r = 1e9, max_r = 0.0;
  for (const auto& p : small) {
    min_r = std::min(min_r, p.norm());
    max_r = std::max(max_r, p.norm());
  }
  const double span2 = ws.r_max - ws.r_min;
  CHECK(min_r == doctest::Approx(ws.r_min + 0.1 * span2).epsilon(1e-9));
  CHECK(max_r == doctest::Approx(ws.r_max - 0.1 * span2).epsilon(1e-9));
}

TEST_CASE("proto-task targets convert to rest-to-rest joint tasks") {
  const ExplorationArchive archive = make_archive(12, 41);
  const BasisSet basis = basis_from_archive(archive);
  const Eigen::Vector2d target(0.05, 0.45);
  const ReachingTask task = proto_to_task(kArm, basis, target);
  task.validate();
  CHECK((task.q0 - basis.initial_state().q).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((forward_kinematics(kArm, task.qT) - target).norm() <= 1e-12);
  CHECK(task.T == basis.duration());
}

TEST_CASE("reduced basis reproduces its own proto-task almost exactly") {
  const ExplorationArchive archive = make_archive(20, 42);
  const BasisSet expl = basis_from_archive(archive);
  ReductionParams params;
  const std::vector<ProtoTask> protos{
      {Eigen::Vector2d(0.10, 0.40), ProtoTask::Provenance::random_seed}};
  const BasisSet reduced = reduce(kArm, expl, protos, params);
  CHECK(reduced.size() == 1);

  // synergy/response pairing: synergy is the inverse dynamics of the response
  const ActuationSignal re = inverse_dynamics(kArm, reduced.response(0));
  CHECK((re.samples - reduced.synergy(0).samples).lpNorm<Eigen::Infinity>() ==
        0.0);

  const ReachingTask task = proto_to_task(kArm, reduced, protos[0].target);
  const TaskSolution sol = solve_task(kArm, reduced, task);
  CHECK(sol.errors.err_I <= 1e-8);
  CHECK(sol.errors.err_P <= 1e-8);
}

TEST_CASE("proto-tasks violating the acceptance threshold are rejected") {
  // two broad random signals cannot satisfy four end constraints exactly
  const ExplorationArchive archive = make_archive(2, 43);
  const BasisSet expl = basis_from_archive(archive);
  ReductionParams params;
  const std::vector<ProtoTask> protos{
      {Eigen::Vector2d(-0.20, 0.35), ProtoTask::Provenance::random_seed}};
  try {
    reduce(kArm, expl, protos, params);
    FAIL("expected ProtoTaskRejectedError");
  } catch (const ProtoTaskRejectedError& e) {
    CHECK(e.err_i > params.err_i_threshold);
  }
}

TEST_CASE("error map marks unreachable targets as NaN") {
  const ExplorationArchive archive = make_archive(12, 44);
  const BasisSet basis = basis_from_archive(archive);
  const std::vector<Eigen::Vector2d> grid{
      Eigen::Vector2d(0.10, 0.40),   // reachable
      Eigen::Vector2d(5.0, 5.0),     // far outside the workspace
  };
  const ErrorMap map = evaluate_error_map(kArm, basis, grid);
  REQUIRE(map.err_p.size() == 2u);
  CHECK(std::isfinite(map.err_p[0]));
  CHECK(std::isnan(map.err_p[1]));
  CHECK(std::isnan(map.err_f_ee[1]));
  CHECK(map.mean_err_p() == doctest::Approx(map.err_p[0]));
}

TEST_CASE("proto-task selection: argmax with exclusion and tie-breaks") {
  ErrorMap map;
  map.grid = {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 0.0),
              Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(1.0, 1.0),
              Eigen::Vector2d(2.0, 0.0)};
  map.err_p = {0.1, 0.9, 0.5, 0.9, std::nan("")};
  map.err_f_ee = {0.0, 0.0, 0.0, 0.0, 0.0};

  // plain argmax, lowest index wins the tie between 1 and 3
  ProtoTask p = add_proto_task(map, {}, 0.05);
  CHECK(p.target == Eigen::Vector2d(1.0, 0.0));
  CHECK(p.provenance == ProtoTask::Provenance::error_driven);

  // exclude a neighborhood of the winner: next best admissible is index 3
  const std::vector<ProtoTask> existing{
      {Eigen::Vector2d(1.0, 0.0), ProtoTask::Provenance::error_driven}};
  p = add_proto_task(map, existing, 0.05);
  CHECK(p.target == Eigen::Vector2d(1.0, 1.0));

  // large exclusion radius leaves only the low-error far corner
  p = add_proto_task(map, existing, 1.05);
  CHECK(p.target == Eigen::Vector2d(0.0, 1.0));
}

TEST_CASE("basis growth is deterministic and monotone in size") {
  const ExplorationArchive archive = make_archive(20, 45);
  const BasisSet expl = basis_from_archive(archive);
  ReductionParams params;
  params.grid = GridSpec{6, 4, 0.05};

  const GrowthResult g1 = grow_basis(kArm, expl, 3, 99, params);
  const GrowthResult g2 = grow_basis(kArm, expl, 3, 99, params);
  REQUIRE(g1.proto_tasks.size() == 3u);
  REQUIRE(g2.proto_tasks.size() == 3u);
  for (size_t i = 0; i < g1.proto_tasks.size(); ++i)
    CHECK(g1.proto_tasks[i].target == g2.proto_tasks[i].target);
  CHECK(g1.basis.size() == 3);
  CHECK(g1.maps.size() == 2u);  // maps at sizes 2 and 3
  CHECK(g1.maps[0].basis_size == 2);
  CHECK(g1.maps[1].basis_size == 3);

  // the first two proto-tasks are the random seeds, the rest error-driven
  CHECK(g1.proto_tasks[0].provenance == ProtoTask::Provenance::random_seed);
  CHECK(g1.proto_tasks[1].provenance == ProtoTask::Provenance::random_seed);
  CHECK(g1.proto_tasks[2].provenance == ProtoTask::Provenance::error_driven);

  // error-driven additions respect the exclusion radius
  for (size_t i = 2; i < g1.proto_tasks.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      CHECK((g1.proto_tasks[i].target - g1.proto_tasks[j].target).norm() >=
            params.d_min);
}
