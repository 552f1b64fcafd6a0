#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <zlib.h>

#include "synergy/archive_io.hpp"
#include "synergy/config.hpp"

using namespace synergy;
namespace fs = std::filesystem;

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

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "synergy_io_test";
  fs::create_directories(dir);
  return dir;
}

void gzip_file(const fs::path& src, const fs::path& dst) {
  std::ifstream in(src, std::ios::binary);
  const std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  gzFile gz = gzopen(dst.string().c_str(), "wb");
  REQUIRE(gz != nullptr);
  gzwrite(gz, content.data(), static_cast<unsigned>(content.size()));
  gzclose(gz);
}

}  // namespace

TEST_CASE("archive JSON round-trip is bit-identical") {
  const ExplorationArchive archive = make_archive(4, 51);
  const fs::path path = temp_dir() / "archive.json";
  save_archive(archive, path.string());
  const ExplorationArchive back = load_archive(path.string());

  CHECK(back.model_fingerprint == archive.model_fingerprint);
  CHECK(back.config.rng_seed == archive.config.rng_seed);
  CHECK(back.config.dt == archive.config.dt);
  CHECK(back.config.signal_class == archive.config.signal_class);
  REQUIRE(back.signals.size() == archive.signals.size());
  for (size_t i = 0; i < archive.signals.size(); ++i) {
    CHECK(back.signals[i].samples == archive.signals[i].samples);
    CHECK(back.responses[i].positions() == archive.responses[i].positions());
  }
  CHECK((back.config.initial_state.q - archive.config.initial_state.q)
            .lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("gzip-compressed archives load transparently") {
  const ExplorationArchive archive = make_archive(3, 52);
  const fs::path plain = temp_dir() / "archive_plain.json";
  const fs::path gz = temp_dir() / "archive_plain.json.gz";
  save_archive(archive, plain.string());
  gzip_file(plain, gz);

  const ExplorationArchive back = load_archive(gz.string());
  REQUIRE(back.signals.size() == archive.signals.size());
  for (size_t i = 0; i < archive.signals.size(); ++i)
    CHECK(back.signals[i].samples == archive.signals[i].samples);
}

TEST_CASE("archive validation re-integrates pairs and detects tampering") {
  ExplorationArchive archive = make_archive(6, 53);
  validate_archive(kArm, archive);  // genuine archive passes

  // fingerprint from a different model is rejected
  ExplorationArchive wrong_fp = archive;
  ArmModel other = kArm;
  other.link_masses = {2.0, 1.0};
  wrong_fp.model_fingerprint = other.fingerprint();
  CHECK_THROWS(validate_archive(kArm, wrong_fp));

  // a corrupted response breaks the pairing invariant
  ExplorationArchive tampered = archive;
  Eigen::MatrixXd qs = tampered.responses[2].positions();
  qs(100, 0) += 1e-3;
  tampered.responses[2] = Trajectory(tampered.responses[2].dt(), qs);
  // enough seeded picks with replacement to surely visit every index
  CHECK_THROWS(validate_archive(kArm, tampered, 64, 0));
}

TEST_CASE("reduced basis save/load round-trip") {
  const ExplorationArchive archive = make_archive(5, 54);
  const BasisSet basis = basis_from_archive(archive);
  const fs::path path = temp_dir() / "basis.json";
  save_basis(basis, kArm.fingerprint(), path.string());

  std::string fp;
  const BasisSet back = load_basis(path.string(), &fp);
  CHECK(fp == kArm.fingerprint());
  REQUIRE(back.size() == basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    CHECK(back.synergy(i).samples == basis.synergy(i).samples);
    CHECK(back.response(i).positions() == basis.response(i).positions());
  }
  CHECK((back.initial_state().q - basis.initial_state().q)
            .lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("proto-task JSON round-trip") {
  const std::vector<ProtoTask> protos{
      {Eigen::Vector2d(0.1, 0.2), ProtoTask::Provenance::random_seed},
      {Eigen::Vector2d(-0.3, 0.4), ProtoTask::Provenance::error_driven}};
  const fs::path path = temp_dir() / "protos.json";
  save_proto_tasks_json(protos, path.string());
  const auto back = load_proto_tasks_json(path.string());
  REQUIRE(back.size() == 2u);
  CHECK(back[0].target == protos[0].target);
  CHECK(back[1].target == protos[1].target);
  CHECK(back[0].provenance == ProtoTask::Provenance::random_seed);
  CHECK(back[1].provenance == ProtoTask::Provenance::error_driven);
}

TEST_CASE("error map CSV and SVG outputs") {
  ErrorMap map;
  map.grid = {Eigen::Vector2d(0.1, 0.2), Eigen::Vector2d(0.3, -0.4)};
  map.err_p = {1.5, std::nan("")};
  map.err_f_ee = {0.01, std::nan("")};
  map.basis_size = 3;

  const fs::path csv = temp_dir() / "map.csv";
  save_error_map_csv(map, csv.string());
  std::ifstream in(csv);
  std::string header, row1, row2;
  std::getline(in, header);
  while (header.rfind("#", 0) == 0) std::getline(in, header);  // comments
  CHECK(header == "x,y,err_P,err_F_ee");
  std::getline(in, row1);
  std::getline(in, row2);
  CHECK(row1.rfind("0.1", 0) == 0);
  CHECK(row2.find("nan") != std::string::npos);

  const fs::path svg = temp_dir() / "map.svg";
  save_error_map_svg(map, kArm, svg.string());
  std::ifstream sin(svg);
  const std::string content((std::istreambuf_iterator<char>(sin)),
                            std::istreambuf_iterator<char>());
  CHECK(content.find("<svg") != std::string::npos);
  CHECK(content.find("</svg>") != std::string::npos);
}

TEST_CASE("key=value and JSON configs produce identical settings") {
  const fs::path kv_path = temp_dir() / "config.cfg";
  {
    std::ofstream out(kv_path);
    out << "# experiment settings\n"
        << "[exploration]\n"
        << "exploration.random_count = 12\n"
        << "exploration.amplitude = 3.5\n"
        << "reduction.n_proto_tasks = 4\n"
        << "initial_posture = 0.5, 1.3\n"
        << "compare.n_subsets = 17\n"
        << "output_dir = out_test\n";
  }
  const ExperimentConfig kv = load_experiment_config(kv_path.string());

  const fs::path json_path = temp_dir() / "config.json";
  {
    std::ofstream out(json_path);
    out << R"({"exploration": {"random_count": 12, "amplitude": 3.5},
               "reduction": {"n_proto_tasks": 4},
               "initial_posture": [0.5, 1.3],
               "compare": {"n_subsets": 17},
               "output_dir": "out_test"})";
  }
  const ExperimentConfig js = load_experiment_config(json_path.string());

  for (const ExperimentConfig* cfg : {&kv, &js}) {
    CHECK(cfg->explore_random.count == 12);
    CHECK(cfg->explore_random.amplitude == 3.5);
    CHECK(cfg->n_proto_tasks == 4);
    CHECK(cfg->initial_posture == Eigen::Vector2d(0.5, 1.3));
    CHECK(cfg->n_subsets == 17);
    CHECK(cfg->output_dir == "out_test");
    // untouched keys keep their defaults
    CHECK(cfg->explore_min_jerk.count == 100);
    CHECK(cfg->subset_seed == 11);
  }
  CHECK(kv.fingerprint() == js.fingerprint());
  CHECK(kv.fingerprint() != default_experiment_config().fingerprint());

  // targets move with the initial posture when not given explicitly
  CHECK(kv.evaluation_targets.size() == 13u);
  const Eigen::Vector2d p0 = forward_kinematics(kArm, kv.initial_posture);
  CHECK((kv.evaluation_targets[0] - p0).norm() <=
        kv.target_circle_radius + 1e-9);
}

TEST_CASE("malformed config files are rejected") {
  const fs::path bad = temp_dir() / "bad.cfg";
  {
    std::ofstream out(bad);
    out << "this line has no equals sign\n";
  }
  CHECK_THROWS(load_experiment_config(bad.string()));

  const fs::path missing = temp_dir() / "does_not_exist.cfg";
  CHECK_THROWS(load_experiment_config(missing.string()));
}
