#include "synergy/archive_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>
#include <zlib.h>

namespace synergy {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) throw std::runtime_error("archive: empty matrix");
  const int cols = static_cast<int>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j.at(i).get<double>();
  return v;
}

json config_to_json(const ExplorationConfig& cfg) {
  return json{
      {"signal_class",
       cfg.signal_class == SignalClass::min_jerk ? "min_jerk" : "lowpass_random"},
      {"count", cfg.count},
      {"duration", cfg.duration},
      {"dt", cfg.dt},
      {"amplitude", cfg.amplitude},
      {"cutoff", cfg.cutoff},
      {"target_disc_frac", cfg.target_disc_frac},
      {"rng_seed", cfg.rng_seed},
      {"initial_q", vector_to_json(cfg.initial_state.q)},
      {"initial_qdot", vector_to_json(cfg.initial_state.qdot)}};
}

ExplorationConfig config_from_json(const json& j) {
  ExplorationConfig cfg;
  cfg.signal_class = j.at("signal_class").get<std::string>() == "min_jerk"
                         ? SignalClass::min_jerk
                         : SignalClass::lowpass_random;
  cfg.count = j.at("count").get<int>();
  cfg.duration = j.at("duration").get<double>();
  cfg.dt = j.at("dt").get<double>();
  cfg.amplitude = j.at("amplitude").get<double>();
  cfg.cutoff = j.at("cutoff").get<double>();
  cfg.target_disc_frac = j.at("target_disc_frac").get<double>();
  cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  cfg.initial_state = JointState(vector_from_json(j.at("initial_q")),
                                 vector_from_json(j.at("initial_qdot")));
  return cfg;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string read_file_maybe_gzip(const std::string& path) {
  // gzread handles both gzip and plain content
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::string content;
  char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof(buf))) > 0) content.append(buf, n);
  const bool bad = n < 0;
  gzclose(f);
  if (bad) throw std::runtime_error("read/inflate failed: " + path);
  return content;
}

json archive_to_json(const ExplorationArchive& archive) {
  json signals = json::array();
  for (const auto& u : archive.signals) signals.push_back(matrix_to_json(u.samples));
  json responses = json::array();
  for (const auto& r : archive.responses)
    responses.push_back(matrix_to_json(r.positions()));
  const int n_samples =
      archive.responses.empty() ? 0 : archive.responses.front().size();
  const int n_joints =
      archive.responses.empty() ? 0 : archive.responses.front().dim();
  return json{
      {"format", "synergy-archive-v1"},
      {"kind", "exploration"},
      {"header",
       {{"n_signals", archive.signals.size()},
        {"n_samples", n_samples},
        {"n_joints", n_joints},
        {"dt", archive.config.dt},
        {"dims",
         "signals[k][t][j]: torque [N m]; responses[k][t][j]: angle [rad]"}}},
      {"config", config_to_json(archive.config)},
      {"model_fingerprint", archive.model_fingerprint},
      {"signals", std::move(signals)},
      {"responses", std::move(responses)}};
}

ExplorationArchive archive_from_json(const json& j) {
  if (j.at("format").get<std::string>() != "synergy-archive-v1")
    throw std::runtime_error("archive: unknown format");
  ExplorationArchive archive;
  archive.config = config_from_json(j.at("config"));
  archive.model_fingerprint = j.at("model_fingerprint").get<std::string>();
  const double dt = archive.config.dt;
  for (const auto& s : j.at("signals"))
    archive.signals.emplace_back(dt, matrix_from_json(s));
  for (const auto& r : j.at("responses"))
    archive.responses.emplace_back(dt, matrix_from_json(r));
  if (archive.signals.size() != archive.responses.size())
    throw std::runtime_error("archive: signal/response count mismatch");
  for (std::size_t i = 0; i < archive.signals.size(); ++i)
    if (archive.signals[i].size() != archive.responses[i].size() ||
        archive.signals[i].dim() != archive.responses[i].dim())
      throw std::runtime_error("archive: pairing shape mismatch at " +
                               std::to_string(i));
  return archive;
}

void save_archive(const ExplorationArchive& archive, const std::string& path) {
  write_text_file(path, archive_to_json(archive).dump());
}

ExplorationArchive load_archive(const std::string& path) {
  return archive_from_json(json::parse(read_file_maybe_gzip(path)));
}

void validate_archive(const ArmModel& model, const ExplorationArchive& archive,
                      int n_check, std::uint64_t seed) {
  if (archive.model_fingerprint != model.fingerprint())
    throw std::runtime_error(
        "archive model fingerprint does not match the configured model");
  if (archive.signals.empty()) throw std::runtime_error("archive: empty");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, archive.signals.size() - 1);
  for (int c = 0; c < n_check; ++c) {
    const std::size_t i = pick(rng);
    const Trajectory re = forward_dynamics(model, archive.signals[i],
                                           archive.config.initial_state);
    if (re.positions() != archive.responses[i].positions())
      throw std::runtime_error(
          "archive: stored response " + std::to_string(i) +
          " does not reproduce under re-integration");
  }
}

void save_basis(const BasisSet& basis, const std::string& model_fingerprint,
                const std::string& path) {
  json signals = json::array();
  for (const auto& u : basis.synergies()) signals.push_back(matrix_to_json(u.samples));
  json responses = json::array();
  for (const auto& r : basis.responses())
    responses.push_back(matrix_to_json(r.positions()));
  const json j{
      {"format", "synergy-archive-v1"},
      {"kind", "reduced"},
      {"header",
       {{"n_signals", basis.size()},
        {"n_samples", basis.n_samples()},
        {"n_joints", basis.dim()},
        {"dt", basis.dt()},
        {"dims",
         "signals[k][t][j]: torque [N m]; responses[k][t][j]: angle [rad]"}}},
      {"model_fingerprint", model_fingerprint},
      {"initial_state",
       {{"q", vector_to_json(basis.initial_state().q)},
        {"qdot", vector_to_json(basis.initial_state().qdot)}}},
      {"signals", std::move(signals)},
      {"responses", std::move(responses)}};
  write_text_file(path, j.dump());
}

BasisSet load_basis(const std::string& path, std::string* model_fingerprint) {
  const json j = json::parse(read_file_maybe_gzip(path));
  if (j.at("format").get<std::string>() != "synergy-archive-v1" ||
      j.at("kind").get<std::string>() != "reduced")
    throw std::runtime_error("not a reduced basis file: " + path);
  if (model_fingerprint)
    *model_fingerprint = j.at("model_fingerprint").get<std::string>();
  const double dt = j.at("header").at("dt").get<double>();
  std::vector<ActuationSignal> synergies;
  std::vector<Trajectory> responses;
  for (const auto& s : j.at("signals"))
    synergies.emplace_back(dt, matrix_from_json(s));
  for (const auto& r : j.at("responses"))
    responses.emplace_back(dt, matrix_from_json(r));
  JointState init(vector_from_json(j.at("initial_state").at("q")),
                  vector_from_json(j.at("initial_state").at("qdot")));
  return BasisSet(std::move(synergies), std::move(responses), std::move(init));
}

json error_report_to_json(const ErrorReport& report) {
  return json{{"err_I", report.err_I},
              {"err_P", report.err_P},
              {"err_F", report.err_F},
              {"err_F_ee", report.err_F_ee}};
}

json task_solution_to_json(const TaskSolution& sol) {
  return json{{"a", vector_to_json(sol.a.coefficients)},
              {"b", vector_to_json(sol.b.coefficients)},
              {"rank_deficient", sol.a.rank_deficient},
              {"errors", error_report_to_json(sol.errors)}};
}

void save_error_map_csv(const ErrorMap& map, const std::string& path) {
  std::ostringstream out;
  out << "x,y,err_P,err_F_ee\n";
  char buf[128];
  for (std::size_t i = 0; i < map.grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n",
                  map.grid[i].x(), map.grid[i].y(), map.err_p[i],
                  map.err_f_ee[i]);
    out << buf;
  }
  write_text_file(path, out.str());
}

void save_error_map_svg(const ErrorMap& map, const ArmModel& model,
                        const std::string& path) {
  const WorkspaceAnnulus ws = workspace_boundary(model);
  const double world = 2.1 * ws.r_max;
  const int size = 640;
  const double scale = size / world;
  auto px = [&](double x) { return size / 2.0 + x * scale; };
  auto py = [&](double y) { return size / 2.0 - y * scale; };

  double lo = 1e300, hi = -1e300;
  for (double v : map.err_p)
    if (std::isfinite(v) && v > 0) {
      lo = std::min(lo, std::log10(v));
      hi = std::max(hi, std::log10(v));
    }
  if (!(hi > lo)) {
    lo = -9;
    hi = 0;
  }

  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << size
      << "' height='" << size << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<circle cx='" << px(0) << "' cy='" << py(0) << "' r='"
      << ws.r_max * scale << "' fill='none' stroke='black'/>\n"
      << "<circle cx='" << px(0) << "' cy='" << py(0) << "' r='"
      << ws.r_min * scale << "' fill='none' stroke='black'/>\n";
  const double cell = 0.45 * (ws.r_max - ws.r_min) / 12.0 * scale * 2.0;
  for (std::size_t i = 0; i < map.grid.size(); ++i) {
    double t = 0.5;
    if (std::isfinite(map.err_p[i]) && map.err_p[i] > 0)
      t = (std::log10(map.err_p[i]) - lo) / (hi - lo);
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(255 * t);
    const int b = static_cast<int>(255 * (1.0 - t));
    out << "<rect x='" << px(map.grid[i].x()) - cell / 2 << "' y='"
        << py(map.grid[i].y()) - cell / 2 << "' width='" << cell
        << "' height='" << cell << "' fill='rgb(" << r << ",0," << b
        << ")'/>\n";
  }
  out << "<text x='8' y='16' font-size='12'>log10 err_P in [" << lo << ", "
      << hi << "], basis size " << map.basis_size << "</text>\n</svg>\n";
  write_text_file(path, out.str());
}

void save_proto_tasks_json(const std::vector<ProtoTask>& protos,
                           const std::string& path) {
  json arr = json::array();
  for (const auto& p : protos)
    arr.push_back(
        {{"x", p.target.x()},
         {"y", p.target.y()},
         {"provenance", p.provenance == ProtoTask::Provenance::random_seed
                            ? "random_seed"
                            : "error_driven"}});
  write_text_file(path, json{{"proto_tasks", arr}}.dump(2));
}

std::vector<ProtoTask> load_proto_tasks_json(const std::string& path) {
  const json j = json::parse(read_file_maybe_gzip(path));
  std::vector<ProtoTask> out;
  for (const auto& p : j.at("proto_tasks"))
    out.push_back(ProtoTask{
        Eigen::Vector2d(p.at("x").get<double>(), p.at("y").get<double>()),
        p.at("provenance").get<std::string>() == "random_seed"
            ? ProtoTask::Provenance::random_seed
            : ProtoTask::Provenance::error_driven});
  return out;
}

}  // namespace synergy
