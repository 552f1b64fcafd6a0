#include "synergy/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

#include <nlohmann/json.hpp>

#include "synergy/archive_io.hpp"

namespace synergy {

using nlohmann::json;

void ExperimentConfig::validate() const {
  model.validate();
  if (initial_posture.size() != model.n_links)
    throw DimensionError("config: initial_posture dimension mismatch");
  explore_min_jerk.validate();
  explore_random.validate();
  if (evaluation_targets.empty())
    throw std::invalid_argument("config: no evaluation targets");
  if (n_proto_tasks < 2 || n_subsets < 1 || subset_size < 1)
    throw std::invalid_argument("config: counts must be positive");
  if (output_dir.empty())
    throw std::invalid_argument("config: output_dir unset");
}

std::vector<Eigen::Vector2d> default_evaluation_targets(
    const ArmModel& model, const Eigen::VectorXd& initial_posture,
    double circle_radius) {
  const WorkspaceAnnulus ws = workspace_boundary(model);
  const double span = ws.r_max - ws.r_min;
  const double r_lo = ws.r_min + 0.02 * span;
  const double r_hi = ws.r_max - 0.02 * span;
  const Eigen::Vector2d p0 = forward_kinematics(model, initial_posture);

  std::vector<Eigen::Vector2d> targets;
  for (int i = 0; i < 12; ++i) {
    const double phi = 2.0 * M_PI * i / 12.0;
    Eigen::Vector2d p =
        p0 + circle_radius * Eigen::Vector2d(std::cos(phi), std::sin(phi));
    const double r = p.norm();
    if (r > r_hi) p *= r_hi / r;  // clip to workspace
    if (r < r_lo) p *= r_lo / r;
    targets.push_back(p);
  }
  // one near-boundary target along the initial end-effector direction
  targets.push_back(p0.normalized() * r_hi);
  return targets;
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig cfg;
  cfg.model = ArmModel::two_link_default();
  cfg.initial_posture = Eigen::Vector2d(M_PI / 4.0, M_PI / 2.0);

  const JointState init = JointState::rest(cfg.initial_posture);
  cfg.explore_min_jerk.signal_class = SignalClass::min_jerk;
  cfg.explore_min_jerk.count = 100;
  cfg.explore_min_jerk.rng_seed = 5;
  cfg.explore_min_jerk.initial_state = init;
  cfg.explore_random.signal_class = SignalClass::lowpass_random;
  cfg.explore_random.count = 90;
  cfg.explore_random.rng_seed = 2;
  cfg.explore_random.initial_state = init;

  cfg.evaluation_targets = default_evaluation_targets(
      cfg.model, cfg.initial_posture, cfg.target_circle_radius);
  return cfg;
}

std::string config_to_json_string(const ExperimentConfig& cfg) {
  json targets = json::array();
  for (const auto& p : cfg.evaluation_targets)
    targets.push_back({p.x(), p.y()});
  json posture = json::array();
  for (Eigen::Index i = 0; i < cfg.initial_posture.size(); ++i)
    posture.push_back(cfg.initial_posture[i]);
  const json j{
      {"model",
       {{"link_lengths", cfg.model.link_lengths},
        {"link_masses", cfg.model.link_masses},
        {"link_com_offsets", cfg.model.link_com_offsets},
        {"link_inertias", cfg.model.link_inertias},
        {"joint_damping", cfg.model.joint_damping},
        {"gravity", cfg.model.gravity}}},
      {"initial_posture", posture},
      {"exploration",
       {{"duration", cfg.explore_min_jerk.duration},
        {"dt", cfg.explore_min_jerk.dt},
        {"min_jerk_count", cfg.explore_min_jerk.count},
        {"random_count", cfg.explore_random.count},
        {"amplitude", cfg.explore_random.amplitude},
        {"cutoff", cfg.explore_random.cutoff},
        {"target_disc_frac", cfg.explore_min_jerk.target_disc_frac},
        {"min_jerk_seed", cfg.explore_min_jerk.rng_seed},
        {"random_seed", cfg.explore_random.rng_seed}}},
      {"targets",
       {{"circle_radius", cfg.target_circle_radius}, {"points", targets}}},
      {"reduction",
       {{"n_proto_tasks", cfg.n_proto_tasks},
        {"seed", cfg.reduction_seed},
        {"d_min", cfg.reduction.d_min},
        {"err_i_threshold", cfg.reduction.err_i_threshold},
        {"grid_angles", cfg.reduction.grid.n_angles},
        {"grid_radii", cfg.reduction.grid.n_radii},
        {"grid_shrink", cfg.reduction.grid.shrink}}},
      {"compare",
       {{"n_subsets", cfg.n_subsets},
        {"subset_size", cfg.subset_size},
        {"seed", cfg.subset_seed}}},
      {"output_dir", cfg.output_dir}};
  return j.dump(2);
}

std::string ExperimentConfig::fingerprint() const {
  // the output directory does not influence any computed result
  json j = json::parse(config_to_json_string(*this));
  j.erase("output_dir");
  const std::string canon = j.dump(2);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

using Value = std::variant<double, std::vector<double>, std::string>;
using KeyMap = std::map<std::string, Value>;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

Value parse_value(const std::string& raw) {
  const std::string v = trim(raw);
  if (v.find(',') != std::string::npos) {
    std::vector<double> list;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) list.push_back(std::stod(trim(item)));
    return list;
  }
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (...) {
  }
  std::string s = v;
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
      s.back() == s.front())
    s = s.substr(1, s.size() - 2);
  return s;
}

void flatten_json(const json& j, const std::string& prefix, KeyMap& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const json& v = it.value();
    if (v.is_object()) {
      flatten_json(v, key, out);
    } else if (v.is_array()) {
      std::vector<double> list;
      for (const auto& e : v) {
        if (e.is_array())  // list of pairs, e.g. targets.points
          for (const auto& x : e) list.push_back(x.get<double>());
        else
          list.push_back(e.get<double>());
      }
      out[key] = list;
    } else if (v.is_string()) {
      out[key] = v.get<std::string>();
    } else {
      out[key] = v.get<double>();
    }
  }
}

KeyMap parse_key_value_file(const std::string& content) {
  KeyMap out;
  std::stringstream ss(content);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;  // section headers ok
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected 'key = value' at line " +
                               std::to_string(lineno));
    out[trim(line.substr(0, eq))] = parse_value(line.substr(eq + 1));
  }
  return out;
}

double get_num(const Value& v) {
  if (auto* d = std::get_if<double>(&v)) return *d;
  throw std::runtime_error("config: expected a number");
}

std::vector<double> get_list(const Value& v) {
  if (auto* l = std::get_if<std::vector<double>>(&v)) return *l;
  if (auto* d = std::get_if<double>(&v)) return {*d};
  throw std::runtime_error("config: expected a number list");
}

void apply_overrides(ExperimentConfig& cfg, const KeyMap& kv) {
  auto num = [&](const char* key, double& dst) {
    if (auto it = kv.find(key); it != kv.end()) dst = get_num(it->second);
  };
  auto num_i = [&](const char* key, int& dst) {
    if (auto it = kv.find(key); it != kv.end())
      dst = static_cast<int>(std::llround(get_num(it->second)));
  };
  auto num_u64 = [&](const char* key, std::uint64_t& dst) {
    if (auto it = kv.find(key); it != kv.end())
      dst = static_cast<std::uint64_t>(std::llround(get_num(it->second)));
  };
  auto list = [&](const char* key, std::vector<double>& dst) {
    if (auto it = kv.find(key); it != kv.end()) dst = get_list(it->second);
  };

  list("model.link_lengths", cfg.model.link_lengths);
  list("model.link_masses", cfg.model.link_masses);
  list("model.link_com_offsets", cfg.model.link_com_offsets);
  list("model.link_inertias", cfg.model.link_inertias);
  list("model.joint_damping", cfg.model.joint_damping);
  num("model.gravity", cfg.model.gravity);
  cfg.model.n_links = static_cast<int>(cfg.model.link_lengths.size());

  if (auto it = kv.find("initial_posture"); it != kv.end()) {
    const auto l = get_list(it->second);
    cfg.initial_posture = Eigen::Map<const Eigen::VectorXd>(
        l.data(), static_cast<Eigen::Index>(l.size()));
  }

  double duration = cfg.explore_min_jerk.duration, dt = cfg.explore_min_jerk.dt;
  num("exploration.duration", duration);
  num("exploration.dt", dt);
  cfg.explore_min_jerk.duration = cfg.explore_random.duration = duration;
  cfg.explore_min_jerk.dt = cfg.explore_random.dt = dt;
  num_i("exploration.min_jerk_count", cfg.explore_min_jerk.count);
  num_i("exploration.random_count", cfg.explore_random.count);
  num("exploration.amplitude", cfg.explore_random.amplitude);
  num("exploration.cutoff", cfg.explore_random.cutoff);
  cfg.explore_min_jerk.amplitude = cfg.explore_random.amplitude;
  cfg.explore_min_jerk.cutoff = cfg.explore_random.cutoff;
  num("exploration.target_disc_frac", cfg.explore_min_jerk.target_disc_frac);
  num_u64("exploration.min_jerk_seed", cfg.explore_min_jerk.rng_seed);
  num_u64("exploration.random_seed", cfg.explore_random.rng_seed);

  const JointState init = JointState::rest(cfg.initial_posture);
  cfg.explore_min_jerk.initial_state = init;
  cfg.explore_random.initial_state = init;

  num("targets.circle_radius", cfg.target_circle_radius);
  if (auto it = kv.find("targets.points"); it != kv.end()) {
    const auto flat = get_list(it->second);
    if (flat.size() % 2 != 0)
      throw std::runtime_error("config: targets.points needs x,y pairs");
    cfg.evaluation_targets.clear();
    for (std::size_t i = 0; i + 1 < flat.size(); i += 2)
      cfg.evaluation_targets.emplace_back(flat[i], flat[i + 1]);
  } else {
    cfg.evaluation_targets = default_evaluation_targets(
        cfg.model, cfg.initial_posture, cfg.target_circle_radius);
  }

  num_i("reduction.n_proto_tasks", cfg.n_proto_tasks);
  num_u64("reduction.seed", cfg.reduction_seed);
  num("reduction.d_min", cfg.reduction.d_min);
  num("reduction.err_i_threshold", cfg.reduction.err_i_threshold);
  num_i("reduction.grid_angles", cfg.reduction.grid.n_angles);
  num_i("reduction.grid_radii", cfg.reduction.grid.n_radii);
  num("reduction.grid_shrink", cfg.reduction.grid.shrink);

  num_i("compare.n_subsets", cfg.n_subsets);
  num_i("compare.subset_size", cfg.subset_size);
  num_u64("compare.seed", cfg.subset_seed);

  if (auto it = kv.find("output_dir"); it != kv.end())
    cfg.output_dir = std::get<std::string>(it->second);
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  const std::string content = read_file_maybe_gzip(path);
  const auto first = content.find_first_not_of(" \t\r\n");
  KeyMap kv;
  if (first != std::string::npos && content[first] == '{') {
    flatten_json(json::parse(content), "", kv);
  } else {
    kv = parse_key_value_file(content);
  }
  ExperimentConfig cfg = default_experiment_config();
  apply_overrides(cfg, kv);
  cfg.validate();
  return cfg;
}

}  // namespace synergy
