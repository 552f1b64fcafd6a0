#pragma once

#include <string>

#include "synergy/exploration.hpp"
#include "synergy/reduction.hpp"
#include "synergy/solver.hpp"

#include <nlohmann/json_fwd.hpp>

namespace synergy {

// Archive JSON layout:
//   { "format": "synergy-archive-v1", "kind": "exploration" | "reduced",
//     "header": {n_signals, n_samples, n_joints, dt, dims: "..."},
//     "config": {...}, "model_fingerprint": "...",
//     "initial_state": {q, qdot},
//     "signals": [[[torque]]], "responses": [[[angle]]] }
// signals[k][t][j] is the torque of signal k at time step t, joint j;
// responses likewise in joint angles.

nlohmann::json archive_to_json(const ExplorationArchive& archive);
ExplorationArchive archive_from_json(const nlohmann::json& j);

void save_archive(const ExplorationArchive& archive, const std::string& path);
// Reads plain or gzip-compressed archives.
ExplorationArchive load_archive(const std::string& path);

// Validates the pairing invariant by re-integrating n_check randomly chosen
// pairs (seeded); throws on mismatch.
void validate_archive(const ArmModel& model, const ExplorationArchive& archive,
                      int n_check = 5, std::uint64_t seed = 0);

// Reduced bases reuse the archive layout with kind == "reduced".
void save_basis(const BasisSet& basis, const std::string& model_fingerprint,
                const std::string& path);
BasisSet load_basis(const std::string& path, std::string* model_fingerprint = nullptr);

nlohmann::json error_report_to_json(const ErrorReport& report);
nlohmann::json task_solution_to_json(const TaskSolution& sol);

// CSV with columns x,y,err_P,err_F_ee.
void save_error_map_csv(const ErrorMap& map, const std::string& path);
// Self-contained rect-grid heatmap of err_P (log10 color scale).
void save_error_map_svg(const ErrorMap& map, const ArmModel& model,
                        const std::string& path);

void save_proto_tasks_json(const std::vector<ProtoTask>& protos,
                           const std::string& path);
std::vector<ProtoTask> load_proto_tasks_json(const std::string& path);

// Reads a whole file, transparently inflating gzip content.
std::string read_file_maybe_gzip(const std::string& path);

}  // namespace synergy
