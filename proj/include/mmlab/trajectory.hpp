#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmlab/types.hpp"

namespace mmlab {

enum class RunKind { flow, gd_constant, gd_adaptive, gd_aggressive, deep, kernel };

std::string to_string(RunKind kind);
RunKind run_kind_from_string(const std::string& name);

/// Step rule of a run. `eta` is the constant step (gd_constant), `c` the
/// aggressive-step constant (gd_aggressive); both unused otherwise.
struct Schedule {
  RunKind kind = RunKind::flow;
  double eta = 1.0;
  double c = 1.0;

  static Schedule flow() { return {RunKind::flow, 1.0, 1.0}; }
  static Schedule constant(double eta) { return {RunKind::gd_constant, eta, 1.0}; }
  static Schedule adaptive() { return {RunKind::gd_adaptive, 1.0, 1.0}; }
  static Schedule aggressive(double c = 1.0) { return {RunKind::gd_aggressive, 1.0, c}; }

  void validate() const;
};

/// One sample of a run. `t` is time for flow and the iteration count
/// otherwise; margin and bias refer to the normalised iterate.
struct TrajectoryRecord {
  double t = 0.0;
  double norm_w = 0.0;
  double margin = 0.0;
  double smooth_margin = 0.0;
  double grad_norm = 0.0;
  double bias = 0.0;
  double deficit = 0.0;
  std::vector<double> extra;  // values for Trajectory::extra_columns
};

struct TrajectoryMeta {
  std::string dataset_id;
  RunKind kind = RunKind::flow;
  Schedule schedule;
  double beta = 1.0;
  std::uint64_t seed = 0;
  double solver_tol = 1e-10;
  double gamma_opt = 0.0;
  double dt = 0.0;                     // flow only
  std::size_t ascent_violations = 0;   // steps where the smoothed margin dropped by > 1e-9
  std::size_t restarts = 0;            // deep only
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

struct Trajectory {
  TrajectoryMeta meta;
  std::vector<std::string> extra_columns;
  std::vector<TrajectoryRecord> records;
  /// Iterate after the last step (w for linear runs, P(W) for deep runs,
  /// alpha for kernel runs). Not serialised.
  Vector final_iterate;

  std::optional<double> extra(const TrajectoryRecord& r, const std::string& column) const;
};

inline const std::vector<std::string>& core_columns() {
  static const std::vector<std::string> cols = {"t",         "norm_w", "margin", "smooth_margin",
                                                "grad_norm", "bias",   "deficit"};
  return cols;
}

/// Header "t,norm_w,margin,smooth_margin,grad_norm,bias,deficit[,extra...]",
/// one row per record, 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
/// Reads records and extra column names; meta is left default.
Trajectory read_trajectory_csv(std::istream& in);
void store_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);
Trajectory load_trajectory_csv(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const Schedule& s);
Schedule schedule_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const TrajectoryMeta& meta);
TrajectoryMeta meta_from_json(const nlohmann::ordered_json& j);

}  // namespace mmlab
