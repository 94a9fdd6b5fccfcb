#include "mmlab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "text_util.hpp"

namespace mmlab {

std::string to_string(RunKind kind) {
  switch (kind) {
    case RunKind::flow: return "flow";
    case RunKind::gd_constant: return "gd-constant";
    case RunKind::gd_adaptive: return "gd-adaptive";
    case RunKind::gd_aggressive: return "gd-aggressive";
    case RunKind::deep: return "deep";
    case RunKind::kernel: return "kernel";
  }
  return "unknown";
}

RunKind run_kind_from_string(const std::string& name) {
  for (auto k : {RunKind::flow, RunKind::gd_constant, RunKind::gd_adaptive,
                 RunKind::gd_aggressive, RunKind::deep, RunKind::kernel})
    if (to_string(k) == name) return k;
  throw InvalidArgument("unknown schedule \"" + name + "\"");
}

void Schedule::validate() const {
  if (!(std::isfinite(eta) && eta > 0.0)) throw InvalidArgument("step size eta must be positive");
  if (!(std::isfinite(c) && c > 0.0)) throw InvalidArgument("aggressive constant c must be positive");
}

std::optional<double> Trajectory::extra(const TrajectoryRecord& r,
                                        const std::string& column) const {
  auto it = std::find(extra_columns.begin(), extra_columns.end(), column);
  if (it == extra_columns.end()) return std::nullopt;
  const auto idx = static_cast<std::size_t>(it - extra_columns.begin());
  if (idx >= r.extra.size()) return std::nullopt;
  return r.extra[idx];
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  const auto& core = core_columns();
  for (std::size_t j = 0; j < core.size(); ++j) out << (j ? "," : "") << core[j];
  for (const auto& name : traj.extra_columns) out << ',' << name;
  out << '\n';
  for (const auto& r : traj.records) {
    out << detail::format_double(r.t) << ',' << detail::format_double(r.norm_w) << ','
        << detail::format_double(r.margin) << ',' << detail::format_double(r.smooth_margin)
        << ',' << detail::format_double(r.grad_norm) << ',' << detail::format_double(r.bias)
        << ',' << detail::format_double(r.deficit);
    for (std::size_t j = 0; j < traj.extra_columns.size(); ++j)
      out << ',' << detail::format_double(j < r.extra.size() ? r.extra[j] : std::nan(""));
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  Trajectory traj;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool have_header = false;
  const auto& core = core_columns();

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::strip_cr(line);
    if (text.empty()) continue;
    const auto fields = detail::split_commas(text);
    if (!have_header) {
      if (fields.size() < core.size())
        throw ParseError("trajectory header is missing core columns", line_no);
      for (std::size_t j = 0; j < core.size(); ++j)
        if (fields[j] != core[j])
          throw ParseError("trajectory header column " + std::to_string(j + 1) +
                               " should be " + core[j],
                           line_no);
      for (std::size_t j = core.size(); j < fields.size(); ++j)
        traj.extra_columns.emplace_back(fields[j]);
      width = fields.size();
      have_header = true;
      continue;
    }
    if (fields.size() != width)
      throw ParseError("ragged trajectory row: expected " + std::to_string(width) +
                           " fields, got " + std::to_string(fields.size()),
                       line_no);
    std::vector<double> values(width);
    for (std::size_t j = 0; j < width; ++j) {
      const auto v = detail::parse_double(fields[j]);
      if (!v) throw ParseError("field " + std::to_string(j + 1) + " is not a number", line_no);
      values[j] = *v;
    }
    TrajectoryRecord r{values[0], values[1], values[2], values[3],
                       values[4], values[5], values[6], {}};
    r.extra.assign(values.begin() + static_cast<std::ptrdiff_t>(core.size()), values.end());
    traj.records.push_back(std::move(r));
  }
  if (!have_header) throw ParseError("empty trajectory file", 0);
  return traj;
}

void store_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_trajectory_csv(traj, out);
}

Trajectory load_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return read_trajectory_csv(in);
}

nlohmann::ordered_json to_json(const Schedule& s) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(s.kind);
  if (s.kind == RunKind::gd_constant) j["eta"] = s.eta;
  if (s.kind == RunKind::gd_aggressive) j["c"] = s.c;
  return j;
}

Schedule schedule_from_json(const nlohmann::ordered_json& j) {
  Schedule s;
  s.kind = run_kind_from_string(j.at("kind").get<std::string>());
  s.eta = j.value("eta", 1.0);
  s.c = j.value("c", 1.0);
  return s;
}

nlohmann::ordered_json to_json(const TrajectoryMeta& meta) {
  nlohmann::ordered_json j;
  j["dataset_id"] = meta.dataset_id;
  j["kind"] = to_string(meta.kind);
  j["schedule"] = to_json(meta.schedule);
  j["beta"] = meta.beta;
  j["seed"] = meta.seed;
  j["solver_tol"] = meta.solver_tol;
  j["gamma_opt"] = meta.gamma_opt;
  j["dt"] = meta.dt;
  j["ascent_violations"] = meta.ascent_violations;
  j["restarts"] = meta.restarts;
  j["details"] = meta.details;
  return j;
}

TrajectoryMeta meta_from_json(const nlohmann::ordered_json& j) {
  TrajectoryMeta meta;
  meta.dataset_id = j.value("dataset_id", std::string{});
  meta.kind = run_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("schedule")) meta.schedule = schedule_from_json(j.at("schedule"));
  meta.beta = j.value("beta", 1.0);
  meta.seed = j.value("seed", std::uint64_t{0});
  meta.solver_tol = j.value("solver_tol", 1e-10);
  meta.gamma_opt = j.value("gamma_opt", 0.0);
  meta.dt = j.value("dt", 0.0);
  meta.ascent_violations = j.value("ascent_violations", std::size_t{0});
  meta.restarts = j.value("restarts", std::size_t{0});
  if (j.contains("details")) meta.details = j.at("details");
  return meta;
}

}  // namespace mmlab
