#include "mmlab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mmlab/analysis.hpp"
#include "mmlab/dataset.hpp"
#include "mmlab/deep_linear.hpp"
#include "mmlab/kernel.hpp"
#include "mmlab/margin.hpp"
#include "mmlab/optimizers.hpp"
#include "mmlab/trajectory.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace mmlab::cli {

namespace {

constexpr const char* kVersion = "0.1.0";
const std::vector<std::string> kCommands = {"gen", "solve", "run", "verify", "fit", "sweep"};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json make_meta(const std::string& command, ordered_json config, bool no_timestamp) {
  ordered_json meta;
  meta["tool"] = "mmlab";
  meta["version"] = kVersion;
  meta["command"] = command;
  meta["config"] = std::move(config);
  if (!no_timestamp) meta["timestamp"] = utc_timestamp();
  return meta;
}

std::vector<double> as_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

ordered_json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("malformed JSON in " + path.string() + ": " + e.what());
  }
}

// Either stdout or a file, always newline-terminated.
void emit_json(const ordered_json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) out << text;
  else write_text(path, text);
}

ordered_json solution_json(const MarginSolution& sol) {
  ordered_json j;
  j["gamma_opt"] = sol.gamma_opt;
  j["w_opt"] = as_std(sol.w_opt);
  j["q_star"] = as_std(sol.q_star);
  j["support"] = sol.support;
  j["dual_gap"] = sol.dual_gap;
  return j;
}

Dataset checked(Dataset d, const std::string& origin) {
  const ValidationOutcome v = validate(d);
  if (!v.ok()) {
    const Violation& first = v.violations.front();
    throw InvalidArgument(origin + ": " + std::to_string(v.violations.size()) +
                          " invalid rows, first at row " + std::to_string(first.index + 1) +
                          " (" + to_string(first.kind) + ")");
  }
  return d;
}

Dataset load_dataset(const RunConfig& c) {
  if (!c.data.empty() && c.gen_n > 0)
    throw InvalidArgument("--data and --gen-n are mutually exclusive");
  if (!c.data.empty()) return checked(load_csv(c.data), c.data);
  if (c.gen_n > 0)
    return generate_separable(c.gen_n, c.gen_m, c.gen_margin, c.gen_seed);
  throw InvalidArgument("no dataset: pass --data or --gen-n/--gen-m/--gen-margin");
}

void add_dataset_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--data", c.data, "Dataset CSV (y,x1,...,xm)");
  sub->add_option("--gen-n", c.gen_n, "Generate n samples instead of reading --data");
  sub->add_option("--gen-m", c.gen_m, "Generated dimension");
  sub->add_option("--gen-margin", c.gen_margin, "Generated margin in (0, 1)");
  sub->add_option("--gen-seed", c.gen_seed, "Generator seed");
}

void add_run_options(CLI::App* sub, RunConfig& c) {
  add_dataset_options(sub, c);
  sub->add_option("--schedule", c.schedule, "flow|gd-constant|gd-adaptive|gd-aggressive|deep|kernel")
      ->check(CLI::IsMember({"flow", "gd-constant", "gd-adaptive", "gd-aggressive", "deep", "kernel"}));
  sub->add_option("--beta", c.beta, "Inverse temperature of the smoothed margin");
  sub->add_option("--t-end", c.t_end, "Flow horizon");
  sub->add_option("--dt", c.dt, "RK4 step (default 0.05/beta)");
  sub->add_option("--steps", c.steps, "Iterations for discrete schedules");
  sub->add_option("--eta", c.eta, "Constant step size (default 1; 0.1 for deep)");
  sub->add_option("--c", c.c, "Aggressive step constant");
  sub->add_option("--depth", c.depth, "Deep network depth L");
  sub->add_option("--widths", c.widths, "Hidden widths m_1..m_{L-1}; one value is repeated");
  sub->add_option("--kernel", c.kernel, "linear|rbf")->check(CLI::IsMember({"linear", "rbf"}));
  sub->add_option("--sigma", c.sigma, "RBF bandwidth");
  sub->add_option("--kernel-schedule", c.kernel_schedule, "gd-adaptive|gd-constant")
      ->check(CLI::IsMember({"gd-adaptive", "gd-constant"}));
  sub->add_option("--per-decade", c.per_decade, "Recorded points per factor of ten");
  sub->add_option("--tol", c.tol, "Dual solver gap target");
  sub->add_option("--support-eps", c.support_eps, "Support set tolerance");
  sub->add_option("--seed", c.seed, "Seed for random initialisation");
  sub->add_option("--out", c.out, "Output directory")->required();
}

void resolve(RunConfig& c) {
  if (c.eta == 0.0) {
    if (c.schedule == "deep") c.eta = 0.1;
    else if (c.schedule == "gd-constant" ||
             (c.schedule == "kernel" && c.kernel_schedule == "gd-constant"))
      c.eta = 1.0;
  }
  if (!(c.tol > 0.0) || !(c.support_eps > 0.0)) throw InvalidArgument("tolerances must be positive");
  if (c.per_decade == 0) throw InvalidArgument("--per-decade must be positive");
}

Trajectory execute(const RunConfig& c, const Dataset& d, const MarginSolution& sol) {
  const SmoothMarginParams p{c.beta};
  p.validate();
  const RunKind kind = run_kind_from_string(c.schedule);
  Trajectory traj;
  switch (kind) {
    case RunKind::flow: {
      FlowOptions fo;
      fo.t_end = c.t_end;
      fo.dt = c.dt;
      const double dt = c.dt > 0.0 ? c.dt : 0.05 / c.beta;
      if (!(c.t_end >= dt)) throw InvalidArgument("--t-end is shorter than one step");
      fo.record_at = geometric_grid(dt, c.t_end, c.per_decade);
      traj = flow_run(d, p, fo, sol);
      break;
    }
    case RunKind::gd_constant:
    case RunKind::gd_adaptive:
    case RunKind::gd_aggressive: {
      GdOptions go;
      go.schedule = kind == RunKind::gd_constant   ? Schedule::constant(c.eta)
                    : kind == RunKind::gd_adaptive ? Schedule::adaptive()
                                                   : Schedule::aggressive(c.c);
      go.steps = c.steps;
      go.record_at = geometric_iterations(c.steps, c.per_decade);
      traj = gd_run(d, p, go, sol);
      break;
    }
    case RunKind::deep: {
      if (c.depth < 1) throw InvalidArgument("--depth must be at least 1");
      std::vector<std::size_t> hidden = c.widths;
      if (hidden.empty()) hidden.assign(c.depth - 1, d.m());
      else if (hidden.size() == 1 && c.depth > 2) hidden.assign(c.depth - 1, hidden.front());
      if (hidden.size() != c.depth - 1)
        throw InvalidArgument("--widths needs " + std::to_string(c.depth - 1) + " values for depth " +
                              std::to_string(c.depth));
      DeepAscentOptions dopt;
      dopt.arch = Architecture::make(d.m(), hidden);
      dopt.steps = c.steps;
      dopt.eta = c.eta;
      dopt.seed = c.seed;
      dopt.record_at = geometric_iterations(c.steps, c.per_decade);
      traj = riemannian_ascent(d, p, dopt, sol);
      break;
    }
    case RunKind::kernel: {
      const KernelSpec k = c.kernel == "rbf" ? KernelSpec::rbf(c.sigma) : KernelSpec::linear();
      KernelAscentOptions kopt;
      kopt.schedule = c.kernel_schedule == "gd-constant" ? Schedule::constant(c.eta)
                                                         : Schedule::adaptive();
      kopt.steps = c.steps;
      kopt.record_at = geometric_iterations(c.steps, c.per_decade);
      traj = kernel_ascent(d, k, p, kopt);
      break;
    }
  }
  traj.meta.seed = c.seed;
  if (kind != RunKind::kernel) traj.meta.solver_tol = c.tol;
  return traj;
}

SolveOptions solve_options(const RunConfig& c) {
  SolveOptions so;
  so.tol = c.tol;
  so.support_eps = c.support_eps;
  return so;
}

int cmd_run(RunConfig c, bool no_timestamp, std::ostream& out) {
  resolve(c);
  const Dataset d = load_dataset(c);
  const MarginSolution sol = optimal_margin(d, solve_options(c));
  const Trajectory traj = execute(c, d, sol);

  const fs::path dir = c.out;
  fs::create_directories(dir);
  store_trajectory_csv(traj, dir / "trajectory.csv");
  ordered_json j;
  j["meta"] = make_meta("run", to_json(c), no_timestamp);
  j["solution"] = solution_json(sol);
  j["run"] = to_json(traj.meta);
  write_text(dir / "solution.json", j.dump(2) + "\n");

  out << "run " << c.schedule << ": " << traj.records.size() << " records -> "
      << (dir / "trajectory.csv").string() << '\n';
  if (!traj.records.empty()) {
    const auto& last = traj.records.back();
    out << "final t=" << last.t << " margin=" << last.margin << " deficit=" << last.deficit
        << " bias=" << last.bias << '\n';
  }
  return kOk;
}

struct GenConfig {
  std::size_t n = 0;
  std::size_t m = 0;
  double margin = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenConfig& g, bool no_timestamp, std::ostream& out) {
  if (g.n == 0 || g.m == 0) throw InvalidArgument("--n and --m must be positive");
  const Dataset d = checked(generate_separable(g.n, g.m, g.margin, g.seed), "generated data");
  store_csv(d, g.out);
  ordered_json config;
  config["n"] = g.n;
  config["m"] = g.m;
  config["margin"] = g.margin;
  config["seed"] = g.seed;
  config["out"] = g.out;
  ordered_json j;
  j["meta"] = make_meta("gen", config, no_timestamp);
  j["dataset_id"] = dataset_id(d);
  write_text(g.out + ".json", j.dump(2) + "\n");
  out << "wrote " << g.out << " (n=" << d.n() << ", m=" << d.m() << ", id=" << dataset_id(d)
      << ")\n";
  return kOk;
}

int cmd_solve(const RunConfig& c, const std::string& out_path, bool no_timestamp,
              std::ostream& out) {
  const Dataset d = load_dataset(c);
  const MarginSolution sol = optimal_margin(d, solve_options(c));
  ordered_json config;
  config["data"] = c.data;
  if (c.gen_n > 0)
    config["gen"] = {{"n", c.gen_n}, {"m", c.gen_m}, {"margin", c.gen_margin}, {"seed", c.gen_seed}};
  config["tol"] = c.tol;
  config["support_eps"] = c.support_eps;
  ordered_json j;
  j["meta"] = make_meta("solve", config, no_timestamp);
  j["dataset_id"] = dataset_id(d);
  const ordered_json solution = solution_json(sol);
  for (const auto& [key, value] : solution.items()) j[key] = value;
  emit_json(j, out_path, out);
  return kOk;
}

struct RunFiles {
  Trajectory traj;
  ordered_json info;
};

RunFiles load_run(const fs::path& dir) {
  RunFiles r;
  r.info = read_json(dir / "solution.json");
  if (!r.info.contains("run")) throw InvalidArgument((dir / "solution.json").string() + " has no run section");
  r.traj = load_trajectory_csv(dir / "trajectory.csv");
  r.traj.meta = meta_from_json(r.info.at("run"));
  return r;
}

struct VerifyConfig {
  std::string data;
  std::string run;
  std::string out;
  double eps_int = 1e-3;
};

int cmd_verify(const VerifyConfig& v, bool no_timestamp, std::ostream& out) {
  const Dataset d = checked(load_csv(v.data), v.data);
  const RunFiles run = load_run(v.run);
  if (run.traj.meta.dataset_id != dataset_id(d))
    throw DatasetMismatch("run " + v.run + " was produced on dataset " +
                          run.traj.meta.dataset_id + ", but " + v.data + " has id " +
                          dataset_id(d));
  SolveOptions so;
  so.tol = run.traj.meta.solver_tol > 0.0 && run.traj.meta.kind != RunKind::kernel
               ? run.traj.meta.solver_tol
               : 1e-10;
  const MarginSolution sol = optimal_margin(d, so);
  VerifyOptions vo;
  vo.eps_int = v.eps_int;
  const VerificationReport report = verify_trajectory(run.traj, d, sol, vo);

  ordered_json config;
  config["data"] = v.data;
  config["run"] = v.run;
  config["eps_int"] = v.eps_int;
  const fs::path path = v.out.empty() ? fs::path(v.run) / "report.json" : fs::path(v.out);
  const ordered_json j = build_report({report}, {}, make_meta("verify", config, no_timestamp));
  write_text(path, j.dump(2) + "\n");

  for (const auto& c : report.checks) {
    out << (c.ok() ? "ok   " : "FAIL ") << c.name << ": " << c.passed << "/" << c.applicable;
    if (c.worst_record)
      out << ", worst slack " << c.worst_slack << " at record " << *c.worst_record << " (t="
          << c.worst_t << ")";
    out << '\n';
  }
  out << "summary: " << (report.ok() ? "pass" : "fail") << " -> " << path.string() << '\n';
  return report.ok() ? kOk : kVerificationFailed;
}

struct FitConfig {
  std::string run;
  std::string field = "deficit";
  double t_min = 0.0;
  double t_max = 0.0;  // 0: unbounded
  std::string out;
};

int cmd_fit(const FitConfig& f, bool no_timestamp, std::ostream& out) {
  const RunFiles run = load_run(f.run);
  const RateFit fit = fit_rate(run.traj, rate_field_from_string(f.field), f.t_min,
                               f.t_max > 0.0 ? f.t_max : std::numeric_limits<double>::infinity());
  ordered_json config;
  config["run"] = f.run;
  config["field"] = f.field;
  config["t_min"] = f.t_min;
  config["t_max"] = f.t_max;
  ordered_json j;
  j["meta"] = make_meta("fit", config, no_timestamp);
  j["fits"] = ordered_json::array({to_json(fit)});
  emit_json(j, f.out, out);
  return kOk;
}

struct SweepConfig {
  std::string plan;
  std::string out;
  std::size_t jobs = 1;
};

int cmd_sweep(const SweepConfig& s, bool no_timestamp, std::ostream& out, std::ostream& err) {
  const ordered_json plan = read_json(s.plan);
  if (!plan.contains("runs") || !plan.at("runs").is_array())
    throw InvalidArgument(s.plan + ": expected an object with a \"runs\" array");
  const auto& runs = plan.at("runs");
  const std::size_t count = runs.size();

  std::vector<std::vector<std::string>> argv(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (!runs[k].is_object()) throw InvalidArgument("sweep entry " + std::to_string(k) + " is not an object");
    ordered_json entry = runs[k];
    entry.erase("out");
    argv[k] = {"run"};
    const auto extra = config_to_args(entry, {});
    argv[k].insert(argv[k].end(), extra.begin(), extra.end());
    argv[k].push_back("--out");
    argv[k].push_back((fs::path(s.out) / ("run_" + std::to_string(k))).string());
    if (no_timestamp) argv[k].push_back("--no-timestamp");
  }

  std::vector<int> codes(count, kOk);
  std::vector<std::string> logs(count), errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      std::ostringstream o, e;
      codes[k] = run_cli(argv[k], o, e);
      logs[k] = o.str();
      errors[k] = e.str();
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(s.jobs, 1, std::max<std::size_t>(count, 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ordered_json config;
  config["plan"] = s.plan;
  config["out"] = s.out;
  config["jobs"] = s.jobs;
  ordered_json j;
  j["meta"] = make_meta("sweep", config, no_timestamp);
  j["runs"] = ordered_json::array();
  int status = kOk;
  for (std::size_t k = 0; k < count; ++k) {
    out << "[run " << k << "] exit " << codes[k] << '\n' << logs[k];
    err << errors[k];
    j["runs"].push_back({{"index", k}, {"exit_code", codes[k]}, {"args", argv[k]}});
    if (status == kOk && codes[k] != kOk) status = codes[k];
  }
  fs::create_directories(s.out);
  write_text(fs::path(s.out) / "sweep.json", j.dump(2) + "\n");
  return status;
}

// Pulls the value of --config out of args, if present.
std::string find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

}  // namespace

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  if (!c.data.empty()) j["data"] = c.data;
  if (c.gen_n > 0)
    j["gen"] = {{"n", c.gen_n}, {"m", c.gen_m}, {"margin", c.gen_margin}, {"seed", c.gen_seed}};
  j["schedule"] = c.schedule;
  j["beta"] = c.beta;
  if (c.schedule == "flow") {
    j["t_end"] = c.t_end;
    j["dt"] = c.dt > 0.0 ? c.dt : 0.05 / c.beta;
  } else {
    j["steps"] = c.steps;
  }
  if (c.eta > 0.0) j["eta"] = c.eta;
  if (c.schedule == "gd-aggressive") j["c"] = c.c;
  if (c.schedule == "deep") {
    j["depth"] = c.depth;
    j["widths"] = c.widths;
  }
  if (c.schedule == "kernel") {
    j["kernel"] = c.kernel;
    if (c.kernel == "rbf") j["sigma"] = c.sigma;
    j["kernel_schedule"] = c.kernel_schedule;
  }
  j["per_decade"] = c.per_decade;
  j["tol"] = c.tol;
  j["support_eps"] = c.support_eps;
  j["seed"] = c.seed;
  j["out"] = c.out;
  return j;
}

std::vector<std::string> config_to_args(const ordered_json& config,
                                        const std::vector<std::string>& explicit_args) {
  if (!config.is_object()) throw InvalidArgument("config must be a JSON object");
  std::vector<std::string> out;
  for (const auto& [raw_key, value] : config.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    const bool overridden = std::any_of(explicit_args.begin(), explicit_args.end(),
                                        [&](const std::string& a) {
                                          return a == flag || a.rfind(flag + "=", 0) == 0;
                                        });
    if (overridden || value.is_null()) continue;
    auto scalar = [&](const ordered_json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_object() || v.is_array())
        throw InvalidArgument("config key \"" + raw_key + "\" has a nested value");
      return v.dump();
    };
    if (value.is_boolean()) {
      if (value.get<bool>()) out.push_back(flag);
    } else if (value.is_array()) {
      out.push_back(flag);
      for (const auto& v : value) out.push_back(scalar(v));
    } else {
      out.push_back(flag);
      out.push_back(scalar(value));
    }
  }
  return out;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = raw_args;

  CLI::App app{"Max-margin laboratory: datasets, dual solver, margin dynamics, verification"};
  app.name("mmlab");
  app.require_subcommand(1);
  app.fallthrough();
  bool no_timestamp = false;
  std::string config_path;
  app.add_option("--config", config_path, "JSON file whose keys mirror the flags; flags win");
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp field from outputs");

  GenConfig gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a separable dataset");
  gen_cmd->add_option("--n", gen.n, "Samples")->required();
  gen_cmd->add_option("--m", gen.m, "Dimension")->required();
  gen_cmd->add_option("--margin", gen.margin, "Margin in (0, 1)")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed");
  gen_cmd->add_option("--out", gen.out, "Output CSV")->required();

  RunConfig solve;
  std::string solve_out;
  auto* solve_cmd = app.add_subcommand("solve", "Optimal margin and max-margin direction");
  add_dataset_options(solve_cmd, solve);
  solve_cmd->add_option("--tol", solve.tol, "Dual solver gap target");
  solve_cmd->add_option("--support-eps", solve.support_eps, "Support set tolerance");
  solve_cmd->add_option("--out", solve_out, "Output JSON (default stdout)");

  RunConfig run;
  auto* run_cmd = app.add_subcommand("run", "Run a schedule and record its trajectory");
  add_run_options(run_cmd, run);

  VerifyConfig verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check a recorded run against the bounds");
  verify_cmd->add_option("--data", verify.data, "Dataset CSV")->required();
  verify_cmd->add_option("--run", verify.run, "Run directory")->required();
  verify_cmd->add_option("--out", verify.out, "Report JSON (default RUN/report.json)");
  verify_cmd->add_option("--eps-int", verify.eps_int, "Slack on flow-time bounds");

  FitConfig fit;
  auto* fit_cmd = app.add_subcommand("fit", "Log-log rate fit of a recorded run");
  fit_cmd->add_option("--run", fit.run, "Run directory")->required();
  fit_cmd->add_option("--field", fit.field, "deficit|bias")->check(CLI::IsMember({"deficit", "bias"}));
  fit_cmd->add_option("--t-min", fit.t_min, "Window start");
  fit_cmd->add_option("--t-max", fit.t_max, "Window end (0: unbounded)");
  fit_cmd->add_option("--out", fit.out, "Output JSON (default stdout)");

  SweepConfig sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run every entry of a plan file");
  sweep_cmd->add_option("--plan", sweep.plan, "JSON file {\"runs\": [{flag: value, ...}, ...]}")
      ->required();
  sweep_cmd->add_option("--out", sweep.out, "Output directory")->required();
  sweep_cmd->add_option("--jobs", sweep.jobs, "Concurrent runs");

  try {
    const std::string cfg = find_config(args);
    if (!cfg.empty()) {
      const auto at = std::find_first_of(args.begin(), args.end(), kCommands.begin(), kCommands.end());
      if (at == args.end()) throw InvalidArgument("--config needs a subcommand");
      const auto extra = config_to_args(read_json(cfg), args);
      args.insert(at + 1, extra.begin(), extra.end());
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  std::vector<const char*> argv{"mmlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, no_timestamp, out);
    if (*solve_cmd) return cmd_solve(solve, solve_out, no_timestamp, out);
    if (*run_cmd) return cmd_run(run, no_timestamp, out);
    if (*verify_cmd) return cmd_verify(verify, no_timestamp, out);
    if (*fit_cmd) return cmd_fit(fit, no_timestamp, out);
    if (*sweep_cmd) return cmd_sweep(sweep, no_timestamp, out, err);
  } catch (const NonSeparableError& e) {
    err << "error: " << e.what() << '\n';
    return kNonSeparable;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const SolverError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace mmlab::cli
