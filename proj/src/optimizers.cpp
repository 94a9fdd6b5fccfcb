#include "mmlab/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mmlab {
namespace {

void check_state(const Vector& w, double t) {
  if (!w.allFinite())
    throw NumericalError("non-finite iterate at t = " + std::to_string(t) +
                         " (step size too large?)");
  if (w.norm() > kDivergenceNorm)
    throw NumericalError("iterate norm exceeded " + std::to_string(kDivergenceNorm) +
                         " at t = " + std::to_string(t));
}

TrajectoryMeta base_meta(const Dataset& d, const SmoothMarginParams& p,
                         const MarginSolution& sol) {
  TrajectoryMeta meta;
  meta.dataset_id = dataset_id(d);
  meta.beta = p.beta;
  meta.gamma_opt = sol.gamma_opt;
  return meta;
}

}  // namespace

std::vector<double> geometric_grid(double t0, double t_end, std::size_t per_decade) {
  if (!(t0 > 0.0 && t_end >= t0 && per_decade > 0))
    throw InvalidArgument("geometric grid needs 0 < t0 <= t_end and a positive density");
  std::vector<double> grid;
  const double ratio = std::pow(10.0, 1.0 / static_cast<double>(per_decade));
  for (std::size_t k = 0;; ++k) {
    const double t = t0 * std::pow(ratio, static_cast<double>(k));
    // Points closer than half a step to t_end would crowd the final record.
    if (t >= t_end * (1.0 - 1e-12) || (k > 0 && t * std::sqrt(ratio) > t_end)) break;
    grid.push_back(t);
  }
  grid.push_back(t_end);
  return grid;
}

std::vector<std::size_t> geometric_iterations(std::size_t steps, std::size_t per_decade) {
  if (steps < 1) throw InvalidArgument("need at least one step");
  std::set<std::size_t> picked;
  for (double t : geometric_grid(1.0, static_cast<double>(steps), per_decade))
    picked.insert(std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(t)), 1, steps));
  return {picked.begin(), picked.end()};
}

TrajectoryRecord linear_record(double t, const Vector& w, const Dataset& d,
                               const SmoothMarginParams& p, const MarginSolution& sol) {
  const SmoothEval eval = smooth_margin_eval(w, d, p);
  const Vector unit = normalize(w);
  TrajectoryRecord r;
  r.t = t;
  r.norm_w = w.norm();
  r.margin = hard_margin(unit, d);
  r.smooth_margin = eval.value;
  r.grad_norm = eval.grad.norm();
  r.bias = (unit - sol.w_opt).norm();
  r.deficit = sol.gamma_opt - r.margin;
  return r;
}

Trajectory flow_run(const Dataset& d, const SmoothMarginParams& p, const FlowOptions& options,
                    const MarginSolution& sol) {
  p.validate();
  if (!(options.t_end > 0.0)) throw InvalidArgument("flow: t_end must be positive");
  const double dt = options.dt > 0.0 ? options.dt : 0.05 / p.beta;
  const auto steps = static_cast<std::size_t>(std::llround(options.t_end / dt));
  if (steps < 1) throw InvalidArgument("flow: t_end is shorter than one step");

  const std::vector<double> requested =
      options.record_at.empty() ? geometric_grid(dt, static_cast<double>(steps) * dt)
                                : options.record_at;
  std::set<std::size_t> record_steps;
  for (double t : requested) {
    if (!(t > 0.0)) continue;
    record_steps.insert(
        std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(t / dt)), 1, steps));
  }

  Trajectory traj;
  traj.meta = base_meta(d, p, sol);
  traj.meta.kind = RunKind::flow;
  traj.meta.schedule = Schedule::flow();
  traj.meta.dt = dt;
  traj.meta.details["t_end"] = static_cast<double>(steps) * dt;

  const auto grad = [&](const Vector& w) { return smooth_margin_grad(w, d, p); };
  Vector w = Vector::Zero(static_cast<Eigen::Index>(d.m()));
  double value = smooth_margin_value(w, d, p);
  for (std::size_t k = 1; k <= steps; ++k) {
    const Vector k1 = grad(w);
    const Vector k2 = grad(w + 0.5 * dt * k1);
    const Vector k3 = grad(w + 0.5 * dt * k2);
    const Vector k4 = grad(w + dt * k3);
    w += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t = static_cast<double>(k) * dt;
    check_state(w, t);

    const double next = smooth_margin_value(w, d, p);
    if (next < value - 1e-9) ++traj.meta.ascent_violations;
    value = next;

    if (record_steps.count(k)) traj.records.push_back(linear_record(t, w, d, p, sol));
  }
  traj.final_iterate = w;
  return traj;
}

Trajectory gd_run(const Dataset& d, const SmoothMarginParams& p, const GdOptions& options,
                  const MarginSolution& sol) {
  p.validate();
  options.schedule.validate();
  if (options.steps < 1) throw InvalidArgument("gd: need at least one step");
  if (options.schedule.kind == RunKind::flow || options.schedule.kind == RunKind::deep ||
      options.schedule.kind == RunKind::kernel)
    throw InvalidArgument("gd: schedule " + to_string(options.schedule.kind) +
                          " is not a gradient-descent step rule");

  std::set<std::size_t> record_steps;
  for (std::size_t k : options.record_at.empty() ? geometric_iterations(options.steps)
                                                 : options.record_at)
    if (k >= 1 && k <= options.steps) record_steps.insert(k);

  Trajectory traj;
  traj.meta = base_meta(d, p, sol);
  traj.meta.kind = options.schedule.kind;
  traj.meta.schedule = options.schedule;
  traj.meta.details["steps"] = options.steps;

  Vector w = Vector::Zero(static_cast<Eigen::Index>(d.m()));
  double value = smooth_margin_value(w, d, p);
  for (std::size_t t = 0; t < options.steps; ++t) {
    double eta = 0.0;
    switch (options.schedule.kind) {
      case RunKind::gd_constant: eta = options.schedule.eta; break;
      case RunKind::gd_adaptive: eta = 1.0 / std::sqrt(static_cast<double>(t) + 1.0); break;
      // c / risk(w) times grad risk(w) = -beta * risk(w) * grad R(w), so the
      // risk cancels and the step on R is c * beta.
      case RunKind::gd_aggressive: eta = options.schedule.c * p.beta; break;
      default: break;
    }
    w += eta * smooth_margin_grad(w, d, p);
    const std::size_t k = t + 1;
    check_state(w, static_cast<double>(k));

    const double next = smooth_margin_value(w, d, p);
    if (next < value - 1e-9) ++traj.meta.ascent_violations;
    value = next;

    if (record_steps.count(k))
      traj.records.push_back(linear_record(static_cast<double>(k), w, d, p, sol));
  }
  traj.final_iterate = w;
  return traj;
}

}  // namespace mmlab
