#pragma once

#include <cstddef>
#include <vector>

#include "mmlab/dataset.hpp"
#include "mmlab/margin.hpp"
#include "mmlab/smooth_margin.hpp"
#include "mmlab/trajectory.hpp"

namespace mmlab {

/// Runs abort once ||w|| exceeds this.
inline constexpr double kDivergenceNorm = 1e6;

struct FlowOptions {
  double t_end = 100.0;
  /// RK4 step; non-positive means the default 0.05 / beta.
  double dt = 0.0;
  /// Requested record times, each snapped to the nearest grid point k*dt with
  /// k >= 1. Empty means a geometric grid from dt to t_end.
  std::vector<double> record_at;
};

/// Integrates dw/dt = grad R_beta(w) from w(0) = 0 with classical RK4.
/// Throws NumericalError on non-finite state or divergence.
Trajectory flow_run(const Dataset& d, const SmoothMarginParams& p, const FlowOptions& options,
                    const MarginSolution& sol);

struct GdOptions {
  Schedule schedule = Schedule::adaptive();
  std::size_t steps = 1000;
  /// Iteration counts to record (after that many steps). Empty means a
  /// geometric grid over [1, steps].
  std::vector<std::size_t> record_at;
};

/// Gradient ascent on the smoothed margin from w(0) = 0:
///   constant:   w += eta * grad R(w)
///   adaptive:   w += grad R(w) / sqrt(t + 1),  t = 0, 1, ...
///   aggressive: w -= (c / risk(w)) * grad risk(w) = w + c * beta * grad R(w)
Trajectory gd_run(const Dataset& d, const SmoothMarginParams& p, const GdOptions& options,
                  const MarginSolution& sol);

/// Record of the linear iterate w at time t: normalised margin, smoothed
/// margin, gradient norm, bias ||w/||w|| - w_opt|| and deficit.
TrajectoryRecord linear_record(double t, const Vector& w, const Dataset& d,
                               const SmoothMarginParams& p, const MarginSolution& sol);

/// Geometric grid t0 * r^k covering [t0, t_end] with `per_decade` points per
/// factor of ten; t_end is always included.
std::vector<double> geometric_grid(double t0, double t_end, std::size_t per_decade = 10);
/// Distinct iteration counts on a geometric grid over [1, steps], steps included.
std::vector<std::size_t> geometric_iterations(std::size_t steps, std::size_t per_decade = 10);

}  // namespace mmlab
