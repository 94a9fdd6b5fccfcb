#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmlab/dataset.hpp"
#include "mmlab/margin.hpp"
#include "mmlab/trajectory.hpp"

namespace mmlab {

struct VerifyOptions {
  /// Multiplicative slack on the flow-time bounds.
  double eps_int = 1e-3;
  /// Additive floor on the flow-time bounds. Keeps the n = 1 case, where
  /// log n = 0 makes the bound exactly zero, robust to rounding.
  double abs_floor = 1e-12;
  /// Additive slack on the interlacing bounds.
  double interlace_slack = 1e-9;
  /// Additive slack on the gradient-norm bounds.
  double grad_tol = 1e-9;
  /// Multiplicative slack on ||w(t)|| <= R t.
  double norm_slack = 1e-6;
};

/// Outcome of one inequality over all records of a trajectory. Slack is
/// (bound - value) oriented so that negative means violated.
struct CheckResult {
  std::string name;
  std::size_t applicable = 0;
  std::size_t passed = 0;
  double worst_slack = 0.0;
  std::optional<std::size_t> worst_record;  // index into Trajectory::records
  double worst_t = 0.0;

  bool ok() const noexcept { return passed == applicable; }
};

struct VerificationReport {
  std::string dataset_id;
  RunKind kind = RunKind::flow;
  std::vector<CheckResult> checks;

  bool ok() const noexcept;
  const CheckResult* find(const std::string& name) const;
};

/// Checks, per record and where the run kind makes them meaningful:
///   flow_margin_rate      deficit <= log n / (gamma t) (1 + eps) for t >= log n / gamma^2
///   flow_energy           R(w(t)) >= gamma^2 t (1 - eps)
///   flow_norm_growth      ||w(t)|| <= R t (1 + norm_slack)
///   interlace_lower       deficit / R <= bias
///   interlace_upper       bias <= 2 sqrt(deficit / gamma) when margin >= 0
///   grad_norm_bounds      gamma - tol <= grad_norm <= R + tol
///   chained_bias_bound    bias <= (2 / gamma) sqrt(log n / t) (1 + eps), same t range as the rate
///   chain_implication     the chained bound holds wherever the rate and upper bound hold
///   kernel_weak_duality   kernel margin <= gamma_H + tol
/// Kernel runs take gamma_H from the trajectory meta. Throws DatasetMismatch
/// when the trajectory was produced on another dataset.
VerificationReport verify_trajectory(const Trajectory& traj, const Dataset& d,
                                     const MarginSolution& sol, const VerifyOptions& options = {});

enum class RateField { deficit, bias };
std::string to_string(RateField f);
RateField rate_field_from_string(const std::string& name);

struct RateFit {
  std::string field;
  double slope = 0.0;
  double intercept = 0.0;  // of log(value) against log(t)
  double r_squared = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t n_points = 0;
};

/// Least squares of log(value) on log(t). Throws InvalidArgument with fewer
/// than 5 points or non-positive t, NumericalError on a non-positive value
/// (the quantity has hit the rounding floor; shrink the window).
RateFit fit_power_law(const std::vector<double>& t, const std::vector<double>& value);

/// Power-law fit of a trajectory column over records with t_min <= t <= t_max.
RateFit fit_rate(const Trajectory& traj, RateField field, double t_min,
                 double t_max = std::numeric_limits<double>::infinity());

nlohmann::ordered_json to_json(const CheckResult& c);
nlohmann::ordered_json to_json(const VerificationReport& r);
nlohmann::ordered_json to_json(const RateFit& f);

/// {"meta", "summary", "checks", "fits"} in that order. The summary status
/// is "pass" when every check of every report passed.
nlohmann::ordered_json build_report(const std::vector<VerificationReport>& reports,
                                    const std::vector<RateFit>& fits,
                                    const nlohmann::ordered_json& meta = nlohmann::ordered_json::object());
/// Writes build_report(...) as indented JSON. Throws Error on I/O failure.
void emit_report(const std::vector<VerificationReport>& reports, const std::vector<RateFit>& fits,
                 const std::filesystem::path& path,
                 const nlohmann::ordered_json& meta = nlohmann::ordered_json::object());

}  // namespace mmlab
