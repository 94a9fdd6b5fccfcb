#include "mmlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace mmlab {

namespace {

class Tally {
 public:
  explicit Tally(std::string name) { result_.name = std::move(name); }

  void add(std::size_t index, double t, double slack) {
    if (!std::isfinite(slack)) slack = std::numeric_limits<double>::lowest();
    ++result_.applicable;
    if (slack >= 0.0) ++result_.passed;
    if (!result_.worst_record || slack < result_.worst_slack) {
      result_.worst_slack = slack;
      result_.worst_record = index;
      result_.worst_t = t;
    }
  }

  CheckResult take() { return std::move(result_); }

 private:
  CheckResult result_;
};

bool is_linear(RunKind k) {
  return k == RunKind::flow || k == RunKind::gd_constant || k == RunKind::gd_adaptive ||
         k == RunKind::gd_aggressive;
}

}  // namespace

bool VerificationReport::ok() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok(); });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

VerificationReport verify_trajectory(const Trajectory& traj, const Dataset& d,
                                     const MarginSolution& sol, const VerifyOptions& options) {
  const std::string id = dataset_id(d);
  if (traj.meta.dataset_id != id)
    throw DatasetMismatch("trajectory was produced on dataset " + traj.meta.dataset_id +
                          ", not " + id);

  VerificationReport report;
  report.dataset_id = id;
  report.kind = traj.meta.kind;

  const double gamma = sol.gamma_opt;
  const double radius = d.radius();
  const double log_n = std::log(static_cast<double>(d.n()));
  const double eps = options.eps_int;
  const RunKind kind = traj.meta.kind;
  const auto& recs = traj.records;

  if (kind == RunKind::kernel) {
    Tally duality("kernel_weak_duality");
    for (std::size_t i = 0; i < recs.size(); ++i)
      duality.add(i, recs[i].t, traj.meta.gamma_opt + options.interlace_slack - recs[i].margin);
    report.checks.push_back(duality.take());
    return report;
  }

  if (kind == RunKind::flow) {
    const double threshold = log_n / (gamma * gamma);
    Tally rate("flow_margin_rate"), energy("flow_energy"), growth("flow_norm_growth"),
        chained("chained_bias_bound"), implication("chain_implication");
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto& r = recs[i];
      energy.add(i, r.t, r.smooth_margin - gamma * gamma * r.t * (1.0 - eps) + options.abs_floor);
      growth.add(i, r.t, radius * r.t * (1.0 + options.norm_slack) - r.norm_w);
      if (r.t < threshold) continue;

      const double rate_bound = log_n / (gamma * r.t) * (1.0 + eps) + options.abs_floor;
      const double rate_slack = rate_bound - r.deficit;
      rate.add(i, r.t, rate_slack);

      // The second form is what the rate bound and the upper interlacing
      // bound give when combined; it only differs from the first through
      // the absolute floor.
      const double chained_bound =
          std::max(2.0 / gamma * std::sqrt(log_n / r.t) * (1.0 + eps),
                   2.0 * std::sqrt(rate_bound / gamma)) +
          options.interlace_slack;
      const double chained_slack = chained_bound - r.bias;
      chained.add(i, r.t, chained_slack);

      const bool upper_ok =
          r.margin >= 0.0 &&
          r.bias <= interlace_upper_bound(r.deficit, gamma) + options.interlace_slack;
      if (rate_slack >= 0.0 && upper_ok) implication.add(i, r.t, chained_slack);
    }
    report.checks.push_back(rate.take());
    report.checks.push_back(energy.take());
    report.checks.push_back(growth.take());
    report.checks.push_back(chained.take());
    report.checks.push_back(implication.take());
  }

  Tally lower("interlace_lower"), upper("interlace_upper"), grad("grad_norm_bounds");
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    lower.add(i, r.t, r.bias + options.interlace_slack - interlace_lower_bound(r.deficit, radius));
    if (r.margin >= 0.0)
      upper.add(i, r.t, interlace_upper_bound(r.deficit, gamma) + options.interlace_slack - r.bias);
    if (is_linear(kind) || kind == RunKind::deep)
      grad.add(i, r.t,
               std::min(r.grad_norm - (gamma - options.grad_tol),
                        radius + options.grad_tol - r.grad_norm));
  }
  report.checks.push_back(lower.take());
  report.checks.push_back(upper.take());
  report.checks.push_back(grad.take());
  return report;
}

std::string to_string(RateField f) { return f == RateField::deficit ? "deficit" : "bias"; }

RateField rate_field_from_string(const std::string& name) {
  if (name == "deficit") return RateField::deficit;
  if (name == "bias") return RateField::bias;
  throw InvalidArgument("rate field must be deficit or bias, not \"" + name + "\"");
}

RateFit fit_power_law(const std::vector<double>& t, const std::vector<double>& value) {
  if (t.size() != value.size()) throw InvalidArgument("fit: t and value lengths differ");
  if (t.size() < 5)
    throw InvalidArgument("fit needs at least 5 points, got " + std::to_string(t.size()));
  const auto k = static_cast<Eigen::Index>(t.size());
  Vector lx(k), ly(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (!(t[idx] > 0.0)) throw InvalidArgument("fit: times must be positive");
    if (!(value[idx] > 0.0) || !std::isfinite(value[idx]))
      throw NumericalError("fit: non-positive value " + std::to_string(value[idx]) + " at t = " +
                           std::to_string(t[idx]) + "; shrink the window");
    lx(i) = std::log(t[idx]);
    ly(i) = std::log(value[idx]);
  }
  const double mx = lx.mean();
  const double my = ly.mean();
  const Vector cx = lx.array() - mx;
  const Vector cy = ly.array() - my;
  const double sxx = cx.squaredNorm();
  if (!(sxx > 0.0)) throw InvalidArgument("fit: all times are equal");

  RateFit fit;
  fit.slope = cx.dot(cy) / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_tot = cy.squaredNorm();
  const double ss_res = (cy - fit.slope * cx).squaredNorm();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.t_min = *std::min_element(t.begin(), t.end());
  fit.t_max = *std::max_element(t.begin(), t.end());
  fit.n_points = t.size();
  return fit;
}

RateFit fit_rate(const Trajectory& traj, RateField field, double t_min, double t_max) {
  std::vector<double> ts, vs;
  for (const auto& r : traj.records) {
    if (r.t < t_min || r.t > t_max) continue;
    ts.push_back(r.t);
    vs.push_back(field == RateField::deficit ? r.deficit : r.bias);
  }
  RateFit fit = fit_power_law(ts, vs);
  fit.field = to_string(field);
  return fit;
}

nlohmann::ordered_json to_json(const CheckResult& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["applicable"] = c.applicable;
  j["passed"] = c.passed;
  j["worst_slack"] = c.worst_slack;
  if (c.worst_record) j["location"] = {{"record", *c.worst_record}, {"t", c.worst_t}};
  else j["location"] = nullptr;
  return j;
}

nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["dataset_id"] = r.dataset_id;
  j["kind"] = to_string(r.kind);
  j["status"] = r.ok() ? "pass" : "fail";
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
  return j;
}

nlohmann::ordered_json to_json(const RateFit& f) {
  nlohmann::ordered_json j;
  j["field"] = f.field;
  j["slope"] = f.slope;
  j["intercept"] = f.intercept;
  j["r_squared"] = f.r_squared;
  j["window"] = {f.t_min, f.t_max};
  j["n_points"] = f.n_points;
  return j;
}

nlohmann::ordered_json build_report(const std::vector<VerificationReport>& reports,
                                    const std::vector<RateFit>& fits,
                                    const nlohmann::ordered_json& meta) {
  nlohmann::ordered_json out;
  out["meta"] = meta;

  bool ok = true;
  std::size_t failed = 0;
  const CheckResult* worst = nullptr;
  std::size_t worst_run = 0;
  for (std::size_t k = 0; k < reports.size(); ++k)
    for (const auto& c : reports[k].checks) {
      if (c.ok()) continue;
      ok = false;
      ++failed;
      if (!worst || c.worst_slack < worst->worst_slack) {
        worst = &c;
        worst_run = k;
      }
    }
  nlohmann::ordered_json summary;
  summary["status"] = ok ? "pass" : "fail";
  summary["runs"] = reports.size();
  summary["failed_checks"] = failed;
  if (worst) {
    summary["worst"] = to_json(*worst);
    summary["worst"]["run"] = worst_run;
  } else {
    summary["worst"] = nullptr;
  }
  out["summary"] = summary;

  out["checks"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < reports.size(); ++k) {
    auto j = to_json(reports[k]);
    j["run"] = k;
    out["checks"].push_back(std::move(j));
  }
  out["fits"] = nlohmann::ordered_json::array();
  for (const auto& f : fits) out["fits"].push_back(to_json(f));
  return out;
}

void emit_report(const std::vector<VerificationReport>& reports, const std::vector<RateFit>& fits,
                 const std::filesystem::path& path, const nlohmann::ordered_json& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << build_report(reports, fits, meta).dump(2) << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace mmlab
