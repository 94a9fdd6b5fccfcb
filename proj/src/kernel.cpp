#include "mmlab/kernel.hpp"

#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "mmlab/min_norm_point.hpp"
#include "mmlab/optimizers.hpp"
#include "text_util.hpp"

namespace mmlab {

void KernelSpec::validate() const {
  if (kind == Kind::rbf && !(sigma > 0.0 && std::isfinite(sigma)))
    throw InvalidArgument("rbf kernel needs sigma > 0");
}

double KernelSpec::operator()(const Vector& a, const Vector& b) const {
  if (kind == Kind::linear) return a.dot(b);
  return std::exp(-(a - b).squaredNorm() / (2.0 * sigma * sigma));
}

std::string to_string(const KernelSpec& k) {
  if (k.kind == KernelSpec::Kind::linear) return "linear";
  return "rbf(" + detail::format_double(k.sigma) + ")";
}

Matrix gram(const Dataset& d, const KernelSpec& k) {
  k.validate();
  const auto n = static_cast<Eigen::Index>(d.n());
  if (k.kind == KernelSpec::Kind::linear) return d.features() * d.features().transpose();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out(i, j) = k(d.features().row(i).transpose(), d.features().row(j).transpose());
      out(j, i) = out(i, j);
    }
  }
  return out;
}

double min_eigenvalue(const Matrix& sym) {
  if (sym.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue probe failed");
  return solver.eigenvalues().minCoeff();
}

bool is_psd(const Matrix& sym, double tol) { return min_eigenvalue(sym) >= -tol; }

Matrix signed_gram(const Dataset& d, const Matrix& k) {
  if (static_cast<std::size_t>(k.rows()) != d.n() || k.rows() != k.cols())
    throw InvalidArgument("Gram matrix does not match the dataset");
  return d.labels().asDiagonal() * k * d.labels().asDiagonal();
}

KernelMarginSolution kernel_optimal_margin(const Dataset& d, const KernelSpec& k, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("kernel margin tolerance must be positive");
  const Matrix kg = gram(d, k);
  if (!is_psd(kg)) throw InvalidArgument("Gram matrix is not positive semidefinite");
  const Matrix g = signed_gram(d, kg);

  MinNormOptions opts;
  opts.tol = tol * tol;
  const MinNormResult r = min_norm_gram(g, opts);

  KernelMarginSolution out;
  out.gamma_opt = r.value;
  out.q_star = r.q;
  out.gap = r.gap;
  if (r.value > 0.0) out.alpha_star = d.labels().cwiseProduct(r.q) / r.value;
  else out.alpha_star = Vector::Zero(static_cast<Eigen::Index>(d.n()));
  return out;
}

double kernel_margin(const KernelModel& model, const Dataset& d, const Matrix& k) {
  if (static_cast<std::size_t>(model.alpha.size()) != d.n())
    throw InvalidArgument("coefficient vector length does not match the sample count");
  if (!model.alpha.allFinite()) throw InvalidArgument("non-finite coefficients");
  const Vector ka = k * model.alpha;
  const double sq = model.alpha.dot(ka);
  if (!(sq > 1e-24)) throw NumericalError("kernel margin of the zero function");
  return d.labels().cwiseProduct(ka).minCoeff() / std::sqrt(sq);
}

double kernel_margin(const KernelModel& model, const Dataset& d, const KernelSpec& k) {
  return kernel_margin(model, d, gram(d, k));
}

double rkhs_distance(const Vector& a, const Vector& b, const Matrix& k) {
  const Vector diff = a - b;
  return std::sqrt(std::max(0.0, diff.dot(k * diff)));
}

Trajectory kernel_ascent(const Dataset& d, const KernelSpec& k, const SmoothMarginParams& p,
                         const KernelAscentOptions& options) {
  p.validate();
  options.schedule.validate();
  if (options.steps < 1) throw InvalidArgument("kernel ascent: need at least one step");
  if (options.schedule.kind != RunKind::gd_constant &&
      options.schedule.kind != RunKind::gd_adaptive)
    throw InvalidArgument("kernel ascent supports gd-constant and gd-adaptive steps, not " +
                          to_string(options.schedule.kind));

  const Matrix kg = gram(d, k);
  const KernelMarginSolution sol = kernel_optimal_margin(d, k, options.solver_tol);
  const Vector& y = d.labels();

  std::set<std::size_t> record_steps;
  for (std::size_t s : options.record_at.empty() ? geometric_iterations(options.steps)
                                                 : options.record_at)
    if (s >= 1 && s <= options.steps) record_steps.insert(s);

  Trajectory traj;
  traj.meta.dataset_id = dataset_id(d);
  traj.meta.kind = RunKind::kernel;
  traj.meta.schedule = options.schedule;
  traj.meta.beta = p.beta;
  traj.meta.solver_tol = options.solver_tol;
  traj.meta.gamma_opt = sol.gamma_opt;
  traj.meta.details["kernel"] = to_string(k);
  traj.meta.details["steps"] = options.steps;
  traj.extra_columns = {"h_dist"};

  Vector alpha = Vector::Zero(static_cast<Eigen::Index>(d.n()));
  Vector u = Vector::Zero(alpha.size());
  double value = smooth_margin_from_margins(u, p.beta);
  for (std::size_t t = 0; t < options.steps; ++t) {
    const double eta = options.schedule.kind == RunKind::gd_constant
                           ? options.schedule.eta
                           : 1.0 / std::sqrt(static_cast<double>(t) + 1.0);
    alpha += eta * boltzmann_from_margins(u, p.beta).cwiseProduct(y);
    const std::size_t step = t + 1;
    if (!alpha.allFinite())
      throw NumericalError("kernel ascent: non-finite state at step " + std::to_string(step));
    u = y.cwiseProduct(kg * alpha);

    const double next = smooth_margin_from_margins(u, p.beta);
    if (next < value - 1e-9) ++traj.meta.ascent_violations;
    value = next;

    if (record_steps.count(step)) {
      const double norm = std::sqrt(std::max(0.0, alpha.dot(kg * alpha)));
      const Vector q = boltzmann_from_margins(u, p.beta);
      const Vector yq = y.cwiseProduct(q);
      TrajectoryRecord r;
      r.t = static_cast<double>(step);
      r.norm_w = norm;
      r.margin = kernel_margin(KernelModel{alpha}, d, kg);
      r.smooth_margin = next;
      r.grad_norm = std::sqrt(std::max(0.0, yq.dot(kg * yq)));
      r.deficit = sol.gamma_opt - r.margin;
      r.bias = r.deficit;
      r.extra = {rkhs_distance(alpha / norm, sol.alpha_star, kg)};
      traj.records.push_back(std::move(r));
    }
  }
  traj.final_iterate = alpha;
  return traj;
}

}  // namespace mmlab
