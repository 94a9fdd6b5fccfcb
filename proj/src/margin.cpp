#include "mmlab/margin.hpp"

#include <algorithm>
#include <cmath>

#include "mmlab/min_norm_point.hpp"

namespace mmlab {
namespace {

void require_dimension(const Vector& w, const Dataset& d) {
  if (static_cast<std::size_t>(w.size()) != d.m())
    throw InvalidArgument("vector of dimension " + std::to_string(w.size()) +
                          " used with a dataset of dimension " + std::to_string(d.m()));
}

void require_unit(const Vector& w) {
  if (std::abs(w.norm() - 1.0) > 1e-8)
    throw InvalidArgument("expected a unit vector, got norm " + std::to_string(w.norm()));
}

}  // namespace

double hard_margin(const Vector& w, const Dataset& d) {
  require_dimension(w, d);
  return (d.signed_points() * w).minCoeff();
}

Vector normalize(const Vector& w) {
  const double norm = w.norm();
  if (!std::isfinite(norm)) throw InvalidArgument("normalize: non-finite vector");
  if (norm == 0.0) throw InvalidArgument("normalize: zero vector has no direction");
  return w / norm;
}

MarginSolution optimal_margin(const Dataset& d, const SolveOptions& options) {
  MinNormOptions mn;
  mn.tol = options.tol;
  mn.max_iterations = options.max_iterations;
  mn.start_vertex = options.start_vertex;
  const MinNormResult dual = min_norm_point(d.signed_points(), mn);

  if (dual.value <= options.separability_threshold)
    throw NonSeparableError("dataset is not linearly separable: optimal margin " +
                            std::to_string(dual.value) + " <= " +
                            std::to_string(options.separability_threshold));

  MarginSolution sol;
  sol.gamma_opt = dual.value;
  sol.q_star = dual.q;
  const Vector v = d.signed_points().transpose() * dual.q;
  sol.w_opt = v / v.norm();
  sol.dual_gap = std::max(0.0, sol.gamma_opt - hard_margin(sol.w_opt, d));
  sol.support = support_set(sol.w_opt, d, options.support_eps);
  return sol;
}

std::vector<std::size_t> support_set(const Vector& w, const Dataset& d, double eps) {
  require_dimension(w, d);
  const Vector margins = d.signed_points() * w;
  const double gamma = margins.minCoeff();
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < margins.size(); ++i)
    if (margins(i) <= gamma + eps) out.push_back(static_cast<std::size_t>(i));
  return out;
}

double min_norm_subgradient(const Vector& w, const Dataset& d, double eps, double tol) {
  require_dimension(w, d);
  require_unit(w);
  const auto active = support_set(w, d, eps);
  Matrix projected(static_cast<Eigen::Index>(active.size()), static_cast<Eigen::Index>(d.m()));
  for (std::size_t a = 0; a < active.size(); ++a) {
    const Vector s = d.signed_points().row(static_cast<Eigen::Index>(active[a])).transpose();
    projected.row(static_cast<Eigen::Index>(a)) = (s - s.dot(w) * w).transpose();
  }
  MinNormOptions mn;
  mn.tol = tol;
  return min_norm_point(projected, mn).value;
}

KlCheck kl_check(const Vector& w, const Dataset& d, const MarginSolution& sol, double eps,
                 double slack) {
  KlCheck out;
  const double gamma = hard_margin(w, d);
  out.rhs = sol.gamma_opt * (sol.gamma_opt - gamma);
  out.applicable = gamma >= 0.0;
  const double s = min_norm_subgradient(w, d, eps);
  out.lhs = s * s;
  out.holds = out.lhs >= out.rhs - slack;
  return out;
}

double interlace_lower_bound(double deficit, double radius) { return deficit / radius; }

double interlace_upper_bound(double deficit, double gamma_opt) {
  return 2.0 * std::sqrt(std::max(0.0, deficit) / gamma_opt);
}

InterlaceCheck interlace_check(const Vector& w, const Dataset& d, const MarginSolution& sol,
                               double slack) {
  require_unit(w);
  InterlaceCheck out;
  const double gamma = hard_margin(w, d);
  const double deficit = sol.gamma_opt - gamma;
  out.lower = interlace_lower_bound(deficit, d.radius());
  out.bias = (w - sol.w_opt).norm();
  out.upper = interlace_upper_bound(deficit, sol.gamma_opt);
  out.upper_applicable = gamma >= 0.0;
  out.holds = out.lower <= out.bias + slack &&
              (!out.upper_applicable || out.bias <= out.upper + slack);
  return out;
}

}  // namespace mmlab
