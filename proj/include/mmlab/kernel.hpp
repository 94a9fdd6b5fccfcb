#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mmlab/dataset.hpp"
#include "mmlab/smooth_margin.hpp"
#include "mmlab/trajectory.hpp"

namespace mmlab {

/// Positive definite kernel: linear <x, y> or RBF exp(-||x - y||^2 / (2 sigma^2)).
struct KernelSpec {
  enum class Kind { linear, rbf };
  Kind kind = Kind::linear;
  double sigma = 1.0;

  static KernelSpec linear() { return {Kind::linear, 1.0}; }
  static KernelSpec rbf(double sigma) { return {Kind::rbf, sigma}; }

  void validate() const;
  double operator()(const Vector& a, const Vector& b) const;
};

std::string to_string(const KernelSpec& k);

/// K_ij = kappa(x_i, x_j).
Matrix gram(const Dataset& d, const KernelSpec& k);
/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Matrix& sym);
/// min_eigenvalue(K) >= -tol.
bool is_psd(const Matrix& sym, double tol = 1e-9);

/// G = diag(y) K diag(y).
Matrix signed_gram(const Dataset& d, const Matrix& k);

struct KernelMarginSolution {
  double gamma_opt = 0.0;  // min over the simplex of sqrt(q^T G q)
  Vector q_star;
  /// Coefficients y o q* / sqrt(q*^T G q*) of the unit-norm max-margin function.
  Vector alpha_star;
  double gap = 0.0;        // Frank-Wolfe gap on q^T G q
};

/// RKHS optimal margin through the simplex min-norm dual in the signed Gram
/// metric. The solver stops once the gap on q^T G q is at most tol^2.
/// Throws InvalidArgument when the Gram matrix is not PSD, SolverError on the
/// iteration cap.
KernelMarginSolution kernel_optimal_margin(const Dataset& d, const KernelSpec& k,
                                           double tol = 1e-6);

/// f = sum_j alpha_j kappa(., x_j) over the training points of a dataset.
struct KernelModel {
  Vector alpha;
};

/// min_i y_i (K alpha)_i / sqrt(alpha^T K alpha). Throws NumericalError for
/// the zero function (alpha^T K alpha <= 1e-24).
double kernel_margin(const KernelModel& model, const Dataset& d, const Matrix& k);
double kernel_margin(const KernelModel& model, const Dataset& d, const KernelSpec& k);

/// sqrt((a - b)^T K (a - b)).
double rkhs_distance(const Vector& a, const Vector& b, const Matrix& k);

struct KernelAscentOptions {
  /// gd_constant (step eta) or gd_adaptive (step 1/sqrt(t+1)).
  Schedule schedule = Schedule::adaptive();
  std::size_t steps = 1000;
  /// Iteration counts to record; empty means a geometric grid over [1, steps].
  std::vector<std::size_t> record_at;
  double solver_tol = 1e-6;
};

/// Functional-gradient ascent of the smoothed margin on u = y o (K alpha)
/// from alpha = 0: alpha += eta_t (q o y) with q the Boltzmann weights of u.
/// Records the kernel margin of the normalised function; bias and deficit
/// both hold gamma_H - margin, and the extra column h_dist holds the RKHS
/// distance of the normalised function to the max-margin one.
Trajectory kernel_ascent(const Dataset& d, const KernelSpec& k, const SmoothMarginParams& p,
                         const KernelAscentOptions& options);

}  // namespace mmlab
