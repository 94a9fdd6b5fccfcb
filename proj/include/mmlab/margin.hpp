#pragma once

#include <cstddef>
#include <vector>

#include "mmlab/dataset.hpp"
#include "mmlab/types.hpp"

namespace mmlab {

/// min_i y_i x_i^T w. Not normalised: the margin is 1-homogeneous in w.
double hard_margin(const Vector& w, const Dataset& d);

/// w / ||w||. Throws InvalidArgument for the zero vector or non-finite input.
Vector normalize(const Vector& w);

/// Optimal margin and the max-margin direction, obtained from the dual
/// min-norm-point problem over the signed points.
struct MarginSolution {
  double gamma_opt = 0.0;            // ||sum_i q*_i s_i||
  Vector q_star;                     // dual simplex weights
  Vector w_opt;                      // unit max-margin direction
  std::vector<std::size_t> support;  // i with s_i^T w_opt <= margin(w_opt) + support_eps
  /// gamma_opt - margin(w_opt) >= 0. The true optimum lies in
  /// [gamma_opt - dual_gap, gamma_opt].
  double dual_gap = 0.0;
};

struct SolveOptions {
  double tol = 1e-10;                    // Frank-Wolfe gap target
  double support_eps = 1e-7;             // absolute, on margin values
  double separability_threshold = 1e-6;  // gamma_opt at or below this is an error
  std::size_t max_iterations = 1'000'000;
  std::size_t start_vertex = 0;
};

/// Throws NonSeparableError when gamma_opt <= separability_threshold.
MarginSolution optimal_margin(const Dataset& d, const SolveOptions& options = {});

/// I(w) = { i : s_i^T w <= margin(w) + eps }, ascending.
std::vector<std::size_t> support_set(const Vector& w, const Dataset& d, double eps);

/// Norm of the smallest tangential subgradient of the negative margin on the
/// sphere at unit w: min over q on the face I(w) of ||P_{w-perp}(sum q_i s_i)||.
double min_norm_subgradient(const Vector& w, const Dataset& d, double eps = 1e-9,
                            double tol = 1e-12);

/// Error-bound inequality with exponent 1/2 at a unit vector:
/// s(w)^2 >= gamma_opt * (gamma_opt - margin(w)), valid when margin(w) >= 0.
struct KlCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = false;  // margin(w) >= 0
  bool holds = false;       // only meaningful when applicable
};

KlCheck kl_check(const Vector& w, const Dataset& d, const MarginSolution& sol,
                 double eps = 1e-9, double slack = 1e-9);

/// (gamma_opt - margin)/R <= ||w - w_opt|| <= 2 sqrt((gamma_opt - margin)/gamma_opt).
/// The lower bound always applies; the upper one only when margin(w) >= 0.
struct InterlaceCheck {
  double lower = 0.0;
  double bias = 0.0;
  double upper = 0.0;
  bool upper_applicable = false;
  bool holds = false;
};

double interlace_lower_bound(double deficit, double radius);
double interlace_upper_bound(double deficit, double gamma_opt);

InterlaceCheck interlace_check(const Vector& w, const Dataset& d, const MarginSolution& sol,
                               double slack = 1e-9);

}  // namespace mmlab
