#pragma once

#include <cstddef>

#include "mmlab/types.hpp"

namespace mmlab {

struct MinNormOptions {
  /// Stop once the Frank-Wolfe gap of q -> q^T G q is at most this.
  double tol = 1e-10;
  std::size_t max_iterations = 1'000'000;
  /// Vertex the iteration starts from.
  std::size_t start_vertex = 0;
  /// After the gap test passes, solve the affine KKT system on the active
  /// face and keep the result if it is feasible and no worse.
  bool refine_face = true;
};

struct MinNormResult {
  Vector q;              // simplex weights
  double value = 0.0;    // sqrt(q^T G q)
  double gap = 0.0;      // Frank-Wolfe gap certificate, >= f(q) - min f
  std::size_t iterations = 0;
};

/// Minimum-norm point of the convex hull of the rows of `points` (k x d):
/// min over the simplex of ||sum_i q_i p_i||. Away-step Frank-Wolfe with
/// exact line search, ties broken towards the lowest index.
///
/// Throws InvalidArgument for k == 0 or tol <= 0, SolverError when the
/// iteration cap is reached first.
MinNormResult min_norm_point(const Matrix& points, const MinNormOptions& options = {});

/// Same problem stated through a symmetric PSD Gram matrix G:
/// min over the simplex of sqrt(q^T G q).
MinNormResult min_norm_gram(const Matrix& gram, const MinNormOptions& options = {});

}  // namespace mmlab
