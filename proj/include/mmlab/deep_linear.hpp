#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mmlab/dataset.hpp"
#include "mmlab/margin.hpp"
#include "mmlab/smooth_margin.hpp"
#include "mmlab/trajectory.hpp"

namespace mmlab {

/// Widths m_0 = m, m_1, ..., m_L = 1 of a deep linear network x -> x^T W_1 ... W_L.
struct Architecture {
  std::vector<std::size_t> widths;

  std::size_t depth() const noexcept { return widths.empty() ? 0 : widths.size() - 1; }
  void validate() const;
  /// Input dimension m and hidden widths m_1..m_{L-1}; output width is 1.
  static Architecture make(std::size_t input_dim, const std::vector<std::size_t>& hidden = {});
};

/// Layers W_1..W_L, layer l of shape m_{l-1} x m_l. Valid parameters sit on
/// the product of spheres: every layer has unit Frobenius norm.
struct DeepParams {
  std::vector<Matrix> layers;

  std::size_t depth() const noexcept { return layers.size(); }
  Architecture architecture() const;
};

using LayerMatrices = std::vector<Matrix>;

/// Standard-normal entries, then each layer scaled to unit Frobenius norm.
DeepParams random_params(const Architecture& arch, std::uint64_t seed);
/// Metric projection back onto the product of spheres.
void retract(DeepParams& params);

/// P(W) = W_1 ... W_L as an m-vector. Throws InvalidArgument on a shape mismatch.
Vector deep_product(const DeepParams& params);
/// min_i s_i^T P(W).
double deep_margin(const DeepParams& params, const Dataset& d);

/// Gradient of v^T P(W) with respect to each layer:
/// U_{l-1}^T v V_{l+1}^T, with U and V the prefix and suffix products.
LayerMatrices layer_gradients(const DeepParams& params, const Vector& v);
/// Layer gradients of sum_i q_i s_i^T P(W).
LayerMatrices layer_gradients(const DeepParams& params, const Vector& q, const Dataset& d);

/// Per-layer tangent projection G_l - <G_l, W_l>_F W_l.
LayerMatrices tangent_project(const DeepParams& params, const LayerMatrices& g);

double frobenius_inner(const Matrix& a, const Matrix& b);

/// max over layers l and samples i of |<grad_{W_l} f_i, W_l>_F - f_i(W)|,
/// where f_i(W) = s_i^T P(W). Zero up to rounding at every W.
double trace_identity_residual(const DeepParams& params, const Dataset& d);

/// Slope inequality for the deep margin on the product of spheres:
///   lhs = min over q on the face I(W) of sum_l ||proj_l(grad_l(sum q_i s_i))||_F^2
///   rhs = L * gamma_opt * (gamma_opt - margin(W))
struct DeepSlopeCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = false;  // margin(W) >= 0
  bool holds = false;
};

DeepSlopeCheck deep_subgradient_check(const DeepParams& params, const Dataset& d, double eps,
                                      const MarginSolution& sol, double slack = 1e-9);

struct DeepAscentOptions {
  Architecture arch;
  std::size_t steps = 5000;
  double eta = 0.1;
  std::uint64_t seed = 1;
  /// Steps to record; empty means a geometric grid over [1, steps].
  std::vector<std::size_t> record_at;
  /// Called after every step (1-based) with the retracted parameters.
  std::function<void(std::size_t, const DeepParams&)> observer;
};

/// Riemannian gradient ascent of R_beta(P(W)) on the product of spheres:
/// Boltzmann weights at P(W), layer gradients, tangent projection, step,
/// renormalisation. Records the deep margin, bias = ||P(W) - w_opt|| and the
/// extra columns bias_normalized, riemannian_grad_norm, product_bound.
/// A product with norm below 1e-12 triggers a re-draw from a fresh seed.
Trajectory riemannian_ascent(const Dataset& d, const SmoothMarginParams& p,
                             const DeepAscentOptions& options, const MarginSolution& sol);

}  // namespace mmlab
