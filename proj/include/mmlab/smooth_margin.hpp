#pragma once

#include "mmlab/dataset.hpp"
#include "mmlab/types.hpp"

namespace mmlab {

/// Inverse temperature of the soft-min. Must be finite and positive.
struct SmoothMarginParams {
  double beta = 1.0;

  void validate() const;
};

// Smoothed margin R_beta(w) = -(1/beta) log((1/n) sum_i exp(-beta u_i)) with
// u_i = y_i x_i^T w. Everything below runs in log space with max-subtraction,
// so arbitrarily large ||w|| is fine.

/// Softmax weights q_i proportional to exp(-beta u_i).
Vector boltzmann_weights(const Vector& w, const Dataset& d, const SmoothMarginParams& p);
double smooth_margin_value(const Vector& w, const Dataset& d, const SmoothMarginParams& p);
/// sum_i q_i s_i, a point of the convex hull of the signed points.
Vector smooth_margin_grad(const Vector& w, const Dataset& d, const SmoothMarginParams& p);

/// (1/n) sum_i exp(-beta u_i). Throws NumericalError when the result is not
/// representable; use log_empirical_risk in that regime.
double empirical_risk(const Vector& w, const Dataset& d, const SmoothMarginParams& p);
double log_empirical_risk(const Vector& w, const Dataset& d, const SmoothMarginParams& p);

// Same quantities from precomputed per-sample margins u.
Vector boltzmann_from_margins(const Vector& u, double beta);
double smooth_margin_from_margins(const Vector& u, double beta);

/// Value, weights and gradient in one pass over the data.
struct SmoothEval {
  double value = 0.0;
  Vector weights;
  Vector grad;
};

SmoothEval smooth_margin_eval(const Vector& w, const Dataset& d, const SmoothMarginParams& p);

}  // namespace mmlab
