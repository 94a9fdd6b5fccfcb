#include "mmlab/smooth_margin.hpp"

#include <cmath>
#include <limits>

namespace mmlab {

void SmoothMarginParams::validate() const {
  if (!(std::isfinite(beta) && beta > 0.0))
    throw InvalidArgument("inverse temperature beta must be finite and positive");
}

namespace {

Vector margins_of(const Vector& w, const Dataset& d) {
  if (static_cast<std::size_t>(w.size()) != d.m())
    throw InvalidArgument("vector dimension does not match dataset");
  return d.signed_points() * w;
}

}  // namespace

Vector boltzmann_from_margins(const Vector& u, double beta) {
  const double u_min = u.minCoeff();
  Vector q = (-beta * (u.array() - u_min)).exp().matrix();
  q /= q.sum();
  return q;
}

double smooth_margin_from_margins(const Vector& u, double beta) {
  const double u_min = u.minCoeff();
  const double mean = (-beta * (u.array() - u_min)).exp().mean();
  return u_min - std::log(mean) / beta;
}

Vector boltzmann_weights(const Vector& w, const Dataset& d, const SmoothMarginParams& p) {
  p.validate();
  return boltzmann_from_margins(margins_of(w, d), p.beta);
}

double smooth_margin_value(const Vector& w, const Dataset& d, const SmoothMarginParams& p) {
  p.validate();
  return smooth_margin_from_margins(margins_of(w, d), p.beta);
}

Vector smooth_margin_grad(const Vector& w, const Dataset& d, const SmoothMarginParams& p) {
  return d.signed_points().transpose() * boltzmann_weights(w, d, p);
}

double log_empirical_risk(const Vector& w, const Dataset& d, const SmoothMarginParams& p) {
  return -p.beta * smooth_margin_value(w, d, p);
}

double empirical_risk(const Vector& w, const Dataset& d, const SmoothMarginParams& p) {
  const double log_risk = log_empirical_risk(w, d, p);
  if (log_risk > std::log(std::numeric_limits<double>::max()))
    throw NumericalError("empirical risk overflows (log risk " + std::to_string(log_risk) +
                         "); use log_empirical_risk");
  return std::exp(log_risk);
}

SmoothEval smooth_margin_eval(const Vector& w, const Dataset& d, const SmoothMarginParams& p) {
  p.validate();
  const Vector u = margins_of(w, d);
  SmoothEval out;
  out.value = smooth_margin_from_margins(u, p.beta);
  out.weights = boltzmann_from_margins(u, p.beta);
  out.grad = d.signed_points().transpose() * out.weights;
  return out;
}

}  // namespace mmlab
