#include "mmlab/deep_linear.hpp"

#include <cmath>
#include <random>
#include <set>

#include "mmlab/min_norm_point.hpp"
#include "mmlab/optimizers.hpp"

namespace mmlab {

void Architecture::validate() const {
  if (widths.size() < 2) throw InvalidArgument("architecture needs depth L >= 1");
  for (auto w : widths)
    if (w == 0) throw InvalidArgument("architecture widths must be positive");
  if (widths.back() != 1) throw InvalidArgument("architecture output width must be 1");
}

Architecture Architecture::make(std::size_t input_dim, const std::vector<std::size_t>& hidden) {
  Architecture arch;
  arch.widths.push_back(input_dim);
  arch.widths.insert(arch.widths.end(), hidden.begin(), hidden.end());
  arch.widths.push_back(1);
  arch.validate();
  return arch;
}

Architecture DeepParams::architecture() const {
  Architecture arch;
  if (layers.empty()) return arch;
  arch.widths.push_back(static_cast<std::size_t>(layers.front().rows()));
  for (const auto& w : layers) arch.widths.push_back(static_cast<std::size_t>(w.cols()));
  return arch;
}

namespace {

void check_chain(const DeepParams& params) {
  if (params.layers.empty()) throw InvalidArgument("deep parameters have no layers");
  for (std::size_t l = 1; l < params.layers.size(); ++l)
    if (params.layers[l - 1].cols() != params.layers[l].rows())
      throw InvalidArgument("layer " + std::to_string(l) + " has " +
                            std::to_string(params.layers[l - 1].cols()) +
                            " columns but layer " + std::to_string(l + 1) + " has " +
                            std::to_string(params.layers[l].rows()) + " rows");
  if (params.layers.back().cols() != 1)
    throw InvalidArgument("last layer must have a single column");
}

void check_dataset(const DeepParams& params, const Dataset& d) {
  check_chain(params);
  if (static_cast<std::size_t>(params.layers.front().rows()) != d.m())
    throw InvalidArgument("first layer has " + std::to_string(params.layers.front().rows()) +
                          " rows but the dataset dimension is " + std::to_string(d.m()));
}

// prefix[l] = W_1 ... W_{l} (identity for l = 0); suffix[l] = W_{l+2} ... W_L
// in 1-based terms, i.e. the product after layer l (0-based), 1 x 1 identity
// after the last layer.
struct Products {
  std::vector<Matrix> prefix;
  std::vector<Matrix> suffix;
};

Products products(const DeepParams& params) {
  const std::size_t depth = params.depth();
  Products out;
  out.prefix.resize(depth);
  out.suffix.resize(depth);
  out.prefix[0] = Matrix::Identity(params.layers[0].rows(), params.layers[0].rows());
  for (std::size_t l = 1; l < depth; ++l) out.prefix[l] = out.prefix[l - 1] * params.layers[l - 1];
  out.suffix[depth - 1] = Matrix::Identity(1, 1);
  for (std::size_t l = depth - 1; l-- > 0;) out.suffix[l] = params.layers[l + 1] * out.suffix[l + 1];
  return out;
}

LayerMatrices gradients_with(const Products& prod, std::size_t depth, const Vector& v) {
  LayerMatrices out(depth);
  for (std::size_t l = 0; l < depth; ++l)
    out[l] = (prod.prefix[l].transpose() * v) * prod.suffix[l].transpose();
  return out;
}

}  // namespace

DeepParams random_params(const Architecture& arch, std::uint64_t seed) {
  arch.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  DeepParams params;
  for (std::size_t l = 0; l < arch.depth(); ++l) {
    Matrix w(static_cast<Eigen::Index>(arch.widths[l]), static_cast<Eigen::Index>(arch.widths[l + 1]));
    do {
      for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = normal(rng);
    } while (w.norm() == 0.0);
    params.layers.push_back(std::move(w));
  }
  retract(params);
  return params;
}

void retract(DeepParams& params) {
  for (auto& w : params.layers) {
    const double norm = w.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw NumericalError("cannot retract a zero or non-finite layer");
    w /= norm;
  }
}

double frobenius_inner(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

Vector deep_product(const DeepParams& params) {
  check_chain(params);
  Matrix p = params.layers.front();
  for (std::size_t l = 1; l < params.depth(); ++l) p = p * params.layers[l];
  return p.col(0);
}

double deep_margin(const DeepParams& params, const Dataset& d) {
  check_dataset(params, d);
  return (d.signed_points() * deep_product(params)).minCoeff();
}

LayerMatrices layer_gradients(const DeepParams& params, const Vector& v) {
  check_chain(params);
  if (v.size() != params.layers.front().rows())
    throw InvalidArgument("direction dimension does not match the first layer");
  return gradients_with(products(params), params.depth(), v);
}

LayerMatrices layer_gradients(const DeepParams& params, const Vector& q, const Dataset& d) {
  check_dataset(params, d);
  if (static_cast<std::size_t>(q.size()) != d.n())
    throw InvalidArgument("weight vector length does not match the sample count");
  return layer_gradients(params, Vector(d.signed_points().transpose() * q));
}

LayerMatrices tangent_project(const DeepParams& params, const LayerMatrices& g) {
  if (g.size() != params.depth()) throw InvalidArgument("tangent_project: layer count mismatch");
  LayerMatrices out(g.size());
  for (std::size_t l = 0; l < g.size(); ++l) {
    const Matrix& w = params.layers[l];
    if (g[l].rows() != w.rows() || g[l].cols() != w.cols())
      throw InvalidArgument("tangent_project: shape mismatch at layer " + std::to_string(l + 1));
    out[l] = g[l] - frobenius_inner(g[l], w) * w;
  }
  return out;
}

double trace_identity_residual(const DeepParams& params, const Dataset& d) {
  check_dataset(params, d);
  const Products prod = products(params);
  const Vector p = deep_product(params);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d.n()); ++i) {
    const Vector s = d.signed_points().row(i).transpose();
    const double f = s.dot(p);
    const LayerMatrices g = gradients_with(prod, params.depth(), s);
    for (std::size_t l = 0; l < params.depth(); ++l)
      worst = std::max(worst, std::abs(frobenius_inner(g[l], params.layers[l]) - f));
  }
  return worst;
}

DeepSlopeCheck deep_subgradient_check(const DeepParams& params, const Dataset& d, double eps,
                                      const MarginSolution& sol, double slack) {
  check_dataset(params, d);
  const Products prod = products(params);
  const Vector p = deep_product(params);
  const Vector u = d.signed_points() * p;
  const double gamma = u.minCoeff();

  std::size_t dim = 0;
  for (const auto& w : params.layers) dim += static_cast<std::size_t>(w.size());

  // Stack the projected layer gradients of each active f_i into one vector;
  // the squared slope is then a min-norm point over those vectors.
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (u(i) <= gamma + eps) active.push_back(i);
  Matrix stacked(static_cast<Eigen::Index>(active.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t a = 0; a < active.size(); ++a) {
    const Vector s = d.signed_points().row(active[a]).transpose();
    const LayerMatrices g = tangent_project(params, gradients_with(prod, params.depth(), s));
    Eigen::Index offset = 0;
    for (const auto& gl : g) {
      stacked.row(static_cast<Eigen::Index>(a)).segment(offset, gl.size()) =
          Eigen::Map<const Eigen::RowVectorXd>(gl.data(), gl.size());
      offset += gl.size();
    }
  }
  MinNormOptions mn;
  mn.tol = 1e-12;
  const double slope = min_norm_point(stacked, mn).value;

  DeepSlopeCheck out;
  out.lhs = slope * slope;
  out.rhs = static_cast<double>(params.depth()) * sol.gamma_opt * (sol.gamma_opt - gamma);
  out.applicable = gamma >= 0.0;
  out.holds = out.lhs >= out.rhs - slack;
  return out;
}

Trajectory riemannian_ascent(const Dataset& d, const SmoothMarginParams& p,
                             const DeepAscentOptions& options, const MarginSolution& sol) {
  p.validate();
  options.arch.validate();
  if (options.arch.widths.front() != d.m())
    throw InvalidArgument("architecture input width does not match the dataset dimension");
  if (options.steps < 1) throw InvalidArgument("deep ascent: need at least one step");
  if (!(options.eta > 0.0 && std::isfinite(options.eta)))
    throw InvalidArgument("deep ascent: eta must be positive");

  constexpr double kDegenerate = 1e-12;
  constexpr std::size_t kMaxRestarts = 100;

  std::set<std::size_t> record_steps;
  for (std::size_t k : options.record_at.empty() ? geometric_iterations(options.steps)
                                                 : options.record_at)
    if (k >= 1 && k <= options.steps) record_steps.insert(k);

  Trajectory traj;
  traj.meta.dataset_id = dataset_id(d);
  traj.meta.kind = RunKind::deep;
  traj.meta.schedule = Schedule::constant(options.eta);
  traj.meta.schedule.kind = RunKind::deep;
  traj.meta.beta = p.beta;
  traj.meta.seed = options.seed;
  traj.meta.gamma_opt = sol.gamma_opt;
  traj.meta.details["widths"] = options.arch.widths;
  traj.meta.details["steps"] = options.steps;
  traj.extra_columns = {"bias_normalized", "riemannian_grad_norm", "product_bound"};

  std::size_t restarts = 0;
  auto fresh = [&] {
    while (true) {
      DeepParams w = random_params(options.arch, options.seed + restarts);
      if (deep_product(w).norm() >= kDegenerate) return w;
      if (++restarts > kMaxRestarts) throw NumericalError("deep ascent: degenerate products");
    }
  };

  DeepParams params = fresh();
  double value = smooth_margin_from_margins(d.signed_points() * deep_product(params), p.beta);
  for (std::size_t k = 1; k <= options.steps; ++k) {
    const Vector prod = deep_product(params);
    const Vector q = boltzmann_from_margins(d.signed_points() * prod, p.beta);
    const LayerMatrices tangent = tangent_project(params, layer_gradients(params, q, d));
    double tangent_sq = 0.0;
    for (std::size_t l = 0; l < params.depth(); ++l) {
      params.layers[l] += options.eta * tangent[l];
      tangent_sq += tangent[l].squaredNorm();
    }
    retract(params);

    Vector next_prod = deep_product(params);
    if (!next_prod.allFinite())
      throw NumericalError("deep ascent: non-finite state at step " + std::to_string(k));
    if (next_prod.norm() < kDegenerate) {
      if (++restarts > kMaxRestarts) throw NumericalError("deep ascent: degenerate products");
      params = fresh();
      next_prod = deep_product(params);
    }

    const Vector u = d.signed_points() * next_prod;
    const double next_value = smooth_margin_from_margins(u, p.beta);
    if (next_value < value - 1e-9) ++traj.meta.ascent_violations;
    value = next_value;

    if (options.observer) options.observer(k, params);

    if (record_steps.count(k)) {
      const Vector weights = boltzmann_from_margins(u, p.beta);
      TrajectoryRecord r;
      r.t = static_cast<double>(k);
      r.norm_w = next_prod.norm();
      r.margin = u.minCoeff();
      r.smooth_margin = next_value;
      r.grad_norm = (d.signed_points().transpose() * weights).norm();
      r.bias = (next_prod - sol.w_opt).norm();
      r.deficit = sol.gamma_opt - r.margin;
      r.extra = {(next_prod / next_prod.norm() - sol.w_opt).norm(), std::sqrt(tangent_sq),
                 interlace_upper_bound(r.deficit, sol.gamma_opt)};
      traj.records.push_back(std::move(r));
    }
  }
  traj.meta.restarts = restarts;
  traj.final_iterate = deep_product(params);
  return traj;
}

}  // namespace mmlab
