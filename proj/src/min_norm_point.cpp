#include "mmlab/min_norm_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mmlab {
namespace {

// Gram access for the rows of a point matrix; never forms the k x k matrix.
class PointOracle {
 public:
  explicit PointOracle(const Matrix& points)
      : points_(points), diag_(points.rowwise().squaredNorm()) {}

  Eigen::Index size() const { return points_.rows(); }
  double diag(Eigen::Index i) const { return diag_(i); }
  double max_diag() const { return diag_.maxCoeff(); }
  void column(Eigen::Index j, Vector& out) const {
    out.noalias() = points_ * points_.row(j).transpose();
  }
  Vector times(const Vector& q) const { return points_ * (points_.transpose() * q); }
  Matrix sub_gram(const std::vector<Eigen::Index>& idx) const {
    Matrix rows(static_cast<Eigen::Index>(idx.size()), points_.cols());
    for (std::size_t a = 0; a < idx.size(); ++a)
      rows.row(static_cast<Eigen::Index>(a)) = points_.row(idx[a]);
    return rows * rows.transpose();
  }

 private:
  const Matrix& points_;
  Vector diag_;
};

class GramOracle {
 public:
  explicit GramOracle(const Matrix& gram) : gram_(gram) {}

  Eigen::Index size() const { return gram_.rows(); }
  double diag(Eigen::Index i) const { return gram_(i, i); }
  double max_diag() const { return gram_.diagonal().maxCoeff(); }
  void column(Eigen::Index j, Vector& out) const { out = gram_.col(j); }
  Vector times(const Vector& q) const { return gram_ * q; }
  Matrix sub_gram(const std::vector<Eigen::Index>& idx) const {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Matrix sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = gram_(idx[a], idx[b]);
    return sub;
  }

 private:
  const Matrix& gram_;
};

Eigen::Index fw_vertex(const Vector& gq) {
  Eigen::Index s = 0;
  for (Eigen::Index i = 1; i < gq.size(); ++i)
    if (gq(i) < gq(s)) s = i;
  return s;
}

Eigen::Index away_vertex(const Vector& q, const Vector& gq) {
  Eigen::Index a = -1;
  for (Eigen::Index i = 0; i < q.size(); ++i)
    if (q(i) > 0.0 && (a < 0 || gq(i) > gq(a))) a = i;
  return a;
}

double fw_gap(const Vector& q, const Vector& gq) {
  return 2.0 * (q.dot(gq) - gq.minCoeff());
}

void renormalize(Vector& q) {
  q = q.cwiseMax(0.0);
  q /= q.sum();
}

// Minimiser of q^T G q on the affine hull of the active face, if it lies in
// the simplex. Returns true and overwrites (q, gq) when it is no worse.
template <class Oracle>
bool refine_on_face(const Oracle& g, Vector& q, Vector& gq) {
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < q.size(); ++i)
    if (q(i) > 0.0) active.push_back(i);
  const auto k = static_cast<Eigen::Index>(active.size());
  if (k < 2) return false;

  Matrix kkt = Matrix::Zero(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = g.sub_gram(active);
  kkt.block(0, k, k, 1).setOnes();
  kkt.block(k, 0, 1, k).setOnes();
  Vector rhs = Vector::Zero(k + 1);
  rhs(k) = 1.0;
  const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  const Vector x = sol.head(k);
  if (!x.allFinite() || x.minCoeff() < -1e-12) return false;

  Vector candidate = Vector::Zero(q.size());
  for (Eigen::Index a = 0; a < k; ++a) candidate(active[static_cast<std::size_t>(a)]) = x(a);
  renormalize(candidate);
  Vector candidate_gq = g.times(candidate);
  if (fw_gap(candidate, candidate_gq) > fw_gap(q, gq)) return false;
  q = std::move(candidate);
  gq = std::move(candidate_gq);
  return true;
}

template <class Oracle>
MinNormResult away_step_frank_wolfe(const Oracle& g, const MinNormOptions& opt) {
  const Eigen::Index k = g.size();
  if (k < 1) throw InvalidArgument("min-norm point: need at least one point");
  if (!(opt.tol > 0.0)) throw InvalidArgument("min-norm point: tolerance must be positive");
  if (opt.start_vertex >= static_cast<std::size_t>(k))
    throw InvalidArgument("min-norm point: start vertex out of range");

  // Gaps below this are rounding noise in q^T G q - (Gq)_s.
  const double floor =
      64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, g.max_diag());
  const double target = std::max(opt.tol, floor);

  const auto start = static_cast<Eigen::Index>(opt.start_vertex);
  Vector q = Vector::Zero(k);
  q(start) = 1.0;
  Vector gq(k);
  g.column(start, gq);
  Vector col(k);

  std::size_t it = 0;
  for (;; ++it) {
    double f = q.dot(gq);
    Eigen::Index s = fw_vertex(gq);
    double gap = 2.0 * (f - gq(s));
    if (gap <= target) {
      gq = g.times(q);
      f = q.dot(gq);
      s = fw_vertex(gq);
      gap = 2.0 * (f - gq(s));
      if (gap <= target) break;
    }
    if (it >= opt.max_iterations)
      throw SolverError("min-norm point: no convergence after " + std::to_string(it) +
                        " iterations (gap " + std::to_string(gap) + ")");

    const Eigen::Index a = away_vertex(q, gq);
    const double away_gap = 2.0 * (gq(a) - f);
    if (gap >= away_gap) {
      const double num = f - gq(s);
      const double den = g.diag(s) - 2.0 * gq(s) + f;
      const double step = den > 0.0 ? std::min(num / den, 1.0) : 1.0;
      g.column(s, col);
      q *= 1.0 - step;
      q(s) += step;
      gq = (1.0 - step) * gq + step * col;
    } else {
      const double qa = q(a);
      const double step_max = qa / (1.0 - qa);
      const double num = gq(a) - f;
      const double den = f - 2.0 * gq(a) + g.diag(a);
      const double step = den > 0.0 ? std::min(num / den, step_max) : step_max;
      g.column(a, col);
      q *= 1.0 + step;
      q(a) -= step;
      gq = (1.0 + step) * gq - step * col;
      if (step >= step_max) q(a) = 0.0;  // drop step
    }
    if ((it + 1) % 512 == 0) {
      renormalize(q);
      gq = g.times(q);
    }
  }

  renormalize(q);
  gq = g.times(q);
  if (opt.refine_face) refine_on_face(g, q, gq);

  MinNormResult result;
  result.gap = std::max(0.0, fw_gap(q, gq));
  result.value = std::sqrt(std::max(0.0, q.dot(gq)));
  result.q = std::move(q);
  result.iterations = it;
  return result;
}

}  // namespace

MinNormResult min_norm_point(const Matrix& points, const MinNormOptions& options) {
  if (points.rows() < 1 || points.cols() < 1)
    throw InvalidArgument("min-norm point: need at least one point of positive dimension");
  return away_step_frank_wolfe(PointOracle(points), options);
}

MinNormResult min_norm_gram(const Matrix& gram, const MinNormOptions& options) {
  if (gram.rows() != gram.cols())
    throw InvalidArgument("min-norm point: Gram matrix must be square");
  return away_step_frank_wolfe(GramOracle(gram), options);
}

}  // namespace mmlab
