#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mmlab/dataset.hpp"
#include "mmlab/margin.hpp"
#include "mmlab/min_norm_point.hpp"
#include "../support/oracles.hpp"

using namespace mmlab;

namespace {

const double kRoot2 = std::sqrt(2.0);
const double kInvRoot2 = 1.0 / std::sqrt(2.0);

Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }

Matrix rows2(std::initializer_list<std::pair<double, double>> pts) {
  Matrix m(static_cast<Eigen::Index>(pts.size()), 2);
  Eigen::Index i = 0;
  for (auto [a, b] : pts) {
    m(i, 0) = a;
    m(i, 1) = b;
    ++i;
  }
  return m;
}

}  // namespace

TEST(MinNormPoint, SingletonHull) {
  const auto r = min_norm_point(rows2({{1, 0}}));
  ASSERT_EQ(r.q.size(), 1);
  EXPECT_DOUBLE_EQ(r.q(0), 1.0);
  EXPECT_DOUBLE_EQ(r.value, 1.0);
}

TEST(MinNormPoint, OrthonormalPair) {
  const auto r = min_norm_point(rows2({{1, 0}, {0, 1}}));
  EXPECT_NEAR(r.q(0), 0.5, 1e-12);
  EXPECT_NEAR(r.q(1), 0.5, 1e-12);
  EXPECT_NEAR(r.value, oracle::segment_min_norm(vec2(1, 0), vec2(0, 1)), 1e-12);
  EXPECT_NEAR(r.value, 0.70710678, 1e-8);
}

TEST(MinNormPoint, SymmetricPairMidpoint) {
  const auto r = min_norm_point(rows2({{0.6, 0.8}, {-0.6, 0.8}}));
  EXPECT_NEAR(r.q(0), 0.5, 1e-12);
  EXPECT_NEAR(r.value, 0.8, 1e-12);
}

TEST(MinNormPoint, GapCertificateIsReported) {
  const auto r = min_norm_point(rows2({{1, 0}, {0, 1}, {0.3, 0.3}}));
  EXPECT_LE(r.gap, 1e-10);
  EXPECT_GE(r.gap, 0.0);
  EXPECT_NEAR(r.value, std::sqrt(0.18), 1e-12);
  EXPECT_NEAR(r.q(2), 1.0, 1e-12);
}

TEST(MinNormPoint, GramFormAgreesWithPointForm) {
  const Matrix p = rows2({{0.9, 0.1}, {0.2, 0.7}, {-0.1, 0.5}});
  const auto a = min_norm_point(p);
  const auto b = min_norm_gram(p * p.transpose());
  EXPECT_NEAR(a.value, b.value, 1e-12);
  EXPECT_NEAR((a.q - b.q).norm(), 0.0, 1e-9);
}

TEST(MinNormPoint, RejectsEmptyInputAndBadTolerance) {
  EXPECT_THROW(min_norm_point(Matrix(0, 2)), InvalidArgument);
  MinNormOptions o;
  o.tol = 0.0;
  EXPECT_THROW(min_norm_point(rows2({{1, 0}}), o), InvalidArgument);
}

TEST(MinNormPoint, IterationCapRaisesSolverError) {
  std::mt19937_64 rng(3);
  Matrix p(40, 5);
  for (Eigen::Index i = 0; i < p.rows(); ++i) p.row(i) = oracle::random_unit(rng, 5).transpose();
  p.col(0).array() += 0.3;
  MinNormOptions o;
  o.max_iterations = 1;
  o.tol = 1e-14;
  o.refine_face = false;
  EXPECT_THROW(min_norm_point(p, o), SolverError);
}

TEST(MinNormPoint, MatchesGridOracleOnRandomSmallHulls) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> count(1, 3), dim(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = count(rng), m = dim(rng);
    Matrix p(k, m);
    for (int i = 0; i < k; ++i) p.row(i) = oracle::random_unit(rng, m).transpose() * 0.9;
    EXPECT_NEAR(min_norm_point(p).value, oracle::grid_min_norm(p), 1e-3) << "trial " << trial;
  }
}

TEST(MinNormPoint, LowestIndexWinsTies) {
  const auto r = min_norm_point(rows2({{1, 0}, {1, 0}}));
  EXPECT_DOUBLE_EQ(r.value, 1.0);
  EXPECT_DOUBLE_EQ(r.q(0), 1.0);
}

TEST(HardMargin, Examples) {
  EXPECT_DOUBLE_EQ(hard_margin(vec2(1, 0), canonical::d1()), 1.0);
  EXPECT_DOUBLE_EQ(hard_margin(vec2(1, 0), canonical::d2()), 0.0);
  EXPECT_NEAR(hard_margin(vec2(0, 1), canonical::d3()), 0.8, 1e-15);
}

TEST(HardMargin, IsPositivelyHomogeneous) {
  std::mt19937_64 rng(5);
  const Dataset d = generate_separable(30, 4, 0.1, 9);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int i = 0; i < 50; ++i) {
    const Vector w = oracle::random_unit(rng, 4);
    const double c = scale(rng);
    EXPECT_NEAR(hard_margin(c * w, d), c * hard_margin(w, d), 1e-12 * std::max(1.0, c));
  }
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize(vec2(2, 0)), vec2(1, 0));
  EXPECT_NEAR((normalize(vec2(1, 1)) - vec2(0.70710678, 0.70710678)).norm(), 0.0, 1e-8);
  EXPECT_THROW(normalize(vec2(0, 0)), InvalidArgument);
  EXPECT_THROW(normalize(vec2(std::nan(""), 1)), InvalidArgument);
}

TEST(OptimalMargin, CanonicalDatasets) {
  const auto s1 = optimal_margin(canonical::d1());
  EXPECT_NEAR(s1.gamma_opt, 1.0, 1e-12);
  EXPECT_NEAR((s1.w_opt - vec2(1, 0)).norm(), 0.0, 1e-12);

  const auto s2 = optimal_margin(canonical::d2());
  EXPECT_NEAR(s2.gamma_opt, kInvRoot2, 1e-12);
  EXPECT_NEAR((s2.w_opt - vec2(kInvRoot2, kInvRoot2)).norm(), 0.0, 1e-12);
  EXPECT_EQ(s2.support, (std::vector<std::size_t>{0, 1}));

  const auto s3 = optimal_margin(canonical::d3());
  EXPECT_NEAR(s3.gamma_opt, 0.8, 1e-12);
  EXPECT_NEAR((s3.w_opt - vec2(0, 1)).norm(), 0.0, 1e-12);
}

TEST(OptimalMargin, SolutionInvariantsOnRandomData) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset d = generate_separable(10 + 3 * seed, 2 + seed % 5, 0.05, seed);
    const auto s = optimal_margin(d);
    EXPECT_NEAR(s.w_opt.norm(), 1.0, 1e-12);
    EXPECT_NEAR(s.q_star.sum(), 1.0, 1e-12);
    EXPECT_GE(s.q_star.minCoeff(), 0.0);
    const Vector v = d.signed_points().transpose() * s.q_star;
    EXPECT_NEAR((s.w_opt - v / v.norm()).norm(), 0.0, 1e-12);
    EXPECT_NEAR(s.gamma_opt, v.norm(), 1e-12 + s.dual_gap);
    EXPECT_GE(hard_margin(s.w_opt, d), s.gamma_opt - 2 * s.dual_gap - 1e-15);
    EXPECT_LE(s.dual_gap, 1e-9);
  }
}

TEST(OptimalMargin, StartVertexDoesNotChangeDirection) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = generate_separable(15, 3, 0.1, 100 + seed);
    SolveOptions a, b;
    b.start_vertex = d.n() - 1;
    EXPECT_NEAR((optimal_margin(d, a).w_opt - optimal_margin(d, b).w_opt).norm(), 0.0, 1e-6);
  }
}

TEST(OptimalMargin, NonSeparableDataIsAnError) {
  const Dataset d(rows2({{1, 0}, {1, 0}}), vec2(1, -1));
  EXPECT_THROW(optimal_margin(d), NonSeparableError);
}

TEST(SupportSet, Examples) {
  EXPECT_EQ(support_set(vec2(1, 0), canonical::d2(), 1e-9), (std::vector<std::size_t>{1}));
  EXPECT_EQ(support_set(vec2(kInvRoot2, kInvRoot2), canonical::d2(), 1e-9),
            (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(support_set(vec2(0, 1), canonical::d1(), 1e-9), (std::vector<std::size_t>{0}));
}

TEST(MinNormSubgradient, Examples) {
  EXPECT_NEAR(min_norm_subgradient(vec2(1, 0), canonical::d2()), 1.0, 1e-12);
  const Vector w_opt = optimal_margin(canonical::d2()).w_opt;
  EXPECT_NEAR(min_norm_subgradient(w_opt, canonical::d2()), 0.0, 1e-9);
  EXPECT_NEAR(min_norm_subgradient(vec2(0, 1), canonical::d1()), 1.0, 1e-12);
}

TEST(MinNormSubgradient, RequiresUnitVector) {
  EXPECT_THROW(min_norm_subgradient(vec2(2, 0), canonical::d2()), InvalidArgument);
}

TEST(KlCheck, Examples) {
  const auto s2 = optimal_margin(canonical::d2());
  const auto a = kl_check(vec2(1, 0), canonical::d2(), s2);
  EXPECT_NEAR(a.lhs, 1.0, 1e-12);
  EXPECT_NEAR(a.rhs, 0.5, 1e-12);
  EXPECT_TRUE(a.applicable);
  EXPECT_TRUE(a.holds);

  const auto b = kl_check(s2.w_opt, canonical::d2(), s2);
  EXPECT_NEAR(b.lhs, 0.0, 1e-12);
  EXPECT_NEAR(b.rhs, 0.0, 1e-12);
  EXPECT_TRUE(b.holds);

  const auto s1 = optimal_margin(canonical::d1());
  const auto c = kl_check(vec2(0, 1), canonical::d1(), s1);
  EXPECT_NEAR(c.lhs, 1.0, 1e-12);
  EXPECT_NEAR(c.rhs, 1.0, 1e-12);
  EXPECT_TRUE(c.holds);
}

TEST(KlCheck, NegativeMarginIsNotApplicable) {
  const auto s = optimal_margin(canonical::d2());
  const auto r = kl_check(vec2(-1, 0), canonical::d2(), s);
  EXPECT_FALSE(r.applicable);
}

TEST(KlCheck, HoldsAtRandomDirections) {
  std::mt19937_64 rng(77);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = generate_separable(8, 3, 0.15, seed);
    const auto s = optimal_margin(d);
    int applicable = 0;
    for (int i = 0; i < 200; ++i) {
      const auto r = kl_check(oracle::random_unit(rng, 3), d, s);
      if (!r.applicable) continue;
      ++applicable;
      EXPECT_TRUE(r.holds) << r.lhs << " < " << r.rhs;
    }
    EXPECT_GT(applicable, 0);
  }
}

TEST(Interlace, Examples) {
  const auto s1 = optimal_margin(canonical::d1());
  const auto a = interlace_check(vec2(0, 1), canonical::d1(), s1);
  EXPECT_NEAR(a.lower, 1.0, 1e-12);
  EXPECT_NEAR(a.bias, kRoot2, 1e-12);
  EXPECT_NEAR(a.upper, 2.0, 1e-12);
  EXPECT_TRUE(a.holds);

  const auto s2 = optimal_margin(canonical::d2());
  const auto b = interlace_check(vec2(1, 0), canonical::d2(), s2);
  EXPECT_NEAR(b.lower, 0.70710678, 1e-8);
  EXPECT_NEAR(b.bias, std::hypot(1 - kInvRoot2, kInvRoot2), 1e-12);
  EXPECT_NEAR(b.bias, 0.76536686, 1e-8);
  EXPECT_NEAR(b.upper, 2.0, 1e-12);
  EXPECT_TRUE(b.holds);

  const auto s3 = optimal_margin(canonical::d3());
  const auto c = interlace_check(s3.w_opt, canonical::d3(), s3);
  EXPECT_NEAR(c.lower, 0.0, 1e-12);
  EXPECT_NEAR(c.bias, 0.0, 1e-12);
  EXPECT_NEAR(c.upper, 0.0, 1e-5);
  EXPECT_TRUE(c.holds);
}

TEST(Interlace, OppositeDirectionOnlyChecksLowerBound) {
  const auto s1 = optimal_margin(canonical::d1());
  const auto r = interlace_check(vec2(-1, 0), canonical::d1(), s1);
  EXPECT_FALSE(r.upper_applicable);
  EXPECT_NEAR(r.bias, 2.0, 1e-12);
  EXPECT_TRUE(r.holds);
}

TEST(Interlace, HoldsAtRandomDirections) {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = generate_separable(12, 4, 0.1, 50 + seed);
    const auto s = optimal_margin(d);
    for (int i = 0; i < 200; ++i) EXPECT_TRUE(interlace_check(oracle::random_unit(rng, 4), d, s).holds);
  }
}

TEST(Duality, SandwichAndWeakDuality) {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset d = generate_separable(3 + seed % 7, 2 + seed % 3, 0.1, 300 + seed);
    const auto s = optimal_margin(d);
    for (int i = 0; i < 10; ++i) {
      const Vector q = oracle::random_simplex_mixed(rng, static_cast<Eigen::Index>(d.n()));
      const double v = (d.signed_points().transpose() * q).norm();
      EXPECT_GE(v, s.gamma_opt - 1e-8);
      EXPECT_LE(v, 1.0 + 1e-12);
      const Vector w = oracle::random_unit(rng, static_cast<Eigen::Index>(d.m()));
      EXPECT_LE(hard_margin(w, d), v + 1e-12);
    }
  }
}
