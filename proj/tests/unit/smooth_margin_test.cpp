#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mmlab/dataset.hpp"
#include "mmlab/margin.hpp"
#include "mmlab/min_norm_point.hpp"
#include "mmlab/smooth_margin.hpp"
#include "../support/oracles.hpp"

using namespace mmlab;

namespace {

Vector vec2(double a, double b) { return (Vector(2) << a, b).finished(); }
const SmoothMarginParams kBeta1{1.0};

}  // namespace

TEST(Boltzmann, UniformAtOrigin) {
  const Dataset d = generate_separable(7, 3, 0.1, 1);
  const Vector q = boltzmann_weights(Vector::Zero(3), d, kBeta1);
  for (Eigen::Index i = 0; i < q.size(); ++i) EXPECT_DOUBLE_EQ(q(i), 1.0 / 7.0);
}

TEST(Boltzmann, SoftmaxOfNegativeMargins) {
  const Vector q = boltzmann_weights(vec2(1, 0), canonical::d2(), kBeta1);
  const double e = std::exp(-1.0);
  EXPECT_NEAR(q(0), e / (1 + e), 1e-15);
  EXPECT_NEAR(q(1), 1 / (1 + e), 1e-15);
  EXPECT_NEAR(q(0), 0.26894142, 1e-8);
  EXPECT_NEAR(q(1), 0.73105858, 1e-8);
}

TEST(Boltzmann, LargeIterateDoesNotOverflow) {
  const Vector q = boltzmann_weights(vec2(1000, 0), canonical::d2(), kBeta1);
  EXPECT_TRUE(q.allFinite());
  EXPECT_NEAR(q(0), 0.0, 1e-300);
  EXPECT_DOUBLE_EQ(q(1), 1.0);
  EXPECT_TRUE(std::isfinite(smooth_margin_value(vec2(1000, 0), canonical::d2(), kBeta1)));
  EXPECT_TRUE(std::isfinite(smooth_margin_value(vec2(-1e6, 0), canonical::d2(), kBeta1)));
}

TEST(SmoothMargin, Examples) {
  const Dataset d2 = canonical::d2();
  EXPECT_DOUBLE_EQ(smooth_margin_value(Vector::Zero(2), d2, kBeta1), 0.0);
  const Vector w_opt = optimal_margin(d2).w_opt;
  EXPECT_NEAR(smooth_margin_value(w_opt, d2, kBeta1), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(smooth_margin_value(vec2(1, 0), d2, kBeta1), -std::log((std::exp(-1.0) + 1) / 2), 1e-15);
  EXPECT_NEAR(smooth_margin_value(vec2(1, 0), d2, kBeta1), 0.37988549, 1e-8);
}

TEST(SmoothMargin, MatchesNaiveDefinition) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> scale(0.0, 5.0), beta(0.2, 4.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = generate_separable(9, 3, 0.1, seed);
    for (int i = 0; i < 10; ++i) {
      const Vector w = oracle::random_unit(rng, 3) * scale(rng);
      const double b = beta(rng);
      EXPECT_NEAR(smooth_margin_value(w, d, {b}),
                  oracle::naive_smooth_margin(d.signed_points(), w, b), 1e-12);
    }
  }
}

TEST(SmoothGrad, Examples) {
  const Dataset d2 = canonical::d2();
  const Vector g0 = smooth_margin_grad(Vector::Zero(2), d2, kBeta1);
  EXPECT_NEAR((g0 - vec2(0.5, 0.5)).norm(), 0.0, 1e-15);
  const Vector g = smooth_margin_grad(vec2(1, 0), d2, kBeta1);
  EXPECT_NEAR(g(0), 0.26894142, 1e-8);
  EXPECT_NEAR(g(1), 0.73105858, 1e-8);
  const double e = std::exp(-1.0);
  EXPECT_NEAR(g.norm(), std::hypot(e, 1.0) / (1 + e), 1e-15);
}

TEST(SmoothGrad, MatchesCentralDifferences) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> scale(0.0, 3.0);
  for (const Dataset& d : {canonical::d1(), canonical::d2(), canonical::d3(),
                           generate_separable(20, 5, 0.1, 4)}) {
    const auto m = static_cast<Eigen::Index>(d.m());
    for (int i = 0; i < 20; ++i) {
      const Vector w = oracle::random_unit(rng, m) * scale(rng);
      const Vector fd = oracle::central_difference(
          [&](const Vector& x) { return smooth_margin_value(x, d, kBeta1); }, w);
      const Vector g = smooth_margin_grad(w, d, kBeta1);
      EXPECT_LE((g - fd).norm(), 1e-6 * std::max(1.0, g.norm()));
    }
  }
}

TEST(SmoothGrad, NormBoundsHoldEverywhere) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> scale(0.0, 100.0), beta(0.1, 10.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = generate_separable(15, 4, 0.1, 30 + seed);
    const double gamma = optimal_margin(d).gamma_opt;
    for (int i = 0; i < 100; ++i) {
      const Vector w = oracle::random_unit(rng, 4) * (i % 10 == 0 ? 100.0 : scale(rng));
      const double n = smooth_margin_grad(w, d, {beta(rng)}).norm();
      EXPECT_GE(n, gamma - 1e-12);
      EXPECT_LE(n, 1.0 + 1e-12);
    }
  }
}

TEST(SmoothGrad, LiesInConvexHullOfSignedPoints) {
  std::mt19937_64 rng(31);
  const Dataset d = generate_separable(6, 3, 0.1, 8);
  for (int i = 0; i < 20; ++i) {
    const Vector w = oracle::random_unit(rng, 3) * 4.0;
    const Vector g = smooth_margin_grad(w, d, kBeta1);
    // g is in the hull iff the hull of (s_i - g) contains the origin.
    const Matrix shifted = d.signed_points().rowwise() - g.transpose();
    EXPECT_LE(min_norm_point(shifted, {1e-14}).value, 1e-6);
  }
}

TEST(EmpiricalRisk, Examples) {
  EXPECT_DOUBLE_EQ(empirical_risk(Vector::Zero(2), canonical::d2(), kBeta1), 1.0);
  EXPECT_NEAR(empirical_risk(vec2(1, 0), canonical::d1(), kBeta1), std::exp(-1.0), 1e-16);
  EXPECT_NEAR(empirical_risk(vec2(1, 0), canonical::d2(), kBeta1), 0.68393972, 1e-8);
}

TEST(EmpiricalRisk, LogSpaceRelation) {
  std::mt19937_64 rng(41);
  const Dataset d = generate_separable(10, 3, 0.1, 2);
  for (int i = 0; i < 30; ++i) {
    const Vector w = oracle::random_unit(rng, 3) * 10.0;
    EXPECT_NEAR(std::log(empirical_risk(w, d, kBeta1)), -smooth_margin_value(w, d, kBeta1), 1e-12);
    EXPECT_NEAR(log_empirical_risk(w, d, kBeta1), -smooth_margin_value(w, d, kBeta1), 1e-12);
  }
}

TEST(EmpiricalRisk, OverflowIsReported) {
  EXPECT_THROW(empirical_risk(vec2(-1000, 0), canonical::d1(), kBeta1), NumericalError);
  EXPECT_NEAR(log_empirical_risk(vec2(-1000, 0), canonical::d1(), kBeta1), 1000.0, 1e-9);
}

TEST(SmoothMargin, SandwichAroundHardMargin) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> scale(0.0, 50.0), beta(0.1, 5.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = generate_separable(4 + 5 * seed, 3, 0.1, 70 + seed);
    const double log_n = std::log(static_cast<double>(d.n()));
    for (int i = 0; i < 10; ++i) {
      const Vector w = oracle::random_unit(rng, 3) * scale(rng);
      const double b = beta(rng);
      const double r = smooth_margin_value(w, d, {b});
      const double g = hard_margin(w, d);
      EXPECT_GE(r, g - 1e-12);
      EXPECT_LE(r, g + log_n / b + 1e-12);
    }
  }
  for (const Dataset& d : {canonical::d1(), canonical::d2(), canonical::d3()}) {
    const Vector w = vec2(0.3, -0.7);
    EXPECT_GE(smooth_margin_value(w, d, kBeta1), hard_margin(w, d) - 1e-12);
  }
}

TEST(SmoothMargin, LargeBetaApproachesHardMargin) {
  std::mt19937_64 rng(61);
  const Dataset d = generate_separable(12, 3, 0.1, 5);
  for (int i = 0; i < 20; ++i) {
    const Vector w = oracle::random_unit(rng, 3);
    EXPECT_LE(std::abs(smooth_margin_value(w, d, {1000.0}) - hard_margin(w, d)),
              std::log(12.0) / 1000.0 + 1e-12);
  }
}

TEST(SmoothMarginParams, RejectsBadBeta) {
  EXPECT_THROW(SmoothMarginParams{0.0}.validate(), InvalidArgument);
  EXPECT_THROW(SmoothMarginParams{-1.0}.validate(), InvalidArgument);
  EXPECT_THROW(SmoothMarginParams{std::nan("")}.validate(), InvalidArgument);
}

TEST(SmoothEval, AgreesWithSeparateCalls) {
  const Dataset d = generate_separable(10, 4, 0.1, 9);
  const Vector w = Vector::LinSpaced(4, -1.0, 2.0);
  const SmoothEval e = smooth_margin_eval(w, d, {2.0});
  EXPECT_DOUBLE_EQ(e.value, smooth_margin_value(w, d, {2.0}));
  EXPECT_NEAR((e.grad - smooth_margin_grad(w, d, {2.0})).norm(), 0.0, 1e-15);
  EXPECT_NEAR((e.weights - boltzmann_weights(w, d, {2.0})).norm(), 0.0, 1e-15);
}
