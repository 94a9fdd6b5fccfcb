#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "mmlab/dataset.hpp"
#include "mmlab/margin.hpp"

using namespace mmlab;

namespace {

Dataset from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(rows.begin()->size() - 1);
  Matrix x(n, m);
  Vector y(n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    auto it = row.begin();
    y(i) = *it++;
    for (Eigen::Index j = 0; j < m; ++j) x(i, j) = *it++;
    ++i;
  }
  return Dataset(x, y);
}

}  // namespace

TEST(Dataset, SignedPointsMultiplyRowsByLabels) {
  const Dataset d = canonical::d3();
  EXPECT_DOUBLE_EQ(d.signed_points()(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(d.signed_points()(0, 1), 0.8);
  EXPECT_DOUBLE_EQ(d.signed_points()(1, 0), -0.6);
  EXPECT_DOUBLE_EQ(d.signed_points()(1, 1), 0.8);
}

TEST(Dataset, RejectsShapeMismatch) {
  EXPECT_THROW(Dataset(Matrix::Zero(2, 2), Vector::Ones(3)), InvalidArgument);
  EXPECT_THROW(Dataset(Matrix::Zero(0, 2), Vector::Ones(0)), InvalidArgument);
}

TEST(Validate, CanonicalDatasetsAreValid) {
  EXPECT_TRUE(validate(canonical::d1()).ok());
  EXPECT_TRUE(validate(canonical::d2()).ok());
  EXPECT_TRUE(validate(canonical::d3()).ok());
}

TEST(Validate, ReportsLongFeatureAtItsIndex) {
  const Dataset d = from_rows({{1, 0.5, 0.0}, {1, 1.5, 0.0}});
  const auto v = validate(d);
  ASSERT_EQ(v.violations.size(), 1u);
  EXPECT_EQ(v.violations[0].kind, Violation::Kind::feature_norm);
  EXPECT_EQ(v.violations[0].index, 1u);
  EXPECT_DOUBLE_EQ(v.violations[0].magnitude, 1.5);
}

TEST(Validate, ReportsZeroLabel) {
  const auto v = validate(from_rows({{0, 0.5, 0.0}}));
  ASSERT_EQ(v.violations.size(), 1u);
  EXPECT_EQ(v.violations[0].kind, Violation::Kind::label);
  EXPECT_EQ(v.violations[0].magnitude, 0.0);
}

TEST(Validate, ReportsNonFiniteEntries) {
  const auto v = validate(from_rows({{1, std::nan(""), 0.0}, {1, 0.1, 0.1}}));
  ASSERT_EQ(v.violations.size(), 1u);
  EXPECT_EQ(v.violations[0].kind, Violation::Kind::non_finite);
}

TEST(Validate, ReportsEveryViolation) {
  const auto v = validate(from_rows({{2, 2.0, 0.0}, {1, 0.0, 0.0}, {-1, 0.0, 3.0}}));
  EXPECT_EQ(v.violations.size(), 3u);
}

TEST(Validate, NormToleranceIsHonoured) {
  EXPECT_TRUE(validate(from_rows({{1, 1.0 + 5e-13, 0.0}})).ok());
  EXPECT_FALSE(validate(from_rows({{1, 1.0 + 5e-12, 0.0}})).ok());
}

TEST(Generate, SmallDatasetMeetsTargetMargin) {
  const Dataset d = generate_separable(2, 2, 0.5, 7);
  EXPECT_TRUE(validate(d).ok());
  EXPECT_GE(optimal_margin(d).gamma_opt, 0.5 - 1e-9);
}

TEST(Generate, SinglePointClearsTheBand) {
  const Dataset d = generate_separable(1, 2, 0.9, 0);
  EXPECT_EQ(d.n(), 1u);
  EXPECT_TRUE(validate(d).ok());
  EXPECT_GE(optimal_margin(d).gamma_opt, 0.9 - 1e-9);
}

TEST(Generate, LargerDatasetHasMarginInRange) {
  const Dataset d = generate_separable(50, 10, 0.2, 1);
  EXPECT_TRUE(validate(d).ok());
  const double g = optimal_margin(d).gamma_opt;
  EXPECT_GE(g, 0.2 - 1e-9);
  EXPECT_LE(g, 1.0 + 1e-12);
}

TEST(Generate, IsDeterministicGivenSeed) {
  EXPECT_EQ(generate_separable(20, 4, 0.3, 11), generate_separable(20, 4, 0.3, 11));
  EXPECT_FALSE(generate_separable(20, 4, 0.3, 11) == generate_separable(20, 4, 0.3, 12));
}

TEST(Generate, PropertyOverSeeds) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const double target = 0.05 + 0.02 * static_cast<double>(seed % 10);
    const Dataset d = generate_separable(5 + seed, 2 + seed % 6, target, seed);
    ASSERT_TRUE(validate(d).ok()) << "seed " << seed;
    EXPECT_GE(optimal_margin(d).gamma_opt, target - 1e-9) << "seed " << seed;
  }
}

TEST(Generate, RejectsTargetsOutsideUnitInterval) {
  EXPECT_THROW(generate_separable(5, 2, 1.5, 0), InvalidArgument);
  EXPECT_THROW(generate_separable(5, 2, 0.0, 0), InvalidArgument);
  EXPECT_THROW(generate_separable(5, 2, -0.1, 0), InvalidArgument);
}

TEST(Generate, ExhaustedAttemptsThrow) {
  EXPECT_THROW(generate_separable(10, 50, 0.99, 0, 1000), SolverError);
}

TEST(Csv, RoundTripIsBitExact) {
  for (const Dataset& d : {canonical::d1(), canonical::d2(), canonical::d3(),
                           generate_separable(40, 7, 0.1, 3)}) {
    std::stringstream s;
    write_csv(d, s);
    EXPECT_EQ(read_csv(s), d);
  }
}

TEST(Csv, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "mmlab_dataset_roundtrip.csv";
  const Dataset d = generate_separable(9, 3, 0.2, 5);
  store_csv(d, path);
  EXPECT_EQ(load_csv(path), d);
  std::filesystem::remove(path);
}

TEST(Csv, ParsesHandWrittenD1) {
  std::istringstream in("y,x1,x2\n1,1.0,0.0\n");
  EXPECT_EQ(read_csv(in), canonical::d1());
}

TEST(Csv, AcceptsCrlfAndNegativeLabels) {
  std::istringstream in("y,x1,x2\r\n1,0.6,0.8\r\n-1,0.6,-0.8\r\n");
  EXPECT_EQ(read_csv(in), canonical::d3());
}

TEST(Csv, LabelOutsideDomainIsALineError) {
  std::istringstream in("y,x1,x2\n1,0.5,0.5\n2,0.1,0.2\n");
  try {
    read_csv(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Csv, RaggedRowIsALineError) {
  std::istringstream in("y,x1,x2\n1,0.5\n");
  try {
    read_csv(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Csv, BadHeaderAndGarbageAreErrors) {
  std::istringstream bad_header("label,a,b\n1,0,0\n");
  EXPECT_THROW(read_csv(bad_header), ParseError);
  std::istringstream garbage("y,x1\n1,abc\n");
  EXPECT_THROW(read_csv(garbage), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty), ParseError);
}

TEST(Csv, MissingFileIsAnError) {
  EXPECT_THROW(load_csv("/nonexistent/mmlab.csv"), ParseError);
}

TEST(DatasetId, DependsOnContentOnly) {
  EXPECT_EQ(dataset_id(canonical::d2()), dataset_id(canonical::d2()));
  EXPECT_NE(dataset_id(canonical::d2()), dataset_id(canonical::d3()));
  EXPECT_EQ(dataset_id(canonical::d2()).size(), 16u);
}

TEST(Dataset, RadiusIsLargestFeatureNorm) {
  EXPECT_DOUBLE_EQ(canonical::d3().radius(), 1.0);
  EXPECT_DOUBLE_EQ(from_rows({{1, 0.3, 0.4}, {-1, 0.0, 0.1}}).radius(), 0.5);
}
