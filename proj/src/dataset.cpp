#include "mmlab/dataset.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "text_util.hpp"

namespace mmlab {

Dataset::Dataset(Matrix features, Vector labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() < 1 || features_.cols() < 1)
    throw InvalidArgument("dataset needs n >= 1 samples and m >= 1 features");
  if (labels_.size() != features_.rows())
    throw InvalidArgument("dataset has " + std::to_string(features_.rows()) +
                          " feature rows but " + std::to_string(labels_.size()) +
                          " labels");
  signed_ = labels_.asDiagonal() * features_;
}

double Dataset::radius() const { return features_.rowwise().norm().maxCoeff(); }

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::feature_norm: return "feature_norm";
    case Violation::Kind::label: return "label";
    case Violation::Kind::non_finite: return "non_finite";
  }
  return "unknown";
}

ValidationOutcome validate(const Dataset& d, double norm_tol) {
  ValidationOutcome out;
  for (std::size_t i = 0; i < d.n(); ++i) {
    const auto row = d.features().row(static_cast<Eigen::Index>(i));
    const double y = d.labels()(static_cast<Eigen::Index>(i));
    if (!row.allFinite() || !std::isfinite(y)) {
      out.violations.push_back({Violation::Kind::non_finite, i, row.norm()});
      continue;
    }
    const double norm = row.norm();
    if (norm > 1.0 + norm_tol)
      out.violations.push_back({Violation::Kind::feature_norm, i, norm});
    if (y != 1.0 && y != -1.0)
      out.violations.push_back({Violation::Kind::label, i, y});
  }
  return out;
}

Dataset generate_separable(std::size_t n, std::size_t m, double target_margin,
                           std::uint64_t seed, std::size_t max_attempts) {
  if (n < 1 || m < 1) throw InvalidArgument("generate_separable: need n >= 1 and m >= 1");
  if (!(target_margin > 0.0 && target_margin < 1.0))
    throw InvalidArgument("generate_separable: target margin must lie in (0, 1)");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  auto random_direction = [&] {
    Vector v(static_cast<Eigen::Index>(m));
    double norm = 0.0;
    while (norm == 0.0) {
      for (auto& c : v) c = normal(rng);
      norm = v.norm();
    }
    return Vector(v / norm);
  };

  const Vector w_star = random_direction();
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  Vector y(static_cast<Eigen::Index>(n));

  std::size_t attempts = 0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    while (true) {
      if (attempts++ >= max_attempts)
        throw SolverError("generate_separable: rejection sampling exhausted " +
                          std::to_string(max_attempts) +
                          " attempts; target margin too close to 1 for m = " +
                          std::to_string(m));
      const double radius = std::pow(uniform(rng), 1.0 / static_cast<double>(m));
      Vector p = radius * random_direction();
      if (p.norm() > 1.0) p /= p.norm();
      const double proj = p.dot(w_star);
      if (std::abs(proj) < target_margin) continue;
      x.row(i) = p.transpose();
      y(i) = proj > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  return Dataset(std::move(x), std::move(y));
}

Dataset read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t m = 0;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::strip_cr(line);
    if (text.empty()) continue;
    const auto fields = detail::split_commas(text);
    if (!have_header) {
      if (fields.size() < 2 || fields[0] != "y")
        throw ParseError("expected header \"y,x1,...,xm\"", line_no);
      for (std::size_t j = 1; j < fields.size(); ++j)
        if (fields[j] != "x" + std::to_string(j))
          throw ParseError("header column " + std::to_string(j + 1) + " should be x" +
                               std::to_string(j),
                           line_no);
      m = fields.size() - 1;
      have_header = true;
      continue;
    }
    if (fields.size() != m + 1)
      throw ParseError("ragged row: expected " + std::to_string(m + 1) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    const auto label = detail::parse_double(fields[0]);
    if (!label) throw ParseError("label is not a number", line_no);
    if (*label != 1.0 && *label != -1.0)
      throw ParseError("label " + std::string(fields[0]) + " is outside {+1, -1}", line_no);
    std::vector<double> row(m);
    for (std::size_t j = 0; j < m; ++j) {
      const auto v = detail::parse_double(fields[j + 1]);
      if (!v) throw ParseError("field x" + std::to_string(j + 1) + " is not a number", line_no);
      row[j] = *v;
    }
    labels.push_back(*label);
    rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("empty dataset file", 0);
  if (rows.empty()) throw ParseError("dataset file has a header but no rows", line_no);

  Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m));
  Vector y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y(static_cast<Eigen::Index>(i)) = labels[i];
    for (std::size_t j = 0; j < m; ++j)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return Dataset(std::move(x), std::move(y));
}

void write_csv(const Dataset& d, std::ostream& out) {
  out << "y";
  for (std::size_t j = 1; j <= d.m(); ++j) out << ",x" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d.n()); ++i) {
    out << detail::format_double(d.labels()(i));
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d.m()); ++j)
      out << ',' << detail::format_double(d.features()(i, j));
    out << '\n';
  }
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return read_csv(in);
}

void store_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_csv(d, out);
  if (!out) throw Error("write failed for " + path.string());
}

std::string dataset_id(const Dataset& d) {
  std::ostringstream text;
  write_csv(d, text);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text.str()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << hash;
  return hex.str();
}

namespace canonical {

Dataset d1() {
  Matrix x(1, 2);
  x << 1.0, 0.0;
  return Dataset(x, Vector::Constant(1, 1.0));
}

Dataset d2() {
  Matrix x(2, 2);
  x << 1.0, 0.0,
       0.0, 1.0;
  Vector y(2);
  y << 1.0, 1.0;
  return Dataset(x, y);
}

Dataset d3() {
  Matrix x(2, 2);
  x << 0.6, 0.8,
       0.6, -0.8;
  Vector y(2);
  y << 1.0, -1.0;
  return Dataset(x, y);
}

}  // namespace canonical
}  // namespace mmlab
