#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mmlab/types.hpp"

namespace mmlab {

/// Labeled binary classification data. Row i of `features()` is x_i, and
/// `labels()(i)` is y_i. The signed points s_i = y_i x_i are cached, since
/// every margin computation works with them.
///
/// Construction only checks shapes. Use `validate` for the value-level
/// invariants (unit-ball features, labels in {+1, -1}, finite entries).
class Dataset {
 public:
  Dataset(Matrix features, Vector labels);

  std::size_t n() const noexcept { return static_cast<std::size_t>(features_.rows()); }
  std::size_t m() const noexcept { return static_cast<std::size_t>(features_.cols()); }

  const Matrix& features() const noexcept { return features_; }
  const Vector& labels() const noexcept { return labels_; }
  /// n x m matrix whose rows are s_i = y_i x_i.
  const Matrix& signed_points() const noexcept { return signed_; }

  /// max_i ||x_i||.
  double radius() const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.features_ == b.features_ && a.labels_ == b.labels_;
  }

 private:
  Matrix features_;
  Vector labels_;
  Matrix signed_;
};

struct Violation {
  enum class Kind { feature_norm, label, non_finite };
  Kind kind;
  std::size_t index;
  double magnitude;  // offending norm or label value
};

struct ValidationOutcome {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Reports every violated value invariant. Never throws.
ValidationOutcome validate(const Dataset& d, double norm_tol = 1e-12);

std::string to_string(Violation::Kind kind);

/// Random separable data with optimal margin >= target_margin.
///
/// Draws a unit direction w*, then samples points uniformly in the unit ball,
/// rejecting those with |x^T w*| < target_margin and labelling the rest by
/// sign(x^T w*). Throws SolverError when `max_attempts` samples are exhausted
/// (the band is too wide for the dimension), InvalidArgument when
/// target_margin is outside (0, 1).
Dataset generate_separable(std::size_t n, std::size_t m, double target_margin,
                           std::uint64_t seed,
                           std::size_t max_attempts = 10'000'000);

// CSV with header "y,x1,...,xm", values printed with 17 significant digits.
Dataset read_csv(std::istream& in);
void write_csv(const Dataset& d, std::ostream& out);
Dataset load_csv(const std::filesystem::path& path);
void store_csv(const Dataset& d, const std::filesystem::path& path);

/// Content hash (FNV-1a over the CSV text) as 16 hex digits.
std::string dataset_id(const Dataset& d);

namespace canonical {
/// One point x = (1, 0), y = +1.
Dataset d1();
/// x = (1, 0) and x = (0, 1), both labelled +1.
Dataset d2();
/// x = (0.6, 0.8) labelled +1, x = (0.6, -0.8) labelled -1.
Dataset d3();
}  // namespace canonical

}  // namespace mmlab
