#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lipfree/rational.hpp"

namespace lipfree {

using Matrix = std::vector<std::vector<double>>;

inline constexpr double kMetricTolerance = 1e-9;
inline constexpr std::size_t kQuadrupleScanCap = 64;

struct Violation {
  enum class Kind { kDiagonal, kSymmetry, kPositivity, kTriangle };

  Kind kind;
  // Diagonal: {i}. Symmetry/positivity: {i, j}. Triangle: {i, j, k} with
  // d(i,k) > d(i,j) + d(j,k).
  std::vector<std::size_t> indices;
  double magnitude;
};

std::string_view to_string(Violation::Kind kind);

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

// Structural problems (non-square, non-finite) throw Error(kStructural);
// everything else is reported. Integer-valued matrices are checked with
// zero tolerance, others with kMetricTolerance.
ValidationReport validate_metric(const Matrix& matrix);

/// Pointed finite metric space. Index 0 is the base point.
///
/// Immutable once built. Integer-valued metrics also keep an exact integer
/// copy of the distance matrix.
class FiniteMetricSpace {
 public:
  // Validates; throws Error(kDomain) listing the first violation if the
  // matrix is not a metric.
  static FiniteMetricSpace create(std::vector<std::string> labels, const Matrix& dist);
  // Labels "0", "1", ...
  static FiniteMetricSpace create(const Matrix& dist);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return dist_[i * n_ + j]; }
  Rational exact(std::size_t i, std::size_t j) const;

  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  bool is_integer() const noexcept { return !integer_.empty() || n_ <= 1; }
  std::int64_t integer_distance(std::size_t i, std::size_t j) const;
  double diameter() const noexcept;

  Matrix matrix() const;

 private:
  FiniteMetricSpace() = default;

  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> dist_;
  std::vector<std::int64_t> integer_;
};

struct SeparationBounds {
  double a;  // least distance between distinct points
  double b;  // diameter
};

SeparationBounds separation_bounds(const FiniteMetricSpace& space);

// d'(x,y) = ceil(c d(x,y)), computed on the decimal values of the inputs.
FiniteMetricSpace round_metric(const FiniteMetricSpace& space, double c);

FiniteMetricSpace snowflake(const FiniteMetricSpace& space, double p);

struct DyadicShell {
  int k;
  std::vector<std::size_t> members;  // {x : d(x,0) <= 2^k}, ascending
};

// Shells listed from k = 0 (everything within distance 1 of the base point)
// up to the first k containing the whole space, only where the set grows.
std::vector<DyadicShell> dyadic_decomposition(const FiniteMetricSpace& space);

// Induced subspace on `subset` (must contain 0). Points keep ascending order.
FiniteMetricSpace restrict(const FiniteMetricSpace& space, std::span<const std::size_t> subset);

struct TripleWitness {
  std::size_t x, y, z;  // d(x,z) > max(d(x,y), d(y,z))
  double slack;
};

struct UltrametricCheck {
  bool ok;
  std::optional<TripleWitness> witness;
};

UltrametricCheck check_ultrametric(const FiniteMetricSpace& space);

struct QuadrupleWitness {
  std::size_t x, y, z, u;  // d(x,y)+d(z,u) > max(d(x,z)+d(y,u), d(x,u)+d(y,z))
  double slack;
};

struct FourPointCheck {
  bool ok;
  std::optional<QuadrupleWitness> witness;
};

// O(n^4); spaces above kQuadrupleScanCap points throw Error(kCapExceeded).
FourPointCheck check_four_point(const FiniteMetricSpace& space);

}  // namespace lipfree
