#include "lipfree/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "lipfree/error.hpp"

namespace lipfree {
namespace {

constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

bool integer_valued(const Matrix& m) {
  for (const auto& row : m) {
    for (double v : row) {
      if (std::floor(v) != v || std::fabs(v) > kMaxExactInteger) return false;
    }
  }
  return true;
}

std::string describe(const Violation& v) {
  std::ostringstream out;
  out << to_string(v.kind) << " violation at (";
  for (std::size_t i = 0; i < v.indices.size(); ++i) out << (i ? "," : "") << v.indices[i];
  out << ") by " << v.magnitude;
  return out.str();
}

int dyadic_exponent(double d) {
  int e = 0;
  double m = std::frexp(d, &e);
  return m == 0.5 ? e - 1 : e;
}

}  // namespace

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kDiagonal: return "diagonal";
    case Violation::Kind::kSymmetry: return "symmetry";
    case Violation::Kind::kPositivity: return "positivity";
    case Violation::Kind::kTriangle: return "triangle";
  }
  return "unknown";
}

ValidationReport validate_metric(const Matrix& matrix) {
  const std::size_t n = matrix.size();
  for (const auto& row : matrix) {
    if (row.size() != n) {
      throw Error(ErrorCode::kStructural, "distance matrix is not square");
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kStructural, "distance matrix has a non-finite entry");
    }
  }
  const double tol = integer_valued(matrix) ? 0.0 : kMetricTolerance;

  ValidationReport report;
  auto add = [&](Violation::Kind kind, std::vector<std::size_t> idx, double magnitude) {
    report.violations.push_back({kind, std::move(idx), magnitude});
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i][i] != 0.0) add(Violation::Kind::kDiagonal, {i}, std::fabs(matrix[i][i]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double asym = std::fabs(matrix[i][j] - matrix[j][i]);
      if (asym > tol) add(Violation::Kind::kSymmetry, {i, j}, asym);
      double low = std::min(matrix[i][j], matrix[j][i]);
      if (low <= 0.0) add(Violation::Kind::kPositivity, {i, j}, -low);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        double excess = matrix[i][k] - matrix[i][j] - matrix[j][k];
        if (excess > tol) add(Violation::Kind::kTriangle, {i, j, k}, excess);
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

FiniteMetricSpace FiniteMetricSpace::create(std::vector<std::string> labels, const Matrix& dist) {
  if (dist.empty()) throw Error(ErrorCode::kStructural, "metric space needs at least the base point");
  if (labels.size() != dist.size()) {
    throw Error(ErrorCode::kStructural, "label count does not match the distance matrix");
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw Error(ErrorCode::kStructural, "duplicate point label '" + l + "'");
  }
  ValidationReport report = validate_metric(dist);
  if (!report.ok) {
    throw Error(ErrorCode::kDomain, "not a metric: " + describe(report.violations.front()));
  }

  FiniteMetricSpace space;
  space.n_ = dist.size();
  space.labels_ = std::move(labels);
  space.dist_.reserve(space.n_ * space.n_);
  for (const auto& row : dist) space.dist_.insert(space.dist_.end(), row.begin(), row.end());
  if (integer_valued(dist)) {
    space.integer_.reserve(space.dist_.size());
    for (double v : space.dist_) space.integer_.push_back(static_cast<std::int64_t>(v));
  }
  return space;
}

FiniteMetricSpace FiniteMetricSpace::create(const Matrix& dist) {
  std::vector<std::string> labels;
  labels.reserve(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) labels.push_back(std::to_string(i));
  return create(std::move(labels), dist);
}

Rational FiniteMetricSpace::exact(std::size_t i, std::size_t j) const {
  if (!integer_.empty()) return Rational(static_cast<long>(integer_[i * n_ + j]));
  return decimal_rational((*this)(i, j));
}

std::optional<std::size_t> FiniteMetricSpace::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::int64_t FiniteMetricSpace::integer_distance(std::size_t i, std::size_t j) const {
  if (integer_.empty()) {
    if (n_ <= 1) return 0;
    throw Error(ErrorCode::kDomain, "requires integer metric");
  }
  return integer_[i * n_ + j];
}

double FiniteMetricSpace::diameter() const noexcept {
  double b = 0.0;
  for (double v : dist_) b = std::max(b, v);
  return b;
}

Matrix FiniteMetricSpace::matrix() const {
  Matrix m(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) m[i][j] = (*this)(i, j);
  }
  return m;
}

SeparationBounds separation_bounds(const FiniteMetricSpace& space) {
  if (space.size() < 2) throw Error(ErrorCode::kDomain, "no pairs");
  SeparationBounds bounds{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      bounds.a = std::min(bounds.a, space(i, j));
      bounds.b = std::max(bounds.b, space(i, j));
    }
  }
  return bounds;
}

FiniteMetricSpace round_metric(const FiniteMetricSpace& space, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::kInvalidArgument, "rounding scale must be a positive real");
  }
  const Rational scale = decimal_rational(c);
  Matrix out(space.size(), std::vector<double>(space.size(), 0.0));
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      Rational r = ceil(scale * space.exact(i, j));
      double v = to_double(r);
      if (v > kMaxExactInteger) throw Error(ErrorCode::kDomain, "rounded distance exceeds 2^53");
      out[i][j] = out[j][i] = v;
    }
  }
  return FiniteMetricSpace::create(space.labels(), out);
}

FiniteMetricSpace snowflake(const FiniteMetricSpace& space, double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "snowflake exponent must lie in (0,1]");
  }
  Matrix out = space.matrix();
  if (p != 1.0) {
    for (auto& row : out) {
      for (double& v : row) v = std::pow(v, p);
    }
  }
  return FiniteMetricSpace::create(space.labels(), out);
}

std::vector<DyadicShell> dyadic_decomposition(const FiniteMetricSpace& space) {
  std::vector<int> level(space.size(), 0);
  std::vector<int> ks{0};
  for (std::size_t x = 1; x < space.size(); ++x) {
    level[x] = std::max(0, dyadic_exponent(space(x, 0)));
    ks.push_back(level[x]);
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  std::vector<DyadicShell> shells;
  for (int k : ks) {
    DyadicShell shell{k, {0}};
    for (std::size_t x = 1; x < space.size(); ++x) {
      if (level[x] <= k) shell.members.push_back(x);
    }
    shells.push_back(std::move(shell));
  }
  return shells;
}

FiniteMetricSpace restrict(const FiniteMetricSpace& space, std::span<const std::size_t> subset) {
  std::vector<std::size_t> idx(subset.begin(), subset.end());
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.empty() || idx.front() != 0) {
    throw Error(ErrorCode::kInvalidArgument, "subset must contain the base point");
  }
  if (idx.back() >= space.size()) throw Error(ErrorCode::kInvalidArgument, "subset index out of range");

  std::vector<std::string> labels;
  Matrix dist(idx.size(), std::vector<double>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) {
    labels.push_back(space.label(idx[a]));
    for (std::size_t b = 0; b < idx.size(); ++b) dist[a][b] = space(idx[a], idx[b]);
  }
  return FiniteMetricSpace::create(std::move(labels), dist);
}

UltrametricCheck check_ultrametric(const FiniteMetricSpace& space) {
  const double tol = space.is_integer() ? 0.0 : kMetricTolerance;
  const std::size_t n = space.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = x + 1; z < n; ++z) {
        if (y == x || y == z) continue;
        double slack = space(x, z) - std::max(space(x, y), space(y, z));
        if (slack > tol) return {false, TripleWitness{x, y, z, slack}};
      }
    }
  }
  return {true, std::nullopt};
}

FourPointCheck check_four_point(const FiniteMetricSpace& space) {
  const std::size_t n = space.size();
  if (n > kQuadrupleScanCap) {
    throw Error(ErrorCode::kCapExceeded,
                "four-point scan is capped at " + std::to_string(kQuadrupleScanCap) + " points");
  }
  const double tol = space.is_integer() ? 0.0 : kMetricTolerance;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = 0; z < n; ++z) {
        for (std::size_t u = 0; u < n; ++u) {
          double lhs = space(x, y) + space(z, u);
          double rhs = std::max(space(x, z) + space(y, u), space(x, u) + space(y, z));
          if (lhs - rhs > tol) return {false, QuadrupleWitness{x, y, z, u, lhs - rhs}};
        }
      }
    }
  }
  return {true, std::nullopt};
}

}  // namespace lipfree
