#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lipfree/metric_space.hpp"
#include "lipfree/rational.hpp"

namespace lipfree {

inline constexpr double kDualityTolerance = 1e-9;

/// Finitely supported element sum_x alpha_x delta(x) of the free space.
///
/// delta(0) = 0, so a coefficient on the base point is dropped at
/// construction and remembered in dropped_base_coefficient(). Exact zeros are
/// not stored.
class FreeElement {
 public:
  FreeElement() = default;
  explicit FreeElement(std::map<std::size_t, double> coefficients);

  static FreeElement delta(std::size_t point, double weight = 1.0);

  const std::map<std::size_t, double>& coefficients() const noexcept { return coeffs_; }
  double coefficient(std::size_t point) const;
  std::vector<std::size_t> support() const;
  bool empty() const noexcept { return coeffs_.empty(); }
  bool dropped_base_coefficient() const noexcept { return dropped_base_; }
  double total_mass() const;  // sum |alpha_x|
  std::size_t max_index() const;

  FreeElement restricted(std::span<const std::size_t> points) const;
  FreeElement scaled(double t) const;

  friend FreeElement operator+(const FreeElement& a, const FreeElement& b);
  friend FreeElement operator-(const FreeElement& a, const FreeElement& b);
  friend bool operator==(const FreeElement&, const FreeElement&) = default;

 private:
  std::map<std::size_t, double> coeffs_;
  bool dropped_base_ = false;
};

/// Function on the points of a space with f(0) = 0 and its Lipschitz
/// constant, computed once at construction.
class LipschitzFunction {
 public:
  static LipschitzFunction create(const FiniteMetricSpace& space, std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  double operator()(std::size_t i) const { return values_.at(i); }
  double lip_constant() const noexcept { return lip_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool integer_valued() const;

  LipschitzFunction scaled(const FiniteMetricSpace& space, double t) const;

 private:
  std::vector<double> values_;
  double lip_ = 0.0;
};

double lip_constant(const FiniteMetricSpace& space, std::span<const double> values);

// True iff |f(x) - f(y)| <= bound d(x,y) + tol for all pairs. Compares by
// multiplication, so integer data is checked exactly with tol = 0.
bool is_lipschitz(const FiniteMetricSpace& space, std::span<const double> values, double bound,
                  double tol, std::pair<std::size_t, std::size_t>* offending = nullptr);

double pairing(const LipschitzFunction& f, const FreeElement& mu);
Rational pairing_exact(std::span<const double> f, const FreeElement& mu);

struct Flow {
  std::size_t source;
  std::size_t sink;
  double mass;
};

struct TransportPlan {
  std::vector<Flow> flows;
  double cost = 0.0;
};

struct NormCertificate {
  double value = 0.0;
  TransportPlan plan;
  std::vector<double> potential;  // 1-Lipschitz, potential[0] = 0
  double potential_lip = 0.0;
  double gap = 0.0;
  bool exact = false;             // solved in rational arithmetic
  std::optional<Rational> exact_value;
  bool dropped_base_coefficient = false;
};

struct ExactFlow {
  std::size_t source;
  std::size_t sink;
  Rational mass;
};

struct ExactNormCertificate {
  Rational value;
  std::vector<ExactFlow> plan;
  std::vector<Rational> potential;
};

// Min-cost transportation with the base point as unlimited reservoir, plus
// the dual potential. Integer metrics are solved in rational arithmetic.
// Both witnesses are re-checked; a failed check throws kVerificationFailed.
NormCertificate free_norm(const FiniteMetricSpace& space, const FreeElement& mu);

// Always rational arithmetic on the decimal values of the inputs.
ExactNormCertificate free_norm_exact(const FiniteMetricSpace& space, const FreeElement& mu);

struct CertificateCheck {
  bool ok = true;
  std::vector<std::string> failures;
};

// Independent of the solver: plan balance and non-negativity, plan cost,
// Lipschitz constant of the potential and the duality gap.
CertificateCheck verify_certificate(const FiniteMetricSpace& space, const FreeElement& mu,
                                    const NormCertificate& cert);
CertificateCheck verify_certificate(const FiniteMetricSpace& space, const FreeElement& mu,
                                    const ExactNormCertificate& cert);

struct IntegerPotential {
  std::vector<std::int64_t> values;
  Rational value;  // <f, mu> = ||mu||, exactly
  enum class Method { kTightPropagation, kExhaustiveSearch } method;
};

// Integer-valued 1-Lipschitz maximiser. Among all optimal potentials this
// returns the pointwise largest one, so it does not depend on solver ties.
IntegerPotential integer_potential(const FiniteMetricSpace& space, const FreeElement& mu);

// Exhaustive search over integer 1-Lipschitz functions (|f(x)| <= d(x,0)).
// Fallback for integer_potential; capped at kExhaustiveSearchCap points.
inline constexpr std::size_t kExhaustiveSearchCap = 12;
IntegerPotential integer_potential_search(const FiniteMetricSpace& space, const FreeElement& mu);

// g(x) = min_{h in H} f_H(h) + L d(x,h). `subset` must contain 0 and
// `values[i]` is the value at subset[i].
LipschitzFunction mcshane_extend(const FiniteMetricSpace& space, std::span<const std::size_t> subset,
                                 std::span<const double> values, double lip_bound);

struct Ell1Bounds {
  double lower;
  double upper;
  double total_mass;
  double norm;
  bool within;
};

Ell1Bounds ell1_bounds(const FiniteMetricSpace& space, const FreeElement& mu);

}  // namespace lipfree
