#include "lipfree/transport_norm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "lipfree/error.hpp"

namespace lipfree {

// ---------------------------------------------------------------------------
// FreeElement

FreeElement::FreeElement(std::map<std::size_t, double> coefficients) {
  for (const auto& [point, alpha] : coefficients) {
    if (!std::isfinite(alpha)) {
      throw Error(ErrorCode::kStructural, "element coefficient is not finite");
    }
    if (point == 0) {
      dropped_base_ = dropped_base_ || alpha != 0.0;
      continue;
    }
    if (alpha != 0.0) coeffs_.emplace(point, alpha);
  }
}

FreeElement FreeElement::delta(std::size_t point, double weight) {
  return FreeElement({{point, weight}});
}

double FreeElement::coefficient(std::size_t point) const {
  auto it = coeffs_.find(point);
  return it == coeffs_.end() ? 0.0 : it->second;
}

std::vector<std::size_t> FreeElement::support() const {
  std::vector<std::size_t> s;
  s.reserve(coeffs_.size());
  for (const auto& kv : coeffs_) s.push_back(kv.first);
  return s;
}

double FreeElement::total_mass() const {
  double m = 0.0;
  for (const auto& kv : coeffs_) m += std::fabs(kv.second);
  return m;
}

std::size_t FreeElement::max_index() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

FreeElement FreeElement::restricted(std::span<const std::size_t> points) const {
  std::map<std::size_t, double> out;
  for (std::size_t p : points) {
    auto it = coeffs_.find(p);
    if (it != coeffs_.end()) out.emplace(p, it->second);
  }
  return FreeElement(std::move(out));
}

FreeElement FreeElement::scaled(double t) const {
  std::map<std::size_t, double> out;
  for (const auto& [p, a] : coeffs_) out.emplace(p, a * t);
  return FreeElement(std::move(out));
}

FreeElement operator+(const FreeElement& a, const FreeElement& b) {
  std::map<std::size_t, double> out = a.coeffs_;
  for (const auto& [p, v] : b.coeffs_) out[p] += v;
  return FreeElement(std::move(out));
}

FreeElement operator-(const FreeElement& a, const FreeElement& b) { return a + b.scaled(-1.0); }

// ---------------------------------------------------------------------------
// Lipschitz functions

double lip_constant(const FiniteMetricSpace& space, std::span<const double> values) {
  if (values.size() != space.size()) {
    throw Error(ErrorCode::kInvalidArgument, "function and space sizes differ");
  }
  double lip = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      lip = std::max(lip, std::fabs(values[i] - values[j]) / space(i, j));
    }
  }
  return lip;
}

bool is_lipschitz(const FiniteMetricSpace& space, std::span<const double> values, double bound,
                  double tol, std::pair<std::size_t, std::size_t>* offending) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (std::fabs(values[i] - values[j]) > bound * space(i, j) + tol) {
        if (offending) *offending = {i, j};
        return false;
      }
    }
  }
  return true;
}

LipschitzFunction LipschitzFunction::create(const FiniteMetricSpace& space, std::vector<double> values) {
  if (values.size() != space.size()) {
    throw Error(ErrorCode::kInvalidArgument, "function and space sizes differ");
  }
  if (values[0] != 0.0) throw Error(ErrorCode::kInvalidArgument, "function must vanish at the base point");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kStructural, "function value is not finite");
  }
  LipschitzFunction f;
  f.lip_ = lipfree::lip_constant(space, values);
  f.values_ = std::move(values);
  return f;
}

bool LipschitzFunction::integer_valued() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::floor(v) == v; });
}

LipschitzFunction LipschitzFunction::scaled(const FiniteMetricSpace& space, double t) const {
  std::vector<double> v = values_;
  for (double& x : v) x *= t;
  return create(space, std::move(v));
}

double pairing(const LipschitzFunction& f, const FreeElement& mu) {
  if (!mu.empty() && mu.max_index() >= f.size()) {
    throw Error(ErrorCode::kInvalidArgument, "element and function live on different spaces");
  }
  double s = 0.0;
  for (const auto& [p, a] : mu.coefficients()) s += a * f(p);
  return s;
}

Rational pairing_exact(std::span<const double> f, const FreeElement& mu) {
  if (!mu.empty() && mu.max_index() >= f.size()) {
    throw Error(ErrorCode::kInvalidArgument, "element and function live on different spaces");
  }
  Rational s = 0;
  for (const auto& [p, a] : mu.coefficients()) s += decimal_rational(a) * decimal_rational(f[p]);
  return s;
}

// ---------------------------------------------------------------------------
// Successive shortest paths on the complete graph over all points.
//
// Every ordered pair carries an uncapacitated arc of cost d(u,v), so the
// final node potentials satisfy |pi(u) - pi(v)| <= d(u,v) on all pairs and
// are tight along every arc with flow.

namespace {

template <class T>
struct TransportSolution {
  std::vector<T> potential;  // f(0) = 0
  std::vector<std::tuple<std::size_t, std::size_t, T>> flows;
  T cost;
};

template <class T>
TransportSolution<T> solve_transport(std::size_t n, const std::vector<T>& dist, std::vector<T> excess,
                                     const T& tol) {
  std::vector<T> flow(n * n, T(0));
  std::vector<T> pi(n, T(0));
  std::vector<T> label(n);
  std::vector<char> reached(n), done(n), via_reverse(n);
  std::vector<std::size_t> parent(n);
  const T zero(0);

  for (;;) {
    bool any_source = false;
    std::fill(reached.begin(), reached.end(), 0);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (excess[v] > tol) {
        reached[v] = 1;
        label[v] = zero;
        parent[v] = v;
        any_source = true;
      }
    }
    if (!any_source) break;

    std::size_t sink = n;
    for (;;) {
      std::size_t u = n;
      for (std::size_t v = 0; v < n; ++v) {
        if (reached[v] && !done[v] && (u == n || label[v] < label[u])) u = v;
      }
      if (u == n) throw Error(ErrorCode::kVerificationFailed, "transport problem is unbalanced");
      done[u] = 1;
      if (excess[u] < -tol) {
        sink = u;
        break;
      }
      for (std::size_t v = 0; v < n; ++v) {
        if (v == u || done[v]) continue;
        T cost = dist[u * n + v] + pi[u] - pi[v];
        bool reverse = false;
        if (flow[v * n + u] > tol) {
          T back = pi[u] - pi[v] - dist[v * n + u];
          if (back < cost) {
            cost = back;
            reverse = true;
          }
        }
        if (cost < zero) cost = zero;  // rounding only; exact arithmetic never gets here
        T candidate = label[u] + cost;
        if (!reached[v] || candidate < label[v]) {
          reached[v] = 1;
          label[v] = candidate;
          parent[v] = u;
          via_reverse[v] = reverse;
        }
      }
    }

    const T reach = label[sink];
    for (std::size_t v = 0; v < n; ++v) pi[v] += done[v] ? label[v] : reach;

    T delta = -excess[sink];
    std::size_t v = sink;
    while (parent[v] != v) {
      std::size_t u = parent[v];
      if (via_reverse[v]) delta = std::min(delta, flow[v * n + u]);
      v = u;
    }
    const std::size_t source = v;
    delta = std::min(delta, excess[source]);

    v = sink;
    while (parent[v] != v) {
      std::size_t u = parent[v];
      if (via_reverse[v]) {
        flow[v * n + u] -= delta;
        if (flow[v * n + u] < tol) flow[v * n + u] = zero;
      } else {
        flow[u * n + v] += delta;
      }
      v = u;
    }
    excess[source] -= delta;
    excess[sink] += delta;
  }

  TransportSolution<T> out;
  out.potential.resize(n);
  for (std::size_t v = 0; v < n; ++v) out.potential[v] = pi[0] - pi[v];
  out.cost = zero;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      T net = flow[i * n + j] - flow[j * n + i];
      if (net > tol) {
        out.flows.emplace_back(i, j, net);
        out.cost += net * dist[i * n + j];
      } else if (net < -tol) {
        out.flows.emplace_back(j, i, -net);
        out.cost += -net * dist[i * n + j];
      }
    }
  }
  return out;
}

void check_support(const FiniteMetricSpace& space, const FreeElement& mu) {
  if (!mu.empty() && mu.max_index() >= space.size()) {
    throw Error(ErrorCode::kInvalidArgument, "element is not supported on the space");
  }
}

TransportSolution<Rational> solve_exact(const FiniteMetricSpace& space, const FreeElement& mu) {
  check_support(space, mu);
  const std::size_t n = space.size();
  std::vector<Rational> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = space.exact(i, j);
  }
  std::vector<Rational> supply(n, Rational(0));
  for (const auto& [p, a] : mu.coefficients()) {
    supply[p] = decimal_rational(a);
    supply[0] -= supply[p];
  }
  return solve_transport<Rational>(n, dist, std::move(supply), Rational(0));
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) s += (s.empty() ? "" : "; ") + p;
  return s;
}

// The norm of mu only depends on {0} u supp(mu): by the triangle inequality
// no mass needs to pass through other points, and any 1-Lipschitz potential
// on the subspace extends to the whole space.
struct Reduction {
  std::vector<std::size_t> points;  // ascending, points[0] = 0
  FiniteMetricSpace sub;
  FreeElement mu;
};

std::optional<Reduction> reduce(const FiniteMetricSpace& space, const FreeElement& mu) {
  std::vector<std::size_t> points{0};
  for (std::size_t p : mu.support()) points.push_back(p);
  if (points.size() >= space.size()) return std::nullopt;
  std::map<std::size_t, double> coeffs;
  for (std::size_t i = 1; i < points.size(); ++i) coeffs.emplace(i, mu.coefficient(points[i]));
  FiniteMetricSpace sub = restrict(space, points);
  return Reduction{std::move(points), std::move(sub), FreeElement(std::move(coeffs))};
}

template <class T, class Dist>
std::vector<T> extend_by_lower_envelope(std::size_t n, const std::vector<std::size_t>& points,
                                        const std::vector<T>& values, Dist dist) {
  std::vector<T> out(n);
  std::vector<char> fixed(n, 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[points[i]] = values[i];
    fixed[points[i]] = 1;
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (fixed[x]) continue;
    out[x] = values[0] + dist(x, points[0]);
    for (std::size_t i = 1; i < points.size(); ++i) {
      T candidate = values[i] + dist(x, points[i]);
      if (candidate < out[x]) out[x] = candidate;
    }
  }
  return out;
}

}  // namespace

ExactNormCertificate free_norm_exact(const FiniteMetricSpace& space, const FreeElement& mu) {
  check_support(space, mu);
  ExactNormCertificate cert;
  if (auto red = reduce(space, mu)) {
    auto sol = solve_exact(red->sub, red->mu);
    cert.value = sol.cost;
    cert.potential = extend_by_lower_envelope<Rational>(
        space.size(), red->points, sol.potential,
        [&](std::size_t a, std::size_t b) { return space.exact(a, b); });
    for (auto& [s, t, m] : sol.flows) cert.plan.push_back({red->points[s], red->points[t], m});
  } else {
    auto sol = solve_exact(space, mu);
    cert.value = sol.cost;
    cert.potential = std::move(sol.potential);
    for (auto& [s, t, m] : sol.flows) cert.plan.push_back({s, t, m});
  }
  auto check = verify_certificate(space, mu, cert);
  if (!check.ok) throw Error(ErrorCode::kVerificationFailed, "exact norm certificate: " + join(check.failures));
  return cert;
}

NormCertificate free_norm(const FiniteMetricSpace& space, const FreeElement& mu) {
  check_support(space, mu);
  NormCertificate cert;
  cert.dropped_base_coefficient = mu.dropped_base_coefficient();

  if (space.is_integer()) {
    ExactNormCertificate exact = free_norm_exact(space, mu);
    cert.exact = true;
    cert.exact_value = exact.value;
    cert.value = to_double(exact.value);
    for (const auto& f : exact.plan) {
      cert.plan.flows.push_back({f.source, f.sink, to_double(f.mass)});
    }
    for (const auto& v : exact.potential) cert.potential.push_back(to_double(v));
  } else {
    auto red = reduce(space, mu);
    const FiniteMetricSpace& work = red ? red->sub : space;
    const FreeElement& work_mu = red ? red->mu : mu;
    const std::size_t n = work.size();
    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = work(i, j);
    }
    std::vector<double> supply(n, 0.0);
    for (const auto& [p, a] : work_mu.coefficients()) {
      supply[p] = a;
      supply[0] -= a;
    }
    const double tol = 1e-13 * std::max(1.0, mu.total_mass());
    auto sol = solve_transport<double>(n, dist, std::move(supply), tol);
    cert.value = sol.cost;
    if (red) {
      cert.potential = extend_by_lower_envelope<double>(space.size(), red->points, sol.potential,
                                                        [&](std::size_t a, std::size_t b) { return space(a, b); });
      for (auto& [s, t, m] : sol.flows) cert.plan.flows.push_back({red->points[s], red->points[t], m});
    } else {
      cert.potential = std::move(sol.potential);
      for (auto& [s, t, m] : sol.flows) cert.plan.flows.push_back({s, t, m});
    }
  }

  double cost = 0.0;
  for (const auto& f : cert.plan.flows) cost += f.mass * space(f.source, f.sink);
  cert.plan.cost = cost;
  cert.potential_lip = lip_constant(space, cert.potential);
  double dual = 0.0;
  for (const auto& [p, a] : mu.coefficients()) dual += a * cert.potential[p];
  cert.gap = std::fabs(cert.value - dual);

  auto check = verify_certificate(space, mu, cert);
  if (!check.ok) throw Error(ErrorCode::kVerificationFailed, "norm certificate: " + join(check.failures));
  return cert;
}

CertificateCheck verify_certificate(const FiniteMetricSpace& space, const FreeElement& mu,
                                    const NormCertificate& cert) {
  CertificateCheck check;
  auto fail = [&](std::string msg) {
    check.ok = false;
    check.failures.push_back(std::move(msg));
  };
  const std::size_t n = space.size();
  const double scale = std::max(1.0, cert.value);
  const double mass_tol = kDualityTolerance * std::max(1.0, mu.total_mass());

  std::vector<double> net(n, 0.0);
  double cost = 0.0;
  for (const auto& f : cert.plan.flows) {
    if (f.source >= n || f.sink >= n) {
      fail("plan references a point outside the space");
      return check;
    }
    if (f.mass < 0.0) fail("negative flow");
    net[f.source] += f.mass;
    net[f.sink] -= f.mass;
    cost += f.mass * space(f.source, f.sink);
  }
  for (std::size_t x = 1; x < n; ++x) {
    if (std::fabs(net[x] - mu.coefficient(x)) > mass_tol) {
      fail("plan does not balance point " + space.label(x));
    }
  }
  if (std::fabs(cost - cert.value) > kDualityTolerance * scale) fail("plan cost differs from value");

  if (cert.potential.size() != n) {
    fail("potential has wrong size");
    return check;
  }
  if (cert.potential[0] != 0.0) fail("potential does not vanish at the base point");
  if (!is_lipschitz(space, cert.potential, 1.0, kDualityTolerance)) fail("potential is not 1-Lipschitz");
  double dual = 0.0;
  for (const auto& [p, a] : mu.coefficients()) dual += a * cert.potential[p];
  if (std::fabs(dual - cert.value) > kDualityTolerance * scale) fail("duality gap exceeds tolerance");
  return check;
}

CertificateCheck verify_certificate(const FiniteMetricSpace& space, const FreeElement& mu,
                                    const ExactNormCertificate& cert) {
  CertificateCheck check;
  auto fail = [&](std::string msg) {
    check.ok = false;
    check.failures.push_back(std::move(msg));
  };
  const std::size_t n = space.size();
  std::vector<Rational> net(n, Rational(0));
  Rational cost = 0;
  for (const auto& f : cert.plan) {
    if (f.source >= n || f.sink >= n) {
      fail("plan references a point outside the space");
      return check;
    }
    if (f.mass < 0) fail("negative flow");
    net[f.source] += f.mass;
    net[f.sink] -= f.mass;
    cost += f.mass * space.exact(f.source, f.sink);
  }
  for (std::size_t x = 1; x < n; ++x) {
    if (net[x] != decimal_rational(mu.coefficient(x))) fail("plan does not balance point " + space.label(x));
  }
  if (cost != cert.value) fail("plan cost differs from value");
  if (cert.potential.size() != n) {
    fail("potential has wrong size");
    return check;
  }
  if (cert.potential[0] != 0) fail("potential does not vanish at the base point");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (abs(cert.potential[i] - cert.potential[j]) > space.exact(i, j)) {
        fail("potential is not 1-Lipschitz");
        i = n;
        break;
      }
    }
  }
  Rational dual = 0;
  for (const auto& [p, a] : mu.coefficients()) dual += decimal_rational(a) * cert.potential[p];
  if (dual != cert.value) fail("duality gap is not zero");
  return check;
}

// ---------------------------------------------------------------------------
// Integer potentials

namespace {

bool integer_certificate_holds(const FiniteMetricSpace& space, const FreeElement& mu,
                               const std::vector<std::int64_t>& f, const Rational& value) {
  if (f.size() != space.size() || f[0] != 0) return false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      if (std::llabs(f[i] - f[j]) > space.integer_distance(i, j)) return false;
    }
  }
  Rational dual = 0;
  for (const auto& [p, a] : mu.coefficients()) dual += decimal_rational(a) * Rational(static_cast<long>(f[p]));
  return dual == value;
}

}  // namespace

IntegerPotential integer_potential(const FiniteMetricSpace& space, const FreeElement& mu) {
  if (!space.is_integer()) throw Error(ErrorCode::kDomain, "requires integer metric");
  check_support(space, mu);
  if (auto red = reduce(space, mu)) {
    // The largest optimal potential on the whole space is the largest one on
    // the support, extended by its 1-Lipschitz upper envelope.
    IntegerPotential local = integer_potential(red->sub, red->mu);
    IntegerPotential out;
    out.value = local.value;
    out.method = local.method;
    out.values = extend_by_lower_envelope<std::int64_t>(
        space.size(), red->points, local.values,
        [&](std::size_t a, std::size_t b) { return space.integer_distance(a, b); });
    if (!integer_certificate_holds(space, mu, out.values, out.value)) {
      throw Error(ErrorCode::kVerificationFailed, "extended integer potential fails its certificate");
    }
    return out;
  }
  auto sol = solve_exact(space, mu);
  const std::size_t n = space.size();

  // Largest optimal potential: shortest paths from the base point in the
  // difference-constraint graph f(v) - f(u) <= d(u,v), plus f(j) - f(i) <=
  // -d(i,j) on every arc with flow. The solver's potential makes all reduced
  // weights non-negative, so Dijkstra applies.
  std::vector<std::int64_t> feasible(n);
  bool integral = true;
  for (std::size_t v = 0; v < n; ++v) {
    integral = integral && is_integer(sol.potential[v]);
    feasible[v] = integral ? sol.potential[v].get_num().get_si() : 0;
  }

  IntegerPotential out;
  out.value = sol.cost;
  if (integral) {
    std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
    for (const auto& [s, t, m] : sol.flows) tight[s][t] = 1;
    auto weight = [&](std::size_t u, std::size_t v) -> std::int64_t {
      return tight[u][v] ? -space.integer_distance(u, v) : space.integer_distance(u, v);
    };
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> reduced(n, kInf);
    std::vector<char> done(n, 0);
    reduced[0] = 0;
    for (std::size_t iter = 0; iter < n; ++iter) {
      std::size_t u = n;
      for (std::size_t v = 0; v < n; ++v) {
        if (!done[v] && reduced[v] != kInf && (u == n || reduced[v] < reduced[u])) u = v;
      }
      if (u == n) break;
      done[u] = 1;
      for (std::size_t v = 0; v < n; ++v) {
        if (done[v] || v == u) continue;
        std::int64_t w = weight(u, v) + feasible[u] - feasible[v];
        if (reduced[u] + w < reduced[v]) reduced[v] = reduced[u] + w;
      }
    }
    out.values.resize(n);
    for (std::size_t v = 0; v < n; ++v) out.values[v] = reduced[v] + feasible[v] - feasible[0];
    out.method = IntegerPotential::Method::kTightPropagation;
    if (integer_certificate_holds(space, mu, out.values, out.value)) return out;
  }

  IntegerPotential searched = integer_potential_search(space, mu);
  if (searched.value != out.value || !integer_certificate_holds(space, mu, searched.values, searched.value)) {
    throw Error(ErrorCode::kVerificationFailed, "no integer potential attains the norm");
  }
  return searched;
}

IntegerPotential integer_potential_search(const FiniteMetricSpace& space, const FreeElement& mu) {
  if (!space.is_integer()) throw Error(ErrorCode::kDomain, "requires integer metric");
  check_support(space, mu);
  const std::vector<std::size_t> support = mu.support();
  if (support.size() > kExhaustiveSearchCap) {
    throw Error(ErrorCode::kCapExceeded, "exhaustive integer search is capped at " +
                                             std::to_string(kExhaustiveSearchCap) + " support points");
  }
  const std::size_t k = support.size();
  std::vector<Rational> alpha(k);
  std::vector<Rational> tail_bound(k + 1, Rational(0));
  for (std::size_t i = 0; i < k; ++i) alpha[i] = decimal_rational(mu.coefficient(support[i]));
  for (std::size_t i = k; i-- > 0;) {
    tail_bound[i] = tail_bound[i + 1] + abs(alpha[i]) * space.integer_distance(support[i], 0);
  }

  std::vector<std::int64_t> current(k), best(k);
  Rational best_value;
  bool have_best = false;
  std::function<void(std::size_t, const Rational&)> search = [&](std::size_t i, const Rational& acc) {
    if (have_best && acc + tail_bound[i] <= best_value) return;
    if (i == k) {
      best = current;
      best_value = acc;
      have_best = true;
      return;
    }
    const std::int64_t r = space.integer_distance(support[i], 0);
    std::int64_t lo = -r, hi = r;
    for (std::size_t j = 0; j < i; ++j) {
      const std::int64_t d = space.integer_distance(support[i], support[j]);
      lo = std::max(lo, current[j] - d);
      hi = std::min(hi, current[j] + d);
    }
    // Try the value favoured by the sign of the coefficient first.
    for (std::int64_t step = 0; step <= hi - lo; ++step) {
      current[i] = alpha[i] >= 0 ? hi - step : lo + step;
      search(i + 1, acc + alpha[i] * Rational(static_cast<long>(current[i])));
    }
  };
  search(0, Rational(0));

  // Extend from {0} u support to the whole space with constant 1.
  std::vector<std::size_t> subset{0};
  std::vector<double> values{0.0};
  for (std::size_t i = 0; i < k; ++i) {
    subset.push_back(support[i]);
    values.push_back(static_cast<double>(best[i]));
  }
  LipschitzFunction g = mcshane_extend(space, subset, values, 1.0);

  IntegerPotential out;
  out.value = have_best ? best_value : Rational(0);
  out.method = IntegerPotential::Method::kExhaustiveSearch;
  for (double v : g.values()) out.values.push_back(static_cast<std::int64_t>(v));
  return out;
}

// ---------------------------------------------------------------------------
// McShane extension

LipschitzFunction mcshane_extend(const FiniteMetricSpace& space, std::span<const std::size_t> subset,
                                 std::span<const double> values, double lip_bound) {
  if (!(lip_bound > 0.0)) throw Error(ErrorCode::kInvalidArgument, "Lipschitz bound must be positive");
  if (subset.size() != values.size()) {
    throw Error(ErrorCode::kInvalidArgument, "subset and values have different lengths");
  }
  auto base = std::find(subset.begin(), subset.end(), std::size_t{0});
  if (base == subset.end()) throw Error(ErrorCode::kInvalidArgument, "subset must contain the base point");
  if (values[static_cast<std::size_t>(base - subset.begin())] != 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "function must vanish at the base point");
  }
  for (std::size_t h : subset) {
    if (h >= space.size()) throw Error(ErrorCode::kInvalidArgument, "subset index out of range");
  }

  bool integral = space.is_integer() && std::floor(lip_bound) == lip_bound;
  for (double v : values) integral = integral && std::floor(v) == v;
  const double tol = integral ? 0.0 : kMetricTolerance;

  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      if (subset[a] == subset[b]) continue;
      if (std::fabs(values[a] - values[b]) > lip_bound * space(subset[a], subset[b]) + tol) {
        std::ostringstream msg;
        msg << "function is not " << lip_bound << "-Lipschitz on the subset: pair (" << space.label(subset[a])
            << ", " << space.label(subset[b]) << ")";
        throw Error(ErrorCode::kDomain, msg.str());
      }
    }
  }

  std::vector<double> g(space.size(), std::numeric_limits<double>::infinity());
  for (std::size_t x = 0; x < space.size(); ++x) {
    for (std::size_t a = 0; a < subset.size(); ++a) {
      g[x] = std::min(g[x], values[a] + lip_bound * space(x, subset[a]));
    }
  }
  for (std::size_t a = 0; a < subset.size(); ++a) g[subset[a]] = values[a];

  LipschitzFunction out = LipschitzFunction::create(space, std::move(g));
  if (!is_lipschitz(space, out.values(), lip_bound, tol)) {
    throw Error(ErrorCode::kVerificationFailed, "extension exceeds the Lipschitz bound");
  }
  return out;
}

// ---------------------------------------------------------------------------

Ell1Bounds ell1_bounds(const FiniteMetricSpace& space, const FreeElement& mu) {
  SeparationBounds sep = separation_bounds(space);
  Ell1Bounds out;
  out.total_mass = mu.total_mass();
  out.lower = sep.a / 2.0 * out.total_mass;
  out.upper = sep.b * out.total_mass;
  out.norm = free_norm(space, mu).value;
  const double tol = kDualityTolerance * std::max(1.0, out.norm);
  out.within = out.lower <= out.norm + tol && out.norm <= out.upper + tol;
  return out;
}

}  // namespace lipfree
