#include <doctest.h>

#include <cmath>

#include "lipfree/error.hpp"
#include "lipfree/generators.hpp"
#include "lipfree/transport_norm.hpp"
#include "oracles.hpp"

using namespace lipfree;

namespace {

FiniteMetricSpace m3() { return FiniteMetricSpace::create({"0", "x", "y"}, {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}); }

FreeElement el(std::map<std::size_t, double> c) { return FreeElement(std::move(c)); }

}  // namespace

TEST_CASE("FreeElement drops base coefficients and zeros") {
  auto mu = el({{0, 2.0}, {1, 1.0}, {2, 0.0}});
  CHECK(mu.dropped_base_coefficient());
  CHECK(mu.coefficients().size() == 1);
  CHECK(mu.total_mass() == 1.0);
  CHECK((mu - mu).empty());
}

TEST_CASE("lip_constant and pairing") {
  auto s = m3();
  CHECK(lip_constant(s, std::vector<double>{0, 1, 2}) == 1.0);
  CHECK(lip_constant(s, std::vector<double>{0, 0, 0}) == 0.0);
  CHECK(lip_constant(s, std::vector<double>{0, 3, 3}) == 3.0);

  auto f = LipschitzFunction::create(s, {0, 1, 2});
  CHECK(pairing(f, el({{1, 1}, {2, 1}})) == 3.0);
  CHECK(pairing(f, FreeElement{}) == 0.0);
  CHECK(pairing(f, el({{1, 1}, {2, -1}})) == -1.0);
  CHECK_THROWS_AS(LipschitzFunction::create(s, {1, 0, 0}), Error);
  CHECK_THROWS_AS(pairing(LipschitzFunction::create(s, {0, 1}), el({{1, 1}})), Error);
}

TEST_CASE("free_norm on M3") {
  auto s = m3();
  CHECK(free_norm(s, el({{1, 1}})).value == 1.0);
  CHECK(free_norm(s, el({{1, 1}, {2, -1}})).value == 1.0);
  auto c = free_norm(s, el({{1, 1}, {2, 1}}));
  CHECK(c.value == 3.0);
  CHECK(c.potential == std::vector<double>{0, 1, 2});
  CHECK(c.exact);
  CHECK(c.gap == 0.0);
  CHECK(free_norm(s, FreeElement{}).value == 0.0);
}

TEST_CASE("free_norm matches dual vertex enumeration") {
  Rng rng(101);
  for (int t = 0; t < 60; ++t) {
    auto space = random_rational_metric(rng, 2 + rng.below(5));
    auto mu = random_element(rng, space, 1 + rng.below(space.size() - 1));
    auto cert = free_norm(space, mu);
    const double want = to_double(oracle::dual_vertex_norm(oracle::exact_matrix(space), oracle::exact_coeffs(mu)));
    CHECK(cert.value == doctest::Approx(want).epsilon(1e-12));
    auto exact = free_norm_exact(space, mu);
    CHECK(exact.value == oracle::dual_vertex_norm(oracle::exact_matrix(space), oracle::exact_coeffs(mu)));
  }
}

TEST_CASE("certificates are feasible and tight on float metrics") {
  Rng rng(7);
  for (int t = 0; t < 40; ++t) {
    // Euclidean points in the plane give a non-integer metric.
    const std::size_t n = 2 + rng.below(20);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < n; ++i)
      pts.emplace_back(static_cast<double>(rng.below(1000)) / 7.0, static_cast<double>(rng.below(1000)) / 3.0);
    Matrix d(n, std::vector<double>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i][j] = i == j ? 0 : std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second) + 1e-3;
    auto space = FiniteMetricSpace::create(d);
    auto mu = random_element(rng, space, 1 + rng.below(n - 1));
    auto cert = free_norm(space, mu);
    CHECK_FALSE(cert.exact);
    // Float data: compare against the exact binary values.
    oracle::QMatrix qd(n, std::vector<oracle::Q>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) qd[i][j] = oracle::of(d[i][j]);
    std::map<std::size_t, oracle::Q> qc;
    for (const auto& [p, a] : mu.coefficients()) qc[p] = oracle::of(a);
    auto plan = oracle::check_plan(qd, qc, cert.plan.flows, oracle::Q(1, 1000000000));
    CHECK(plan.feasible);
    CHECK(to_double(oracle::lipschitz_constant(qd, cert.potential)) <= 1.0 + 1e-9);
    const double dual = to_double(oracle::pairing(cert.potential, qc));
    CHECK(std::fabs(to_double(plan.cost) - dual) <= 1e-9 * std::max(1.0, cert.value));
  }
}

TEST_CASE("isometry, homogeneity and the triangle inequality") {
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    auto space = random_rational_metric(rng, 3 + rng.below(8));
    for (std::size_t x = 1; x < space.size(); ++x) {
      CHECK(free_norm(space, FreeElement::delta(x)).value == doctest::Approx(space(x, 0)));
      for (std::size_t y = 1; y < space.size(); ++y) {
        if (x == y) continue;
        CHECK(free_norm(space, el({{x, 1}, {y, -1}})).value == doctest::Approx(space(x, y)));
      }
    }
    auto mu = random_element(rng, space, 2);
    auto nu = random_element(rng, space, 2);
    const double a = free_norm(space, mu).value, b = free_norm(space, nu).value;
    CHECK(free_norm(space, mu.scaled(-2.5)).value == doctest::Approx(2.5 * a));
    CHECK(free_norm(space, mu + nu).value <= a + b + 1e-9);
  }
}

TEST_CASE("verify_certificate rejects a broken certificate") {
  auto s = m3();
  auto mu = el({{1, 1}, {2, 1}});
  auto cert = free_norm(s, mu);
  CHECK(verify_certificate(s, mu, cert).ok);
  auto bad = cert;
  bad.potential = {0, 1, 3};
  CHECK_FALSE(verify_certificate(s, mu, bad).ok);
  auto short_plan = cert;
  short_plan.plan.flows.pop_back();
  CHECK_FALSE(verify_certificate(s, mu, short_plan).ok);
}

TEST_CASE("integer_potential examples") {
  auto s = m3();
  auto ip = integer_potential(s, el({{1, 1}, {2, 1}}));
  CHECK(ip.values == std::vector<std::int64_t>{0, 1, 2});
  CHECK(ip.value == 3);

  auto single = integer_potential(s, el({{2, 1}}));
  CHECK(single.values[2] == 2);
  CHECK(single.value == 2);

  auto zero = integer_potential(s, FreeElement{});
  CHECK(zero.value == 0);

  CHECK_THROWS_AS(integer_potential(FiniteMetricSpace::create({{0, 0.5}, {0.5, 0}}), el({{1, 1}})), Error);
}

TEST_CASE("integer_potential attains the brute-force integer optimum") {
  Rng rng(44);
  for (int t = 0; t < 40; ++t) {
    auto space = random_integer_metric(rng, 2 + rng.below(5), 1 + rng.between(1, 3));
    auto mu = random_element(rng, space, 1 + rng.below(space.size() - 1));
    auto ip = integer_potential(space, mu);
    std::vector<std::vector<std::int64_t>> D(space.size(), std::vector<std::int64_t>(space.size()));
    for (std::size_t i = 0; i < space.size(); ++i)
      for (std::size_t j = 0; j < space.size(); ++j) D[i][j] = space.integer_distance(i, j);
    const auto coeffs = oracle::exact_coeffs(mu);
    CHECK(ip.value == oracle::integer_search_norm(D, coeffs));
    CHECK(ip.value == oracle::dual_vertex_norm(oracle::exact_matrix(space), coeffs));
    CHECK(oracle::lipschitz_constant(oracle::exact_matrix(space), ip.values) <= 1);
    CHECK(oracle::pairing(ip.values, coeffs) == ip.value);

    auto search = integer_potential_search(space, mu);
    CHECK(search.value == ip.value);
  }
}

TEST_CASE("integer_potential is the pointwise largest optimum") {
  Rng rng(45);
  for (int t = 0; t < 20; ++t) {
    auto space = random_integer_metric(rng, 3 + rng.below(3), 3);
    auto mu = random_element(rng, space, 2);
    auto ip = integer_potential(space, mu);
    // Raising any single value by one must break optimality or Lipschitz.
    const auto d = oracle::exact_matrix(space);
    const auto coeffs = oracle::exact_coeffs(mu);
    for (std::size_t x = 1; x < space.size(); ++x) {
      auto up = ip.values;
      ++up[x];
      CHECK((oracle::lipschitz_constant(d, up) > 1 || oracle::pairing(up, coeffs) < ip.value));
    }
  }
}

TEST_CASE("mcshane_extend") {
  auto s = m3();
  auto g = mcshane_extend(s, std::vector<std::size_t>{0, 1}, std::vector<double>{0, 1}, 3.0);
  CHECK(g(2) == 4.0);
  CHECK(g(1) == 1.0);

  auto id = mcshane_extend(s, std::vector<std::size_t>{0, 1, 2}, std::vector<double>{0, 1, 2}, 1.0);
  CHECK(id.values() == std::vector<double>{0, 1, 2});

  try {
    mcshane_extend(s, std::vector<std::size_t>{0, 1}, std::vector<double>{0, 4}, 3.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDomain);
  }

  Rng rng(9);
  for (int t = 0; t < 30; ++t) {
    auto space = random_integer_metric(rng, 4 + rng.below(8), 5);
    std::vector<std::size_t> H{0};
    for (std::size_t x = 1; x < space.size(); ++x)
      if (rng.coin()) H.push_back(x);
    // Random 3-Lipschitz data on H: a McShane envelope of random integers.
    std::vector<double> vals(H.size(), 0);
    for (std::size_t i = 1; i < H.size(); ++i) {
      double v = static_cast<double>(rng.between(-15, 15));
      for (std::size_t j = 0; j < i; ++j) {
        v = std::min(v, vals[j] + 3 * space(H[i], H[j]));
        v = std::max(v, vals[j] - 3 * space(H[i], H[j]));
      }
      vals[i] = v;
    }
    if (lip_constant(restrict(space, H), vals) > 3) continue;
    auto ext = mcshane_extend(space, H, vals, 3.0);
    CHECK(oracle::lipschitz_constant(oracle::exact_matrix(space), ext.values()) <= 3);
    for (std::size_t i = 0; i < H.size(); ++i) CHECK(ext(H[i]) == vals[i]);
  }
}

TEST_CASE("ell1_bounds") {
  auto s = m3();
  auto b = ell1_bounds(s, el({{1, 1}, {2, 1}}));
  CHECK(b.lower == 1.0);
  CHECK(b.upper == 4.0);
  CHECK(b.total_mass == 2.0);
  CHECK(b.norm == 3.0);
  CHECK(b.within);
  auto z = ell1_bounds(s, FreeElement{});
  CHECK(z.lower == 0.0);
  CHECK(z.upper == 0.0);
  CHECK(z.within);
}

TEST_CASE("restriction preserves norms") {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    auto space = random_rational_metric(rng, 4 + rng.below(6));
    std::vector<std::size_t> sub{0};
    for (std::size_t x = 1; x < space.size(); ++x)
      if (rng.coin() || sub.size() < 2) sub.push_back(x);
    std::map<std::size_t, double> big, small;
    for (std::size_t i = 1; i < sub.size(); ++i) {
      const double a = static_cast<double>(rng.between(-9, 9)) / 4.0;
      big[sub[i]] = a;
      small[i] = a;
    }
    CHECK(free_norm_exact(space, el(big)).value == free_norm_exact(restrict(space, sub), el(small)).value);
  }
}
