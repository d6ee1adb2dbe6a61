#include <doctest.h>

#include "lipfree/error.hpp"
#include "lipfree/generators.hpp"
#include "lipfree/hyperbolic_tree.hpp"
#include "oracles.hpp"

using namespace lipfree;

namespace {

FreeElement el(std::map<std::size_t, double> c) { return FreeElement(std::move(c)); }

FiniteMetricSpace path3() { return FiniteMetricSpace::create({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}); }

std::vector<Rational> tenths() {
  std::vector<Rational> s;
  for (int i = 0; i <= 10; ++i) s.push_back(make_rational(i, 10));
  return s;
}

}  // namespace

TEST_CASE("tree_embed on a path needs no Steiner nodes") {
  auto t = tree_embed(path3());
  CHECK(t.nodes.size() == 3);
  CHECK(t.edges.size() == 2);
  CHECK(t.steiner_count() == 0);
  for (const auto& e : t.edges) CHECK(e.length == 1);
}

TEST_CASE("tree_embed on an equilateral quadruple builds a star") {
  Matrix d(4, std::vector<double>(4, 2.0));
  for (int i = 0; i < 4; ++i) d[i][i] = 0;
  auto t = tree_embed(FiniteMetricSpace::create(d));
  CHECK(t.steiner_count() == 1);
  CHECK(t.nodes.size() == 5);
  for (const auto& e : t.edges) CHECK(e.length == 1);
}

TEST_CASE("tree_embed rejects a four-cycle with a witness") {
  auto cycle = FiniteMetricSpace::create({{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}});
  try {
    tree_embed(cycle);
    FAIL("expected an error");
  } catch (const FourPointError& e) {
    CHECK(e.code() == ErrorCode::kDomain);
    REQUIRE(e.witness());
    CHECK(e.witness()->slack > 0);
  }
}

TEST_CASE("tree_embed is an isometry on generated trees and ultrametrics") {
  Rng rng(13);
  for (int t = 0; t < 40; ++t) {
    FiniteMetricSpace space = t % 2 ? random_ultrametric(rng, 2 + rng.below(10))
                                    : random_tree(rng, 2 + rng.below(11)).space;
    auto tree = tree_embed(space);
    tree.validate();
    for (std::size_t i = 0; i < space.size(); ++i) {
      auto from = tree.distances_from(tree.map[i]);
      for (std::size_t j = 0; j < space.size(); ++j) CHECK(from[tree.map[j]] == space.exact(i, j));
    }
    CHECK(oracle::exact_matrix(tree_point_metric(tree)) == oracle::exact_matrix(space));
  }
}

TEST_CASE("tree_cut_norm on a path") {
  auto t = tree_embed(path3());
  CHECK(tree_cut_norm(t, el({{2, 1}})) == 2.0);
  CHECK(tree_cut_norm(t, el({{1, 1}, {2, -1}})) == 1.0);
  CHECK(tree_cut_norm(t, FreeElement{}) == 0.0);
  CHECK_THROWS_AS(tree_cut_norm(t, el({{7, 1}})), Error);
}

TEST_CASE("tree_cut_norm equals the dual vertex optimum on small trees") {
  Rng rng(77);
  for (int t = 0; t < 40; ++t) {
    auto rt = random_tree(rng, 2 + rng.below(5));
    auto mu = random_element(rng, rt.space, 1 + rng.below(rt.space.size() - 1));
    CHECK(tree_cut_norm_exact(rt.tree, mu) ==
          oracle::dual_vertex_norm(oracle::exact_matrix(rt.space), oracle::exact_coeffs(mu)));
  }
}

TEST_CASE("subdominant_ultrametric") {
  auto line = line_metric(tenths());
  auto sub = subdominant_ultrametric(line);
  for (std::size_t i = 0; i < sub.size(); ++i)
    for (std::size_t j = 0; j < sub.size(); ++j) CHECK(sub.exact(i, j) == (i == j ? Rational(0) : Rational(1, 10)));

  auto two = FiniteMetricSpace::create({{0, 3}, {3, 0}});
  CHECK(subdominant_ultrametric(two).matrix() == two.matrix());

  Rng rng(6);
  for (int t = 0; t < 30; ++t) {
    auto u = random_ultrametric(rng, 2 + rng.below(8));
    CHECK(oracle::exact_matrix(subdominant_ultrametric(u)) == oracle::exact_matrix(u));
    auto m = random_rational_metric(rng, 2 + rng.below(8));
    auto s = subdominant_ultrametric(m);
    const auto sd = oracle::exact_matrix(s);
    CHECK(sd == oracle::minimax_closure(oracle::exact_matrix(m)));
    CHECK(oracle::is_ultrametric(sd));
    CHECK(check_ultrametric(s).ok);
  }
}

TEST_CASE("IntervalUnion validation and measure") {
  auto k = IntervalUnion::create({{0, Rational(1, 3)}, {Rational(2, 3), 1}});
  CHECK(k.measure() == Rational(2, 3));
  CHECK_THROWS_AS(IntervalUnion::create({{1, 0}}), Error);
  CHECK_THROWS_AS(IntervalUnion::create({{0, 2}, {1, 3}}), Error);
}

TEST_CASE("density_interval examples") {
  auto k = IntervalUnion::create({{0, Rational(1, 3)}, {Rational(2, 3), 1}});
  auto d = density_interval(k, 0.25);
  CHECK(d.a == 0);
  CHECK(d.b == Rational(1, 3));
  CHECK(d.density == 1);

  auto full = density_interval(IntervalUnion::create({{0, 1}}), 0.1);
  CHECK(full.a == 0);
  CHECK(full.b == 1);
  CHECK(full.gaps_removed == 0);

  CHECK_THROWS_AS(density_interval(IntervalUnion::create({{0, 0}}), 0.5), Error);
  CHECK_THROWS_AS(density_interval(k, 0.0), Error);
  CHECK_THROWS_AS(density_interval(k, 1.0), Error);
}

TEST_CASE("density_interval output satisfies the density inequality exactly") {
  Rng rng(19);
  for (int t = 0; t < 50; ++t) {
    auto k = random_interval_union(rng, 1 + rng.below(12));
    const double eps = 0.05 * static_cast<double>(1 + rng.below(18));
    auto d = density_interval(k, eps);
    const Rational m = oracle::measure_within(k.intervals(), d.a, d.b);
    CHECK(m == d.measure);
    CHECK(d.b > d.a);
    CHECK(m > (1 - decimal_rational(eps)) * (d.b - d.a));
  }
}

TEST_CASE("distortion_pair examples") {
  auto s = tenths();
  auto u = subdominant_ultrametric(line_metric(s));
  auto p = distortion_pair(s, u, 10, 0, 1);
  CHECK(p.ratio == Rational(1, 9));
  CHECK(p.bound == Rational(1, 4));
  CHECK(p.x == 0);
  CHECK(p.y == 9);

  auto three = distortion_pair(s, u, 3, 0, 1);
  CHECK(three.ratio <= 2);

  // Three interior samples at cell centres of the 4-partition plus the ends.
  std::vector<Rational> c{Rational(1, 8), Rational(3, 8), Rational(5, 8), Rational(7, 8)};
  auto four = distortion_pair(c, subdominant_ultrametric(line_metric(c)), 4, 0, 1);
  CHECK(four.ratio <= 1);
}

TEST_CASE("distortion_pair hypothesis errors") {
  std::vector<Rational> s{0, Rational(1, 2), 1};
  auto u = subdominant_ultrametric(line_metric(s));
  CHECK_THROWS_AS(distortion_pair(s, u, 10, 0, 1), Error);  // empty cells
  CHECK_THROWS_AS(distortion_pair(s, line_metric(s), 3, 0, 1), Error);  // not ultrametric
  CHECK_THROWS_AS(distortion_pair(s, u, 2, 0, 1), Error);
}

TEST_CASE("distortion_pair ratio bound on generated samples") {
  Rng rng(29);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 3 + rng.below(15);
    auto us = random_ultrametric_sample(rng, n);
    auto p = distortion_pair(us.sample, us.ultrametric, n, us.a, us.b);
    const Rational ratio = us.ultrametric.exact(p.x, p.y) / abs(us.sample[p.x] - us.sample[p.y]);
    CHECK(ratio == p.ratio);
    CHECK(ratio <= make_rational(2, static_cast<long>(n) - 2));
    const Rational width = (us.b - us.a) / static_cast<long>(n);
    CHECK(us.sample[p.x] < us.a + width);
    CHECK(us.sample[p.y] >= us.b - width);
  }
}
