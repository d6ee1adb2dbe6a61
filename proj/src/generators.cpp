#include "lipfree/generators.hpp"

#include <algorithm>
#include <set>

#include "lipfree/error.hpp"

namespace lipfree {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty draw range");
  // Rejection keeps the draw unbiased and independent of the platform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorCode::kInvalidArgument, "empty draw range");
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

namespace {

constexpr std::pair<Family, std::string_view> kFamilies[] = {
    {Family::kUniformDiscrete, "uniform-discrete"}, {Family::kIntegerMetric, "integer-metric"},
    {Family::kTree, "tree"},                        {Family::kUltrametric, "ultrametric"},
    {Family::kBlockSequence, "block-sequence"},     {Family::kConflictBlock, "conflict-block"},
};

Matrix shortest_path_closure(Matrix m) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m[i][j] = std::min(m[i][j], m[i][k] + m[k][j]);
    }
  }
  return m;
}

Matrix random_weights(Rng& rng, std::size_t n, std::int64_t lo, std::int64_t hi, double den) {
  Matrix m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = static_cast<double>(rng.between(lo, hi)) / den;
  }
  return m;
}

double nonzero_step(Rng& rng, std::int64_t max_steps, std::int64_t den) {
  std::int64_t k = rng.between(1, max_steps);
  if (rng.coin()) k = -k;
  return static_cast<double>(k) / static_cast<double>(den);
}

}  // namespace

std::optional<Family> parse_family(std::string_view name) {
  for (const auto& [f, n] : kFamilies) {
    if (n == name) return f;
  }
  return std::nullopt;
}

std::string_view to_string(Family family) {
  for (const auto& [f, n] : kFamilies) {
    if (f == family) return n;
  }
  return "unknown";
}

void GeneratorSpec::validate() const {
  if (points < 1 || points > kMaxGeneratedPoints) {
    throw Error(ErrorCode::kInvalidArgument, "point count must lie in [1, " + std::to_string(kMaxGeneratedPoints) + "]");
  }
  if (N < 1 || N > kMaxGeneratedN) {
    throw Error(ErrorCode::kInvalidArgument, "N must lie in [1, " + std::to_string(kMaxGeneratedN) + "]");
  }
  if (blocks < 1 || blocks > kMaxGeneratedBlocks) {
    throw Error(ErrorCode::kInvalidArgument, "block count must lie in [1, " + std::to_string(kMaxGeneratedBlocks) + "]");
  }
  if (support < 1 || support > 16) throw Error(ErrorCode::kInvalidArgument, "block support must lie in [1, 16]");
  if (family == Family::kBlockSequence && N < 2) {
    throw Error(ErrorCode::kInvalidArgument, "block-sequence needs N >= 2");
  }
}

FiniteMetricSpace random_uniform_discrete(Rng& rng, std::size_t n, std::int64_t a_steps, std::int64_t den) {
  return FiniteMetricSpace::create(random_weights(rng, n, a_steps, 2 * a_steps, static_cast<double>(den)));
}

FiniteMetricSpace random_integer_metric(Rng& rng, std::size_t n, std::int64_t N) {
  return FiniteMetricSpace::create(shortest_path_closure(random_weights(rng, n, 1, N, 1.0)));
}

FiniteMetricSpace random_rational_metric(Rng& rng, std::size_t n, std::int64_t max_steps, std::int64_t den) {
  return FiniteMetricSpace::create(
      shortest_path_closure(random_weights(rng, n, 1, max_steps, static_cast<double>(den))));
}

RandomTree random_tree(Rng& rng, std::size_t nodes, std::int64_t max_half_steps) {
  if (nodes < 1) throw Error(ErrorCode::kInvalidArgument, "a tree needs at least one node");
  TreeEmbedding tree;
  for (std::size_t i = 0; i < nodes; ++i) {
    tree.nodes.push_back(std::to_string(i));
    tree.map.push_back(i);
    if (i > 0) {
      const std::size_t parent = static_cast<std::size_t>(rng.below(i));
      tree.edges.push_back({parent, i, make_rational(rng.between(1, max_half_steps), 2)});
    }
  }
  FiniteMetricSpace space = tree_point_metric(tree);
  return {std::move(tree), std::move(space)};
}

FiniteMetricSpace random_ultrametric(Rng& rng, std::size_t n) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});
  Matrix m(n, std::vector<double>(n, 0.0));
  std::int64_t height = 0;
  while (clusters.size() > 1) {
    height += rng.between(1, 3);
    const std::size_t i = static_cast<std::size_t>(rng.below(clusters.size()));
    std::size_t j = static_cast<std::size_t>(rng.below(clusters.size() - 1));
    if (j >= i) ++j;
    for (std::size_t x : clusters[i]) {
      for (std::size_t y : clusters[j]) m[x][y] = m[y][x] = static_cast<double>(height);
    }
    clusters[i].insert(clusters[i].end(), clusters[j].begin(), clusters[j].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
  }
  return FiniteMetricSpace::create(m);
}

FreeElement random_element(Rng& rng, const FiniteMetricSpace& space, std::size_t support, std::int64_t max_steps,
                           std::int64_t den) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 1; i < space.size(); ++i) pool.push_back(i);
  support = std::min(support, pool.size());
  std::map<std::size_t, double> coeffs;
  for (std::size_t k = 0; k < support; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(rng.below(pool.size() - k));
    std::swap(pool[k], pool[pick]);
    coeffs.emplace(pool[k], nonzero_step(rng, max_steps, den));
  }
  return FreeElement(std::move(coeffs));
}

std::vector<FreeElement> BlockInstance::items() const {
  std::vector<FreeElement> out;
  for (std::size_t n = 0; n < blocks.blocks.size(); ++n) out.push_back(blocks.combined(n));
  return out;
}

BlockInstance random_block_instance(Rng& rng, std::int64_t N, std::size_t blocks, std::size_t support) {
  if (N < 2) throw Error(ErrorCode::kInvalidArgument, "block instances need N >= 2");
  BlockSequence bs;
  std::size_t next = 1;
  auto take = [&](std::size_t count) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < count; ++i) s.push_back(next++);
    return s;
  };
  bs.supports.push_back(take(2));
  for (std::size_t n = 0; n < blocks; ++n) {
    bs.supports.push_back(take(static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(support)))));
  }
  const std::int64_t lo = (N + 1) / 2;
  FiniteMetricSpace space = FiniteMetricSpace::create(random_weights(rng, next, lo, N, 1.0));

  std::map<std::size_t, double> g0;
  for (std::size_t p : bs.supports[0]) g0.emplace(p, static_cast<double>(rng.coin() ? 3 : 4) * (rng.coin() ? 1 : -1));
  bs.gamma0 = FreeElement(std::move(g0));
  for (std::size_t n = 0; n < blocks; ++n) {
    std::map<std::size_t, double> c;
    for (std::size_t p : bs.supports[n + 1]) c.emplace(p, nonzero_step(rng, 10, 10));
    bs.blocks.push_back(FreeElement(std::move(c)));
  }
  bs.validate();
  return {std::move(space), std::move(bs)};
}

BlockInstance conflict_block_instance(Rng& rng, std::size_t blocks, std::size_t support) {
  enum class Role { kBase, kAnchor, kHigh, kLow, kGeneral };
  std::vector<Role> role{Role::kBase, Role::kAnchor};
  std::vector<std::size_t> owner{0, 0};  // block + 1 for block points, 0 otherwise
  BlockSequence bs;
  bs.supports.push_back({1});
  for (std::size_t n = 0; n < blocks; ++n) {
    std::vector<std::size_t> s{role.size()};
    role.push_back(n == 0 ? Role::kHigh : Role::kLow);
    owner.push_back(n + 1);
    const std::int64_t generals = rng.between(0, static_cast<std::int64_t>(support) - 1);
    for (std::int64_t g = 0; g < generals; ++g) {
      s.push_back(role.size());
      role.push_back(Role::kGeneral);
      owner.push_back(n + 1);
    }
    bs.supports.push_back(std::move(s));
  }

  const std::size_t size = role.size();
  Matrix m(size, std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      Role a = role[i], b = role[j];
      if (a > b) std::swap(a, b);
      double d = 2.0;
      if (a == Role::kBase) {
        d = 2.0;
      } else if (a == Role::kHigh && b == Role::kLow) {
        d = 1.0;
      } else if (a == Role::kLow && b == Role::kLow) {
        d = 2.0;
      } else if (a == Role::kHigh || a == Role::kLow || b == Role::kHigh || b == Role::kLow) {
        d = 4.0;
      } else if (a == Role::kGeneral && owner[i] == owner[j]) {
        d = static_cast<double>(rng.between(1, 2));
      }
      m[i][j] = m[j][i] = d;
    }
  }
  FiniteMetricSpace space = FiniteMetricSpace::create(m);

  bs.gamma0 = FreeElement({{1, 3.0}});
  for (std::size_t n = 0; n < blocks; ++n) {
    std::map<std::size_t, double> c;
    for (std::size_t p : bs.supports[n + 1]) {
      if (role[p] == Role::kHigh) {
        c.emplace(p, static_cast<double>(rng.between(5, 10)) / 10.0);
      } else if (role[p] == Role::kLow) {
        c.emplace(p, -static_cast<double>(rng.between(1, 3)) / 100.0);
      } else {
        c.emplace(p, nonzero_step(rng, 10, 10));
      }
    }
    bs.blocks.push_back(FreeElement(std::move(c)));
  }
  bs.validate();
  return {std::move(space), std::move(bs)};
}

IntervalUnion random_interval_union(Rng& rng, std::size_t count) {
  if (count < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one interval");
  constexpr long kDen = 60;
  const std::int64_t span = kDen * static_cast<std::int64_t>(count);
  std::set<std::int64_t> ends;
  while (ends.size() < 2 * count) ends.insert(rng.between(0, span));
  std::vector<std::int64_t> e(ends.begin(), ends.end());
  std::vector<std::pair<Rational, Rational>> iv;
  for (std::size_t i = 0; i < count; ++i) {
    iv.emplace_back(make_rational(e[2 * i], kDen), make_rational(e[2 * i + 1], kDen));
  }
  return IntervalUnion::create(std::move(iv));
}

FiniteMetricSpace line_metric(const std::vector<Rational>& sample) {
  const std::size_t n = sample.size();
  Matrix m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = to_double(Rational(abs(sample[i] - sample[j])));
  }
  return FiniteMetricSpace::create(m);
}

UltrametricSample random_ultrametric_sample(Rng& rng, std::size_t n) {
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "the partition needs n >= 3 cells");
  constexpr std::int64_t kDen = 10000;
  const auto cells = static_cast<std::int64_t>(n);
  std::set<std::int64_t> numerators;
  for (std::int64_t j = 0; j < cells; ++j) {
    const std::int64_t lo = (j * kDen + cells - 1) / cells;
    const std::int64_t hi = j + 1 == cells ? kDen : ((j + 1) * kDen + cells - 1) / cells - 1;
    const std::int64_t k = rng.between(1, 3);
    for (std::int64_t i = 0; i < k; ++i) numerators.insert(rng.between(lo, hi));
  }
  std::vector<std::int64_t> order(numerators.begin(), numerators.end());
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
  }
  std::vector<Rational> sample;
  for (std::int64_t v : order) sample.push_back(make_rational(v, kDen));
  FiniteMetricSpace um = subdominant_ultrametric(line_metric(sample));
  return {std::move(sample), std::move(um), n, Rational(0), Rational(1)};
}

}  // namespace lipfree
