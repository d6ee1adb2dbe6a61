#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lipfree/hyperbolic_tree.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/rational.hpp"
#include "lipfree/schur_witness.hpp"
#include "lipfree/transport_norm.hpp"

namespace lipfree {

/// Seeded generator with draws that do not depend on the standard library's
/// distribution implementations, so a seed gives the same instance everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n);  // uniform on [0, n)
  std::int64_t between(std::int64_t lo, std::int64_t hi);  // uniform on [lo, hi]
  bool coin() { return below(2) == 1; }

 private:
  std::mt19937_64 engine_;
};

enum class Family { kUniformDiscrete, kIntegerMetric, kTree, kUltrametric, kBlockSequence, kConflictBlock };

std::optional<Family> parse_family(std::string_view name);
std::string_view to_string(Family family);

// Caps enforced before generation.
inline constexpr std::size_t kMaxGeneratedPoints = 512;
inline constexpr std::size_t kMaxGeneratedBlocks = 200;
inline constexpr std::int64_t kMaxGeneratedN = 64;

struct GeneratorSpec {
  Family family = Family::kIntegerMetric;
  std::size_t points = 8;   // metric families
  std::int64_t N = 4;       // largest distance for integer families
  std::size_t blocks = 20;  // block families
  std::size_t support = 3;  // points per block

  void validate() const;  // throws Error(kInvalidArgument)
};

// Distances drawn from [a, 2a] in steps of 1/den, so any draw is a metric.
FiniteMetricSpace random_uniform_discrete(Rng& rng, std::size_t n, std::int64_t a_steps = 4, std::int64_t den = 4);

// Shortest-path closure of random weights in {1..N}.
FiniteMetricSpace random_integer_metric(Rng& rng, std::size_t n, std::int64_t N);

// Random rational metric: shortest-path closure of weights in {1..max_steps}/den.
FiniteMetricSpace random_rational_metric(Rng& rng, std::size_t n, std::int64_t max_steps = 12, std::int64_t den = 4);

struct RandomTree {
  TreeEmbedding tree;  // node i is point i
  FiniteMetricSpace space;
};

// Random recursive tree, edge lengths in {1/2, 1, ..., max_half_steps/2}.
RandomTree random_tree(Rng& rng, std::size_t nodes, std::int64_t max_half_steps = 6);

// Heights of a random agglomerative merge order.
FiniteMetricSpace random_ultrametric(Rng& rng, std::size_t n);

// Coefficients k/den with k in [-max_steps, max_steps] \ {0} on `support`
// distinct non-base points.
FreeElement random_element(Rng& rng, const FiniteMetricSpace& space, std::size_t support,
                           std::int64_t max_steps = 10, std::int64_t den = 10);

struct BlockInstance {
  FiniteMetricSpace space;
  BlockSequence blocks;

  std::vector<FreeElement> items() const;  // gamma0 + gamma_n
};

// All distances in [ceil(N/2), N], so gluing never meets a conflict.
BlockInstance random_block_instance(Rng& rng, std::int64_t N, std::size_t blocks, std::size_t support);

// N = 4. The first block holds a point at value 2 that sits at distance 1
// from a light point at value -2 in every later block.
BlockInstance conflict_block_instance(Rng& rng, std::size_t blocks, std::size_t support);

IntervalUnion random_interval_union(Rng& rng, std::size_t count);

struct UltrametricSample {
  std::vector<Rational> sample;
  FiniteMetricSpace ultrametric;  // subdominant ultrametric of |x - y|
  std::size_t n;
  Rational a, b;
};

// Every cell of the n-partition of [0, 1] gets at least one point; values
// are multiples of 1/10000.
UltrametricSample random_ultrametric_sample(Rng& rng, std::size_t n);

// Euclidean metric |x - y| on a sample of reals.
FiniteMetricSpace line_metric(const std::vector<Rational>& sample);

}  // namespace lipfree
