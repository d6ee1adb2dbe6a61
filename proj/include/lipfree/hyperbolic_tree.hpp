#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipfree/error.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/rational.hpp"
#include "lipfree/transport_norm.hpp"

namespace lipfree {

struct TreeEdge {
  std::size_t u, v;
  Rational length;
};

/// Weighted finite tree together with the node of every original point.
/// Nodes that are not the image of a point are Steiner nodes.
struct TreeEmbedding {
  std::vector<std::string> nodes;
  std::vector<TreeEdge> edges;
  std::vector<std::size_t> map;  // point index -> node index

  // Throws Error(kInvalidArgument) unless lengths are positive, the graph is
  // a tree and every mapped node exists.
  void validate() const;
  // Path lengths from `node` to every node.
  std::vector<Rational> distances_from(std::size_t node) const;
  std::size_t steiner_count() const;
};

/// Raised by tree_embed when the metric fails the four-point condition.
class FourPointError : public Error {
 public:
  FourPointError(std::string message, std::optional<QuadrupleWitness> witness)
      : Error(ErrorCode::kDomain, std::move(message)), witness_(witness) {}
  const std::optional<QuadrupleWitness>& witness() const noexcept { return witness_; }

 private:
  std::optional<QuadrupleWitness> witness_;
};

// Inserts points one at a time at their Gromov-product attachment, in exact
// rational arithmetic, then checks the isometry on all pairs.
TreeEmbedding tree_embed(const FiniteMetricSpace& space);

// Path metric of the tree restricted to the mapped points, labelled like
// `labels` (defaults to the node names).
FiniteMetricSpace tree_point_metric(const TreeEmbedding& tree);

// sum_e length(e) |mass on the far side of e from the base point|, exact.
Rational tree_cut_norm_exact(const TreeEmbedding& tree, const FreeElement& mu);
double tree_cut_norm(const TreeEmbedding& tree, const FreeElement& mu);

// Largest ultrametric below d: minimax edge weight over paths.
FiniteMetricSpace subdominant_ultrametric(const FiniteMetricSpace& space);

/// Ordered disjoint closed intervals with l_i <= r_i < l_{i+1}.
class IntervalUnion {
 public:
  static IntervalUnion create(std::vector<std::pair<Rational, Rational>> intervals);

  const std::vector<std::pair<Rational, Rational>>& intervals() const noexcept { return intervals_; }
  Rational measure() const;

 private:
  std::vector<std::pair<Rational, Rational>> intervals_;
};

struct DensityInterval {
  Rational a, b;
  Rational measure;  // of K intersected with [a, b]
  Rational density;
  std::size_t gaps_removed = 0;
};

// Removes complementary gaps, longest first (leftmost on ties), until a
// component [a, b] has density > 1 - eps. Returns the leftmost such component.
DensityInterval density_interval(const IntervalUnion& k, double eps);

struct DistortionPair {
  std::size_t x, y;         // sample indices, x in the first cell, y in the last
  Rational ratio;           // d(x,y) / |x - y|
  Rational bound;           // 2 / (n - 2)
  Rational chain_bound;     // max over consecutive cell representatives of d
  std::vector<std::size_t> representatives;
};

// Cells are [t_{j-1}, t_j) of the equidistant partition of [a, b], the last
// one closed. Lowest-indexed sample per cell. `ultrametric` is the metric on
// the sample; it must be an ultrametric with d <= |x - y|.
DistortionPair distortion_pair(const std::vector<Rational>& sample, const FiniteMetricSpace& ultrametric,
                               std::size_t n, const Rational& a, const Rational& b);

}  // namespace lipfree
