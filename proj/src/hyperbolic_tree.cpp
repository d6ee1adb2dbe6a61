#include "lipfree/hyperbolic_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace lipfree {
namespace {

struct Adjacent {
  std::size_t node;
  std::size_t edge;
};

std::vector<std::vector<Adjacent>> adjacency(const TreeEmbedding& tree) {
  std::vector<std::vector<Adjacent>> adj(tree.nodes.size());
  for (std::size_t e = 0; e < tree.edges.size(); ++e) {
    adj[tree.edges[e].u].push_back({tree.edges[e].v, e});
    adj[tree.edges[e].v].push_back({tree.edges[e].u, e});
  }
  return adj;
}

// Parent node and edge of every node in a traversal rooted at `root`, plus
// the visiting order.
struct Rooted {
  std::vector<std::size_t> parent, parent_edge, order;
};

Rooted root_at(const TreeEmbedding& tree, std::size_t root) {
  const auto adj = adjacency(tree);
  const std::size_t n = tree.nodes.size();
  Rooted r{std::vector<std::size_t>(n, n), std::vector<std::size_t>(n, tree.edges.size()), {}};
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    r.order.push_back(u);
    for (const auto& a : adj[u]) {
      if (seen[a.node]) continue;
      seen[a.node] = 1;
      r.parent[a.node] = u;
      r.parent_edge[a.node] = a.edge;
      stack.push_back(a.node);
    }
  }
  return r;
}

}  // namespace

void TreeEmbedding::validate() const {
  if (nodes.empty()) throw Error(ErrorCode::kInvalidArgument, "tree has no nodes");
  if (edges.size() + 1 != nodes.size()) {
    throw Error(ErrorCode::kInvalidArgument, "a tree needs exactly one edge fewer than nodes");
  }
  for (const auto& e : edges) {
    if (e.u >= nodes.size() || e.v >= nodes.size()) throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    if (e.u == e.v) throw Error(ErrorCode::kInvalidArgument, "tree edge is a loop");
    if (e.length <= 0) throw Error(ErrorCode::kInvalidArgument, "tree edge lengths must be positive");
  }
  if (root_at(*this, 0).order.size() != nodes.size()) {
    throw Error(ErrorCode::kInvalidArgument, "tree is not connected");
  }
  if (map.empty()) throw Error(ErrorCode::kInvalidArgument, "tree maps no points");
  for (std::size_t node : map) {
    if (node >= nodes.size()) throw Error(ErrorCode::kInvalidArgument, "mapped node out of range");
  }
}

std::vector<Rational> TreeEmbedding::distances_from(std::size_t node) const {
  const Rooted r = root_at(*this, node);
  std::vector<Rational> dist(nodes.size(), Rational(0));
  for (std::size_t u : r.order) {
    if (u != node) dist[u] = dist[r.parent[u]] + edges[r.parent_edge[u]].length;
  }
  return dist;
}

std::size_t TreeEmbedding::steiner_count() const {
  std::vector<char> mapped(nodes.size(), 0);
  for (std::size_t node : map) {
    if (node < nodes.size()) mapped[node] = 1;
  }
  return static_cast<std::size_t>(std::count(mapped.begin(), mapped.end(), 0));
}

TreeEmbedding tree_embed(const FiniteMetricSpace& space) {
  std::optional<QuadrupleWitness> witness;
  if (space.size() <= kQuadrupleScanCap) {
    FourPointCheck check = check_four_point(space);
    if (!check.ok) {
      const auto& w = *check.witness;
      std::ostringstream msg;
      msg << "four-point condition fails at (" << space.label(w.x) << ", " << space.label(w.y) << ", "
          << space.label(w.z) << ", " << space.label(w.u) << ")";
      throw FourPointError(msg.str(), check.witness);
    }
  }

  TreeEmbedding tree;
  tree.nodes.push_back(space.label(0));
  tree.map.push_back(0);
  for (std::size_t x = 1; x < space.size(); ++x) {
    // Projection of x onto the current subtree: the point on a path from the
    // base point at distance max_b (x|b)_0 from it.
    std::size_t target = 0;
    Rational reach = 0;
    for (std::size_t b = 1; b < x; ++b) {
      Rational gromov = (space.exact(x, 0) + space.exact(b, 0) - space.exact(x, b)) / 2;
      if (gromov > reach) {
        reach = gromov;
        target = b;
      }
    }
    const Rational pendant = space.exact(x, 0) - reach;
    if (pendant < 0) throw FourPointError("point cannot be attached to the tree", witness);

    // Walk from the target's node up to the base node, looking for the node or
    // edge at distance `reach` from the base.
    const Rooted r = root_at(tree, tree.map[0]);
    std::vector<std::size_t> path;  // base -> target node
    for (std::size_t u = tree.map[target]; u != tree.map[0]; u = r.parent[u]) path.push_back(u);
    path.push_back(tree.map[0]);
    std::reverse(path.begin(), path.end());

    std::size_t attach = tree.nodes.size();
    Rational along = 0;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (along == reach) {
        attach = path[i];
        break;
      }
      if (i + 1 == path.size()) break;
      const std::size_t e = r.parent_edge[path[i + 1]];
      const Rational next = along + tree.edges[e].length;
      if (reach < next) {
        // Split the edge at distance reach - along from path[i].
        const std::size_t mid = tree.nodes.size();
        tree.nodes.push_back(pendant == 0 ? space.label(x) : std::string("steiner"));
        const TreeEdge old = tree.edges[e];
        const std::size_t far = old.u == path[i] ? old.v : old.u;
        tree.edges[e] = {path[i], mid, reach - along};
        tree.edges.push_back({mid, far, next - reach});
        attach = mid;
        break;
      }
      along = next;
    }
    if (attach == tree.nodes.size()) throw FourPointError("point cannot be attached to the tree", witness);

    if (pendant == 0) {
      // x sits on the tree already: at a fresh split node or a Steiner node.
      if (std::find(tree.map.begin(), tree.map.end(), attach) != tree.map.end()) {
        throw FourPointError("two points share a tree node", witness);
      }
      tree.nodes[attach] = space.label(x);
      tree.map.push_back(attach);
    } else {
      const std::size_t leaf = tree.nodes.size();
      tree.nodes.push_back(space.label(x));
      tree.edges.push_back({attach, leaf, pendant});
      tree.map.push_back(leaf);
    }
  }

  {
    std::vector<char> mapped(tree.nodes.size(), 0);
    for (std::size_t node : tree.map) mapped[node] = 1;
    std::size_t k = 0;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      if (!mapped[i]) tree.nodes[i] = "steiner-" + std::to_string(k++);
    }
  }

  tree.validate();
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto dist = tree.distances_from(tree.map[i]);
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      if (dist[tree.map[j]] != space.exact(i, j)) {
        throw FourPointError("tree path length differs from the metric between " + space.label(i) + " and " +
                                 space.label(j),
                             witness);
      }
    }
  }
  return tree;
}

FiniteMetricSpace tree_point_metric(const TreeEmbedding& tree) {
  tree.validate();
  const std::size_t n = tree.map.size();
  Matrix m(n, std::vector<double>(n, 0.0));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(tree.nodes[tree.map[i]]);
    const auto dist = tree.distances_from(tree.map[i]);
    for (std::size_t j = 0; j < n; ++j) m[i][j] = to_double(dist[tree.map[j]]);
  }
  return FiniteMetricSpace::create(std::move(labels), m);
}

Rational tree_cut_norm_exact(const TreeEmbedding& tree, const FreeElement& mu) {
  tree.validate();
  if (!mu.empty() && mu.max_index() >= tree.map.size()) {
    throw Error(ErrorCode::kInvalidArgument, "element has support outside the mapped points");
  }
  const Rooted r = root_at(tree, tree.map[0]);
  std::vector<Rational> mass(tree.nodes.size(), Rational(0));
  for (const auto& [p, a] : mu.coefficients()) mass[tree.map[p]] += decimal_rational(a);
  Rational total = 0;
  for (std::size_t i = r.order.size(); i-- > 1;) {
    const std::size_t u = r.order[i];
    total += tree.edges[r.parent_edge[u]].length * abs(mass[u]);
    mass[r.parent[u]] += mass[u];
  }
  return total;
}

double tree_cut_norm(const TreeEmbedding& tree, const FreeElement& mu) {
  return to_double(tree_cut_norm_exact(tree, mu));
}

FiniteMetricSpace subdominant_ultrametric(const FiniteMetricSpace& space) {
  Matrix u = space.matrix();
  const std::size_t n = space.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) u[i][j] = std::min(u[i][j], std::max(u[i][k], u[k][j]));
    }
  }
  return FiniteMetricSpace::create(space.labels(), u);
}

// ---------------------------------------------------------------------------
// Interval unions

IntervalUnion IntervalUnion::create(std::vector<std::pair<Rational, Rational>> intervals) {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].first > intervals[i].second) {
      throw Error(ErrorCode::kInvalidArgument, "interval " + std::to_string(i) + " has l > r");
    }
    if (i > 0 && !(intervals[i - 1].second < intervals[i].first)) {
      throw Error(ErrorCode::kInvalidArgument, "intervals must be ordered and disjoint");
    }
  }
  IntervalUnion k;
  k.intervals_ = std::move(intervals);
  return k;
}

Rational IntervalUnion::measure() const {
  Rational m = 0;
  for (const auto& [l, r] : intervals_) m += r - l;
  return m;
}

DensityInterval density_interval(const IntervalUnion& k, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::kInvalidArgument, "epsilon must lie in (0,1)");
  if (k.measure() <= 0) throw Error(ErrorCode::kDomain, "interval union has measure zero");
  const auto& iv = k.intervals();
  const Rational threshold = Rational(1) - decimal_rational(eps);

  // Gap i lies between intervals i and i + 1.
  std::vector<std::size_t> gaps(iv.size() - 1);
  std::iota(gaps.begin(), gaps.end(), 0);
  std::stable_sort(gaps.begin(), gaps.end(), [&](std::size_t a, std::size_t b) {
    return iv[a + 1].first - iv[a].second > iv[b + 1].first - iv[b].second;
  });
  std::vector<char> removed(gaps.size(), 0);

  for (std::size_t step = 0; step <= gaps.size(); ++step) {
    if (step > 0) removed[gaps[step - 1]] = 1;
    std::size_t start = 0;
    for (std::size_t i = 0; i < iv.size(); ++i) {
      if (i + 1 < iv.size() && !removed[i]) continue;
      const Rational a = iv[start].first, b = iv[i].second;
      Rational measure = 0;
      for (std::size_t j = start; j <= i; ++j) measure += iv[j].second - iv[j].first;
      if (b > a) {
        const Rational density = measure / (b - a);
        if (density > threshold) return {a, b, measure, density, step};
      }
      start = i + 1;
    }
  }
  throw Error(ErrorCode::kVerificationFailed, "no component reached the requested density");
}

DistortionPair distortion_pair(const std::vector<Rational>& sample, const FiniteMetricSpace& ultrametric,
                               std::size_t n, const Rational& a, const Rational& b) {
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "the partition needs n >= 3 cells");
  if (!(a < b)) throw Error(ErrorCode::kInvalidArgument, "interval must satisfy a < b");
  if (sample.size() != ultrametric.size()) {
    throw Error(ErrorCode::kInvalidArgument, "sample and metric sizes differ");
  }
  const auto um = check_ultrametric(ultrametric);
  if (!um.ok) {
    const auto& w = *um.witness;
    throw Error(ErrorCode::kDomain, "metric is not an ultrametric at (" + std::to_string(w.x) + ", " +
                                        std::to_string(w.y) + ", " + std::to_string(w.z) + ")");
  }
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      if (ultrametric.exact(i, j) > abs(sample[i] - sample[j])) {
        throw Error(ErrorCode::kDomain, "d exceeds |x - y| at sample pair (" + std::to_string(i) + ", " +
                                            std::to_string(j) + ")");
      }
    }
  }

  const Rational h = (b - a) / static_cast<long>(n);
  std::vector<std::size_t> rep(n, sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const Rational& s = sample[i];
    if (s < a || s > b) continue;
    const Rational q = (s - a) / h;
    mpz_class cell_z;
    mpz_fdiv_q(cell_z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    std::size_t cell = std::min<std::size_t>(n - 1, cell_z.get_ui());
    if (rep[cell] == sample.size()) rep[cell] = i;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (rep[j] == sample.size()) {
      throw Error(ErrorCode::kDomain, "cell " + std::to_string(j + 1) + " of the partition contains no sample point");
    }
  }

  DistortionPair out;
  out.x = rep.front();
  out.y = rep.back();
  out.representatives = rep;
  out.bound = make_rational(2, static_cast<long>(n) - 2);
  out.chain_bound = 0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    out.chain_bound = std::max(out.chain_bound, ultrametric.exact(rep[j], rep[j + 1]));
  }
  const Rational dxy = ultrametric.exact(out.x, out.y);
  out.ratio = dxy / abs(sample[out.x] - sample[out.y]);
  if (dxy > out.chain_bound || out.chain_bound > 2 * h || !(out.ratio < out.bound)) {
    throw Error(ErrorCode::kVerificationFailed, "distortion bound failed its re-check");
  }
  return out;
}

}  // namespace lipfree
