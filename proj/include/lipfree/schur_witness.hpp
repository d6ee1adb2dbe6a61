#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lipfree/metric_space.hpp"
#include "lipfree/transport_norm.hpp"

namespace lipfree {

inline constexpr std::size_t kSubsequenceCap = 16;

/// Finite prefix of a bounded sequence in the free space over `space`.
class ElementSequence {
 public:
  ElementSequence(FiniteMetricSpace space, std::vector<FreeElement> items);

  const FiniteMetricSpace& space() const noexcept { return space_; }
  const std::vector<FreeElement>& items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  double bound() const noexcept { return bound_; }  // max_n ||mu_n||

 private:
  FiniteMetricSpace space_;
  std::vector<FreeElement> items_;
  double bound_ = 0.0;
};

// gamma0 lives on supports[0] = F_0 and blocks[n] on supports[n + 1] = F_{n+1}.
struct BlockSequence {
  FreeElement gamma0;
  std::vector<FreeElement> blocks;
  std::vector<std::vector<std::size_t>> supports;

  // Throws Error(kInvalidArgument) unless the supports are pairwise
  // disjoint, avoid the base point and contain their element's support.
  void validate() const;
  FreeElement combined(std::size_t n) const { return gamma0 + blocks.at(n); }
};

// All finite proxies below take "tail from n" for every n except the last
// index and take the minimum over those tails.

double osc_ca(const ElementSequence& seq);

// Scalar oscillation of (t_n) under the same proxy.
double scalar_oscillation(const std::vector<double>& values);

struct DeBounds {
  double lower;
  double upper;
  std::optional<std::size_t> best_candidate;
};

// Candidates are rescaled to f / max(1, L(f)) before use.
DeBounds de_bounds(const ElementSequence& seq, const std::vector<LipschitzFunction>& candidates);

// Minimum of osc_ca over all subsequences with at least min_len terms.
double wca_bruteforce(const ElementSequence& seq, std::size_t min_len);

struct GlidingHump {
  BlockSequence blocks;
  std::vector<std::size_t> items;        // source item of each block
  std::vector<double> residuals;         // ||mu_n restricted off F_0 u F_n||
  std::vector<double> limit_deviations;  // ||(mu_n - mu) restricted to F_0||
  FreeElement limit;                     // empirical pointwise limit mu
  std::vector<std::size_t> consensus_points;  // coordinates settled by plurality
  double epsilon = 0.0;
};

// Throws Error(kDomain) with the smallest epsilon found by doubling when
// fewer than three items can be kept.
GlidingHump gliding_hump(const ElementSequence& seq, double epsilon);

struct ConflictTriple {
  std::int64_t u, v, w;
  friend auto operator<=>(const ConflictTriple&, const ConflictTriple&) = default;
};

struct DroppedSet {
  std::size_t m, n;  // block positions (into BlockSequence::blocks)
  ConflictTriple triple;
  std::vector<std::size_t> points;
  double mass;
};

struct ConflictPair {
  std::size_t x, y;  // x in F_m, y in F_n
  std::size_t m, n;
  ConflictTriple triple;
};

struct WitnessOptions {
  double c = 0.0;                  // require min ||gamma0 + gamma_n|| > c
  std::optional<double> epsilon;   // dropped-mass budget; default 0.05 min norm
};

struct WitnessCertificate {
  LipschitzFunction g;
  double lip_g = 0.0;
  std::vector<std::size_t> retained;   // positions into BlockSequence::blocks
  std::vector<double> values;          // <g, gamma0 + gamma_n>
  std::vector<double> norm_levels;     // ||gamma0 + gamma_n||
  std::vector<double> block_dropped;   // dropped coefficient mass per block
  double slack = 0.0;
  double dropped_mass = 0.0;
};

struct WitnessDiagnostics {
  std::int64_t N = 0;
  std::int64_t offset = 0;  // every f_n takes values in {offset, ..., offset + N}
  double epsilon = 0.0;
  std::vector<std::map<std::size_t, std::int64_t>> f_table;  // f_n on {0} u F_0 u F_n, per block
  std::vector<double> block_norms;                 // ||gamma0 + gamma_n|| from the integer solves
  std::vector<std::map<ConflictTriple, std::vector<std::size_t>>> stabilized_u;  // U_{m,x} per stabilized block
  std::vector<std::size_t> pigeonhole_class;
  std::vector<std::size_t> stabilized;
  std::vector<ConflictTriple> conflict_set;   // A
  std::vector<ConflictTriple> active_set;     // triples with non-empty U-sets
  std::vector<DroppedSet> dropped;
  std::vector<std::size_t> H;
  std::vector<ConflictPair> offending;        // conflicts left after gluing
  std::vector<std::size_t> verification_drops;
  bool disjointness_ok = true;
  bool slack_chain_ok = true;
  bool conflict_bound_ok = true;
};

struct WitnessResult {
  bool success = false;
  std::string message;
  std::optional<WitnessCertificate> certificate;
  WitnessDiagnostics diagnostics;
};

// Builds a 3-Lipschitz g with <g, gamma0 + gamma_n> close to the norm on a
// retained subsequence. Needs an integer metric and at least two blocks.
WitnessResult glue_witness(const FiniteMetricSpace& space, const BlockSequence& blocks,
                           const WitnessOptions& options = {});

struct SchurReport {
  double ca = 0.0;
  double de_lower = 0.0;
  double de_upper = 0.0;
  std::optional<double> wca_estimate;
  std::string wde_note;
  // max over retained items of ||mu_n|| / <g/3, mu_n>.
  std::optional<double> ratio_certified;
  std::vector<std::size_t> retained_items;
  std::vector<double> item_norms;
  std::vector<double> item_pairings;  // <g/3, mu_n>
  std::string proxy_note;
  std::string limit_note;
};

struct SchurCertificate {
  SchurReport report;
  std::optional<GlidingHump> hump;
  std::optional<WitnessResult> witness;
  bool trivial = false;
  bool success = false;
  std::string message;
};

// Integer metrics only (apply round_metric first otherwise).
SchurCertificate schur_certificate(const ElementSequence& seq, double epsilon);

}  // namespace lipfree
