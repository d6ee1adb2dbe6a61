#include "lipfree/schur_witness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

#include "lipfree/error.hpp"

namespace lipfree {
namespace {

void check_on_space(const FiniteMetricSpace& space, const FreeElement& mu) {
  if (!mu.empty() && mu.max_index() >= space.size()) {
    throw Error(ErrorCode::kInvalidArgument, "element is not supported on the space");
  }
}

Rational exact_norm(const FiniteMetricSpace& space, const FreeElement& mu) {
  return free_norm_exact(space, mu).value;
}

// min over s in [0, K-2] of max_{s <= k < l} D(k, l); zero for K < 2.
template <class T, class D>
T tail_oscillation(std::size_t count, D dist) {
  if (count < 2) return T(0);
  T diam(0);
  T best(0);
  for (std::size_t s = count - 1; s-- > 0;) {
    for (std::size_t l = s + 1; l < count; ++l) {
      T d = dist(s, l);
      if (d > diam) diam = d;
    }
    if (s == count - 2 || diam < best) best = diam;
  }
  return best;
}

// Pairwise norms ||mu_k - mu_l||, exact on integer metrics.
struct PairNorms {
  std::size_t count = 0;
  std::vector<double> approx;
  std::vector<Rational> exact;
  bool is_exact = false;

  double operator()(std::size_t k, std::size_t l) const { return approx[k * count + l]; }
  const Rational& exact_at(std::size_t k, std::size_t l) const { return exact[k * count + l]; }
};

PairNorms pair_norms(const ElementSequence& seq) {
  PairNorms p;
  p.count = seq.size();
  p.is_exact = seq.space().is_integer();
  p.approx.assign(p.count * p.count, 0.0);
  if (p.is_exact) p.exact.assign(p.count * p.count, Rational(0));
  for (std::size_t k = 0; k < p.count; ++k) {
    for (std::size_t l = k + 1; l < p.count; ++l) {
      FreeElement diff = seq.items()[k] - seq.items()[l];
      if (p.is_exact) {
        Rational v = exact_norm(seq.space(), diff);
        p.exact[k * p.count + l] = p.exact[l * p.count + k] = v;
        p.approx[k * p.count + l] = p.approx[l * p.count + k] = to_double(v);
      } else {
        double v = free_norm(seq.space(), diff).value;
        p.approx[k * p.count + l] = p.approx[l * p.count + k] = v;
      }
    }
  }
  return p;
}

double osc_from(const PairNorms& p, const std::vector<std::size_t>& idx) {
  if (p.is_exact) {
    return to_double(tail_oscillation<Rational>(
        idx.size(), [&](std::size_t a, std::size_t b) -> const Rational& { return p.exact_at(idx[a], idx[b]); }));
  }
  return tail_oscillation<double>(idx.size(), [&](std::size_t a, std::size_t b) { return p(idx[a], idx[b]); });
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

ElementSequence::ElementSequence(FiniteMetricSpace space, std::vector<FreeElement> items)
    : space_(std::move(space)), items_(std::move(items)) {
  if (items_.empty()) throw Error(ErrorCode::kInvalidArgument, "sequence must not be empty");
  for (const auto& mu : items_) {
    check_on_space(space_, mu);
    bound_ = std::max(bound_, free_norm(space_, mu).value);
  }
}

void BlockSequence::validate() const {
  if (supports.size() != blocks.size() + 1) {
    throw Error(ErrorCode::kInvalidArgument, "need one support per block plus the support of gamma0");
  }
  std::set<std::size_t> seen;
  for (std::size_t s = 0; s < supports.size(); ++s) {
    for (std::size_t p : supports[s]) {
      if (p == 0) throw Error(ErrorCode::kInvalidArgument, "supports must avoid the base point");
      if (!seen.insert(p).second) throw Error(ErrorCode::kInvalidArgument, "supports are not pairwise disjoint");
    }
  }
  auto inside = [](const FreeElement& mu, const std::vector<std::size_t>& support) {
    for (std::size_t p : mu.support()) {
      if (std::find(support.begin(), support.end(), p) == support.end()) return false;
    }
    return true;
  };
  if (!inside(gamma0, supports[0])) throw Error(ErrorCode::kInvalidArgument, "gamma0 leaves its support");
  for (std::size_t n = 0; n < blocks.size(); ++n) {
    if (!inside(blocks[n], supports[n + 1])) {
      throw Error(ErrorCode::kInvalidArgument, "block " + std::to_string(n) + " leaves its support");
    }
  }
}

double osc_ca(const ElementSequence& seq) {
  return osc_from(pair_norms(seq), iota_indices(seq.size()));
}

double scalar_oscillation(const std::vector<double>& values) {
  return tail_oscillation<double>(values.size(),
                                  [&](std::size_t a, std::size_t b) { return std::fabs(values[a] - values[b]); });
}

DeBounds de_bounds(const ElementSequence& seq, const std::vector<LipschitzFunction>& candidates) {
  DeBounds out{0.0, osc_ca(seq), std::nullopt};
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const LipschitzFunction& f = candidates[c];
    if (f.size() != seq.space().size()) {
      throw Error(ErrorCode::kInvalidArgument, "candidate and space sizes differ");
    }
    const double scale = std::max(1.0, f.lip_constant());
    std::vector<double> t;
    t.reserve(seq.size());
    for (const auto& mu : seq.items()) t.push_back(pairing(f, mu) / scale);
    const double osc = scalar_oscillation(t);
    if (!out.best_candidate || osc > out.lower) {
      out.lower = osc;
      out.best_candidate = c;
    }
  }
  return out;
}

double wca_bruteforce(const ElementSequence& seq, std::size_t min_len) {
  if (seq.size() > kSubsequenceCap) {
    throw Error(ErrorCode::kCapExceeded,
                "desk-scale cap: subsequence enumeration needs at most " + std::to_string(kSubsequenceCap) + " terms");
  }
  if (min_len < 2) throw Error(ErrorCode::kInvalidArgument, "min_len must be at least 2");
  if (min_len > seq.size()) throw Error(ErrorCode::kInvalidArgument, "min_len exceeds the sequence length");
  const PairNorms p = pair_norms(seq);
  const std::uint32_t full = (std::uint32_t{1} << seq.size()) - 1;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) < min_len) continue;
    idx.clear();
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (mask & (std::uint32_t{1} << i)) idx.push_back(i);
    }
    best = std::min(best, osc_from(p, idx));
    if (best == 0.0) break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Gliding hump

namespace {

constexpr double kConsensusTolerance = 1e-9;

struct HumpAttempt {
  std::vector<std::size_t> items;
  std::vector<std::vector<std::size_t>> tails;
  std::vector<double> residuals;
  std::vector<double> deviations;
};

HumpAttempt try_hump(const ElementSequence& seq, const FreeElement& limit, const std::vector<std::size_t>& f0,
                     double epsilon) {
  HumpAttempt out;
  std::set<std::size_t> used(f0.begin(), f0.end());
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const FreeElement& mu = seq.items()[n];
    const double deviation = free_norm(seq.space(), (mu - limit).restricted(f0)).value;
    std::vector<std::size_t> tail, overlap;
    for (std::size_t p : mu.support()) {
      if (std::binary_search(f0.begin(), f0.end(), p)) continue;
      (used.count(p) ? overlap : tail).push_back(p);
    }
    const double residual = free_norm(seq.space(), mu.restricted(overlap)).value;
    if (!(deviation < epsilon) || !(residual < epsilon)) continue;
    used.insert(tail.begin(), tail.end());
    out.items.push_back(n);
    out.tails.push_back(std::move(tail));
    out.residuals.push_back(residual);
    out.deviations.push_back(deviation);
  }
  return out;
}

}  // namespace

GlidingHump gliding_hump(const ElementSequence& seq, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be a positive real");
  }
  // Coefficient-wise plurality over the sample; the last item decides when
  // no value is shared by at least two items.
  std::set<std::size_t> points;
  for (const auto& mu : seq.items()) {
    for (std::size_t p : mu.support()) points.insert(p);
  }
  std::map<std::size_t, double> limit_coeffs;
  std::vector<std::size_t> consensus;
  for (std::size_t p : points) {
    std::vector<double> values;
    for (const auto& mu : seq.items()) values.push_back(mu.coefficient(p));
    std::size_t best_count = 0;
    double best_value = 0.0;
    bool unique = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::size_t count = 0;
      for (double v : values) count += std::fabs(v - values[i]) <= kConsensusTolerance;
      if (count > best_count) {
        best_count = count;
        best_value = values[i];
        unique = true;
      } else if (count == best_count && std::fabs(values[i] - best_value) > kConsensusTolerance) {
        unique = false;
      }
    }
    double value = values.back();
    if (best_count >= 2 && unique) {
      value = best_value;
      consensus.push_back(p);
    }
    if (value != 0.0) limit_coeffs.emplace(p, value);
  }
  FreeElement limit(std::move(limit_coeffs));
  std::vector<std::size_t> f0 = limit.support();

  HumpAttempt attempt = try_hump(seq, limit, f0, epsilon);
  if (attempt.items.size() < 3) {
    double achievable = epsilon;
    bool found = false;
    for (int i = 0; i < 200 && !found; ++i) {
      achievable *= 2.0;
      found = try_hump(seq, limit, f0, achievable).items.size() >= 3;
    }
    std::string msg = "epsilon too small for this finite sample";
    msg += found ? "; smallest working epsilon found by doubling: " + format_double(achievable)
                 : "; the sample has fewer than three usable items";
    throw Error(ErrorCode::kDomain, msg);
  }

  GlidingHump out;
  out.epsilon = epsilon;
  out.limit = limit;
  out.consensus_points = std::move(consensus);
  out.items = std::move(attempt.items);
  out.residuals = std::move(attempt.residuals);
  out.limit_deviations = std::move(attempt.deviations);
  out.blocks.gamma0 = limit;
  out.blocks.supports.push_back(f0);
  for (std::size_t i = 0; i < out.items.size(); ++i) {
    out.blocks.blocks.push_back(seq.items()[out.items[i]].restricted(attempt.tails[i]));
    out.blocks.supports.push_back(std::move(attempt.tails[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Glue and repair

namespace {

using USets = std::map<ConflictTriple, std::vector<std::size_t>>;

struct GlueContext {
  const FiniteMetricSpace& space;
  const BlockSequence& blocks;
  std::vector<std::map<std::size_t, std::int64_t>> f;  // per block, on {0} u F_0 u F_n

  std::int64_t value(std::size_t block, std::size_t point) const { return f[block].at(point); }
  const std::vector<std::size_t>& support(std::size_t block) const { return blocks.supports[block + 1]; }
  double alpha(std::size_t block, std::size_t point) const { return blocks.blocks[block].coefficient(point); }
};

// U_{m,n,x} for all triples at once: pairs across F_m x F_n that break the
// 3-Lipschitz bound, grouped by (f_m(x), f_n(y), d(x,y)).
USets conflict_u_sets(const GlueContext& ctx, std::size_t m, std::size_t n) {
  USets u;
  for (std::size_t x : ctx.support(m)) {
    for (std::size_t y : ctx.support(n)) {
      const std::int64_t w = ctx.space.integer_distance(x, y);
      const std::int64_t fu = ctx.value(m, x), fv = ctx.value(n, y);
      if (std::llabs(fu - fv) > 3 * w) {
        auto& members = u[ConflictTriple{fu, fv, w}];
        if (members.empty() || members.back() != x) members.push_back(x);
      }
    }
  }
  return u;
}

// V_{m,n,x} = {y in F_n : f_n(y) = v, d(x,y) = w for some x in U_{m,x}}.
std::vector<std::size_t> v_set(const GlueContext& ctx, const std::vector<std::size_t>& u_members,
                               const ConflictTriple& t, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t y : ctx.support(n)) {
    if (ctx.value(n, y) != t.v) continue;
    for (std::size_t x : u_members) {
      if (ctx.space.integer_distance(x, y) == t.w) {
        out.push_back(y);
        break;
      }
    }
  }
  return out;
}

}  // namespace

WitnessResult glue_witness(const FiniteMetricSpace& space, const BlockSequence& blocks,
                           const WitnessOptions& options) {
  if (!space.is_integer()) throw Error(ErrorCode::kDomain, "requires integer metric");
  blocks.validate();
  if (blocks.blocks.empty()) throw Error(ErrorCode::kInvalidArgument, "glue_witness needs at least one block");
  for (const auto& s : blocks.supports) {
    for (std::size_t p : s) {
      if (p >= space.size()) throw Error(ErrorCode::kInvalidArgument, "support index out of range");
    }
  }
  if (options.epsilon && !(*options.epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }

  WitnessResult result;
  WitnessDiagnostics& diag = result.diagnostics;
  GlueContext ctx{space, blocks, {}};
  const std::size_t count = blocks.blocks.size();
  std::int64_t N = 0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = i + 1; j < space.size(); ++j) N = std::max(N, space.integer_distance(i, j));
  }
  diag.N = N;

  // (1) optimal integer potentials per block on {0} u F_0 u F_n.
  const std::vector<std::size_t>& f0 = blocks.supports[0];
  std::vector<Rational> norms(count);
  for (std::size_t n = 0; n < count; ++n) {
    std::vector<std::size_t> domain{0};
    domain.insert(domain.end(), f0.begin(), f0.end());
    domain.insert(domain.end(), blocks.supports[n + 1].begin(), blocks.supports[n + 1].end());
    std::sort(domain.begin(), domain.end());
    FiniteMetricSpace sub = restrict(space, domain);
    std::map<std::size_t, double> local;
    for (std::size_t i = 1; i < domain.size(); ++i) {
      double a = blocks.gamma0.coefficient(domain[i]) + blocks.blocks[n].coefficient(domain[i]);
      if (a != 0.0) local.emplace(i, a);
    }
    IntegerPotential ip = integer_potential(sub, FreeElement(std::move(local)));
    std::map<std::size_t, std::int64_t> table;
    for (std::size_t i = 0; i < domain.size(); ++i) table.emplace(domain[i], ip.values[i]);
    ctx.f.push_back(std::move(table));
    norms[n] = ip.value;
    diag.block_norms.push_back(to_double(ip.value));
  }
  diag.f_table = ctx.f;
  const double min_norm = *std::min_element(diag.block_norms.begin(), diag.block_norms.end());
  if (!(min_norm > options.c)) {
    throw Error(ErrorCode::kDomain, "norm levels do not exceed c = " + format_double(options.c));
  }

  // (2) pigeonhole on the trace on F_0 and on the range offset.
  {
    std::map<std::vector<std::int64_t>, std::vector<std::size_t>> by_trace;
    for (std::size_t n = 0; n < count; ++n) {
      std::vector<std::int64_t> trace;
      for (std::size_t p : f0) trace.push_back(ctx.value(n, p));
      by_trace[trace].push_back(n);
    }
    std::size_t best_size = 0, best_first = count;
    for (const auto& [trace, members] : by_trace) {
      for (std::int64_t a = -N; a <= 0; ++a) {
        std::vector<std::size_t> cls;
        for (std::size_t n : members) {
          std::int64_t lo = 0, hi = 0;
          for (const auto& kv : ctx.f[n]) {
            lo = std::min(lo, kv.second);
            hi = std::max(hi, kv.second);
          }
          if (a <= lo && hi <= a + N) cls.push_back(n);
        }
        if (cls.empty()) continue;
        if (cls.size() > best_size || (cls.size() == best_size && cls.front() < best_first)) {
          best_size = cls.size();
          best_first = cls.front();
          diag.pigeonhole_class = std::move(cls);
          diag.offset = a;
        }
      }
    }
  }

  // (4) the conflict set A.
  for (std::int64_t u = diag.offset; u <= diag.offset + N; ++u) {
    for (std::int64_t v = diag.offset; v <= diag.offset + N; ++v) {
      for (std::int64_t w = 1; w <= N; ++w) {
        if (std::llabs(u - v) > 3 * w) diag.conflict_set.push_back({u, v, w});
      }
    }
  }

  // Stabilise U_{m,n,x} so it does not depend on n: keep the largest group
  // of later blocks sharing the same U-sets with m.
  std::vector<std::size_t> pool = diag.pigeonhole_class;
  while (!pool.empty()) {
    const std::size_t m = pool.front();
    diag.stabilized.push_back(m);
    std::map<USets, std::vector<std::size_t>> groups;
    for (std::size_t i = 1; i < pool.size(); ++i) groups[conflict_u_sets(ctx, m, pool[i])].push_back(pool[i]);
    const USets* chosen = nullptr;
    std::vector<std::size_t> next;
    for (const auto& [u, members] : groups) {
      if (members.size() > next.size() || (members.size() == next.size() && members.front() < next.front())) {
        next = members;
        chosen = &u;
      }
    }
    diag.stabilized_u.push_back(chosen ? *chosen : USets{});
    pool = std::move(next);
  }
  std::set<ConflictTriple> active;
  for (const auto& u : diag.stabilized_u) {
    for (const auto& kv : u) active.insert(kv.first);
  }
  diag.active_set.assign(active.begin(), active.end());
  diag.conflict_bound_ok = static_cast<double>(diag.active_set.size()) <= std::pow(static_cast<double>(N + 1), 3);

  const std::size_t S = diag.stabilized.size();
  // V[i][j] for stabilised positions i < j: dropped points of F_{s_j} per triple.
  std::vector<std::vector<std::map<ConflictTriple, std::vector<std::size_t>>>> V(
      S, std::vector<std::map<ConflictTriple, std::vector<std::size_t>>>(S));
  std::vector<std::vector<double>> c_mass(S, std::vector<double>(S, 0.0));
  for (std::size_t i = 0; i < S; ++i) {
    for (const auto& [t, members] : diag.stabilized_u[i]) {
      for (std::size_t j = i + 1; j < S; ++j) {
        auto ys = v_set(ctx, members, t, diag.stabilized[j]);
        for (std::size_t y : ys) c_mass[i][j] += std::fabs(ctx.alpha(diag.stabilized[j], y));
        V[i][j].emplace(t, std::move(ys));
      }
    }
  }
  for (std::size_t j = 0; j < S && diag.disjointness_ok; ++j) {
    for (const auto& t : diag.active_set) {
      std::set<std::size_t> seen;
      for (std::size_t i = 0; i < j; ++i) {
        auto it = V[i][j].find(t);
        if (it == V[i][j].end()) continue;
        for (std::size_t y : it->second) {
          if (!seen.insert(y).second) diag.disjointness_ok = false;
        }
      }
    }
  }

  // (5) epsilon schedule: block n joins after k_1..k_j only if the mass it
  // loses to each k_i stays within epsilon / 2^(i+1).
  double min_stab_norm = std::numeric_limits<double>::infinity();
  for (std::size_t s : diag.stabilized) min_stab_norm = std::min(min_stab_norm, diag.block_norms[s]);
  diag.epsilon = options.epsilon.value_or(0.05 * min_stab_norm);
  std::vector<std::size_t> selection;  // positions into stabilized
  for (std::size_t start = 0; start < S; ++start) {
    if (S - start <= selection.size()) break;
    std::vector<std::size_t> sel{start};
    for (std::size_t j = start + 1; j < S; ++j) {
      bool ok = true;
      for (std::size_t i = 0; i < sel.size() && ok; ++i) {
        ok = c_mass[sel[i]][j] <= diag.epsilon / std::ldexp(1.0, static_cast<int>(i) + 2);
      }
      if (ok) sel.push_back(j);
    }
    if (sel.size() > selection.size()) selection = std::move(sel);
  }

  const std::size_t needed = std::min<std::size_t>(2, count);
  for (;;) {
    // (6) H and the glued function on it.
    diag.dropped.clear();
    diag.offending.clear();
    std::set<std::size_t> removed;
    for (std::size_t b = 1; b < selection.size(); ++b) {
      for (std::size_t a = 0; a < b; ++a) {
        for (const auto& [t, ys] : V[selection[a]][selection[b]]) {
          if (ys.empty()) continue;
          DroppedSet d{diag.stabilized[selection[a]], diag.stabilized[selection[b]], t, ys, 0.0};
          for (std::size_t y : ys) {
            d.mass += std::fabs(ctx.alpha(d.n, y));
            removed.insert(y);
          }
          diag.dropped.push_back(std::move(d));
        }
      }
    }
    std::map<std::size_t, std::pair<std::int64_t, std::size_t>> h;  // point -> (f, owning block or count)
    h.emplace(0, std::pair{std::int64_t{0}, count});
    for (std::size_t p : f0) h.emplace(p, std::pair{ctx.value(diag.stabilized[selection.front()], p), count});
    for (std::size_t pos : selection) {
      const std::size_t n = diag.stabilized[pos];
      for (std::size_t p : ctx.support(n)) {
        if (!removed.count(p)) h.emplace(p, std::pair{ctx.value(n, p), n});
      }
    }
    diag.H.clear();
    for (const auto& kv : h) diag.H.push_back(kv.first);

    std::optional<std::size_t> culprit;
    for (auto a = h.begin(); a != h.end(); ++a) {
      for (auto b = std::next(a); b != h.end(); ++b) {
        const std::int64_t w = space.integer_distance(a->first, b->first);
        if (std::llabs(a->second.first - b->second.first) <= 3 * w) continue;
        const std::size_t m = std::min(a->second.second, b->second.second);
        const std::size_t n = std::max(a->second.second, b->second.second);
        const bool a_first = a->second.second <= b->second.second;
        diag.offending.push_back({a_first ? a->first : b->first, a_first ? b->first : a->first, m, n,
                                  ConflictTriple{a_first ? a->second.first : b->second.first,
                                                 a_first ? b->second.first : a->second.first, w}});
        if (m < count && (!culprit || m < *culprit)) culprit = m;
      }
    }
    if (diag.offending.empty()) break;
    if (!culprit) {
      result.message = "glued function breaks the 3-Lipschitz bound inside one block";
      return result;
    }
    diag.verification_drops.push_back(*culprit);
    std::erase_if(selection, [&](std::size_t pos) { return diag.stabilized[pos] == *culprit; });
    if (selection.size() < needed) break;
  }

  if (selection.size() < needed) {
    result.message = "retained subsequence shrank below two blocks";
    return result;
  }

  // (7) McShane extension with constant 3.
  std::vector<double> h_values;
  {
    std::map<std::size_t, std::int64_t> fh;
    fh.emplace(0, 0);
    for (std::size_t p : f0) fh.emplace(p, ctx.value(diag.stabilized[selection.front()], p));
    std::set<std::size_t> removed;
    for (const auto& d : diag.dropped) removed.insert(d.points.begin(), d.points.end());
    for (std::size_t pos : selection) {
      for (std::size_t p : ctx.support(diag.stabilized[pos])) {
        if (!removed.count(p)) fh.emplace(p, ctx.value(diag.stabilized[pos], p));
      }
    }
    for (std::size_t p : diag.H) h_values.push_back(static_cast<double>(fh.at(p)));
  }
  LipschitzFunction g = mcshane_extend(space, diag.H, h_values, 3.0);

  // (8) independent verification.
  WitnessCertificate cert;
  cert.g = g;
  cert.lip_g = g.lip_constant();
  const bool lip_ok = is_lipschitz(space, g.values(), 3.0, 0.0);
  std::set<std::size_t> removed;
  for (const auto& d : diag.dropped) {
    removed.insert(d.points.begin(), d.points.end());
    cert.dropped_mass += d.mass;
  }
  Rational max_slack = 0;
  bool first = true;
  for (std::size_t pos : selection) {
    const std::size_t n = diag.stabilized[pos];
    const FreeElement mu = blocks.combined(n);
    const Rational norm = exact_norm(space, mu);
    const Rational value = pairing_exact(g.values(), mu);
    Rational dropped = 0;
    for (std::size_t p : ctx.support(n)) {
      if (removed.count(p)) dropped += abs(decimal_rational(ctx.alpha(n, p)));
    }
    const Rational slack = norm - value;
    if (slack > Rational(4 * N) * dropped) diag.slack_chain_ok = false;
    if (first || slack > max_slack) max_slack = slack;
    first = false;
    cert.retained.push_back(n);
    cert.values.push_back(to_double(value));
    cert.norm_levels.push_back(to_double(norm));
    cert.block_dropped.push_back(to_double(dropped));
  }
  cert.slack = to_double(max_slack);

  std::vector<std::string> problems;
  if (!lip_ok) problems.push_back("extension is not 3-Lipschitz");
  if (!diag.disjointness_ok) problems.push_back("dropped sets overlap");
  if (!diag.slack_chain_ok) problems.push_back("slack exceeds 4N times the dropped mass");
  if (!diag.conflict_bound_ok) problems.push_back("conflict set larger than (N+1)^3");
  if (!problems.empty()) {
    result.message = problems.front();
    for (std::size_t i = 1; i < problems.size(); ++i) result.message += "; " + problems[i];
    return result;
  }
  result.success = true;
  result.message = "verified";
  result.certificate = std::move(cert);
  return result;
}

// ---------------------------------------------------------------------------

SchurCertificate schur_certificate(const ElementSequence& seq, double epsilon) {
  if (!seq.space().is_integer()) throw Error(ErrorCode::kDomain, "requires integer metric");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be a positive real");
  }
  SchurCertificate out;
  SchurReport& report = out.report;
  report.proxy_note =
      "finite proxies: the infimum over tails is the minimum over tail starts 0..K-2; "
      "the limsup over retained items is their maximum";
  report.wde_note = "not computed: no certified finite estimator";

  const PairNorms pairs = pair_norms(seq);
  const std::vector<std::size_t> all = iota_indices(seq.size());
  const Rational ca_exact = tail_oscillation<Rational>(
      seq.size(), [&](std::size_t a, std::size_t b) -> const Rational& { return pairs.exact_at(a, b); });
  report.ca = to_double(ca_exact);
  report.de_upper = report.ca;
  if (seq.size() <= kSubsequenceCap && seq.size() >= 2) report.wca_estimate = wca_bruteforce(seq, 2);

  if (report.ca <= 1e-12) {
    out.trivial = true;
    out.success = true;
    out.message = "sequence is constant on its last tail; nothing to certify";
    report.limit_note = "not needed";
    return out;
  }

  out.hump = gliding_hump(seq, epsilon);
  report.limit_note = "pointwise limit by coefficient plurality over the sample, last item otherwise; " +
                      std::to_string(out.hump->consensus_points.size()) + " coordinates settled by plurality";
  out.witness = glue_witness(seq.space(), out.hump->blocks);
  if (!out.witness->success) {
    out.message = "witness failed: " + out.witness->message;
    return out;
  }
  const WitnessCertificate& cert = *out.witness->certificate;

  // g/3 lies in the dual unit ball.
  std::vector<Rational> t;
  for (const auto& mu : seq.items()) t.push_back(pairing_exact(cert.g.values(), mu) / 3);
  const Rational de_lower = tail_oscillation<Rational>(
      t.size(), [&](std::size_t a, std::size_t b) { return Rational(abs(t[a] - t[b])); });
  report.de_lower = to_double(de_lower);

  std::optional<Rational> ratio;
  bool ratio_defined = true;
  for (std::size_t pos : cert.retained) {
    const std::size_t item = out.hump->items[pos];
    const Rational norm = exact_norm(seq.space(), seq.items()[item]);
    const Rational& pairing_value = t[item];
    report.retained_items.push_back(item);
    report.item_norms.push_back(to_double(norm));
    report.item_pairings.push_back(to_double(pairing_value));
    if (pairing_value <= 0) {
      ratio_defined = false;
      continue;
    }
    Rational r = norm / pairing_value;
    if (!ratio || r > *ratio) ratio = r;
  }
  if (ratio_defined && ratio) report.ratio_certified = to_double(*ratio);
  out.success = true;
  out.message = ratio_defined ? "verified" : "verified; some retained pairings are not positive";
  return out;
}

}  // namespace lipfree
