// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "lipfree/error.hpp"
#include "lipfree/generators.hpp"
#include "lipfree/hyperbolic_tree.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/schur_witness.hpp"
#include "lipfree/transport_norm.hpp"
#include "oracles.hpp"

using namespace lipfree;
using oracle::Q;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Tally {
  int failures = 0;
  int passed = 0;

  void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    (ok ? passed : failures) += 1;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

FiniteMetricSpace euclidean_space(Rng& rng, std::size_t n) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < n; ++i)
    pts.emplace_back(static_cast<double>(rng.below(10000)) / 97.0, static_cast<double>(rng.below(10000)) / 89.0);
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) d[i][j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second) + 0.01;
  return FiniteMetricSpace::create(d);
}

oracle::QMatrix binary_matrix(const FiniteMetricSpace& s) {
  oracle::QMatrix d(s.size(), std::vector<Q>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) d[i][j] = Q(s(i, j));
  return d;
}

std::map<std::size_t, Q> binary_coeffs(const FreeElement& mu) {
  std::map<std::size_t, Q> out;
  for (const auto& [p, a] : mu.coefficients()) out[p] = Q(a);
  return out;
}

// 1
void norm_oracle(Tally& tally) {
  const auto t0 = Clock::now();
  Rng rng(1001);
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng.below(5);
    const std::int64_t steps = rng.between(4, 21);
    const std::int64_t den = 1 + rng.below(6);
    auto space = random_rational_metric(rng, n, steps, den);
    auto mu = random_element(rng, space, 1 + rng.below(space.size() - 1));
    const double got = free_norm(space, mu).value;
    const double want = to_double(oracle::dual_vertex_norm(oracle::exact_matrix(space), oracle::exact_coeffs(mu)));
    const double diff = std::fabs(got - want);
    worst = std::max(worst, diff);
    if (diff > 1e-9) ++bad;
  }
  const double secs = seconds_since(t0);
  tally.report(1, "norm oracle equivalence", bad == 0 && secs < 60.0,
               "500 instances, " + std::to_string(bad) + " mismatches, max diff " + fmt("%.3g", worst) + ", " +
                   fmt("%.2f", secs) + " s");
}

// 2
void duality(Tally& tally) {
  const auto t0 = Clock::now();
  Rng rng(2002);
  int bad = 0;
  double worst_gap = 0.0, worst_lip = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.below(39);
    FiniteMetricSpace space = t % 3 == 0   ? euclidean_space(rng, n)
                              : t % 3 == 1 ? random_rational_metric(rng, n)
                                           : random_integer_metric(rng, n, 1 + rng.between(1, 9));
    auto mu = random_element(rng, space, 1 + rng.below(std::min<std::size_t>(space.size() - 1, 12)));
    auto cert = free_norm(space, mu);
    // Check against the exact binary values the solver was given.
    const auto d = binary_matrix(space);
    const auto coeffs = binary_coeffs(mu);
    auto plan = oracle::check_plan(d, coeffs, cert.plan.flows, Q(1, 1000000000));
    const double lip = to_double(oracle::lipschitz_constant(d, cert.potential));
    const double dual = to_double(oracle::pairing(cert.potential, coeffs));
    const double primal = to_double(plan.cost);
    const double gap = std::fabs(primal - dual);
    const double scale = std::max(1.0, cert.value);
    worst_gap = std::max(worst_gap, gap / scale);
    worst_lip = std::max(worst_lip, lip);
    const bool ok = plan.feasible && lip <= 1.0 + 1e-9 && gap <= 1e-9 * scale &&
                    std::fabs(primal - cert.value) <= 1e-9 * scale && cert.potential[0] == 0.0;
    if (!ok) ++bad;
  }
  tally.report(2, "duality certificates", bad == 0,
               "1000 instances, " + std::to_string(bad) + " failures, max relative gap " + fmt("%.3g", worst_gap) +
                   ", max L(potential) " + fmt("%.12g", worst_lip) + ", " + fmt("%.2f", seconds_since(t0)) + " s");
}

// 3
void integer_potentials(Tally& tally) {
  const auto t0 = Clock::now();
  Rng rng(3003);
  int bad = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(19);
    const std::int64_t N = rng.between(1, 6);
    auto space = random_integer_metric(rng, n, N);
    auto mu = random_element(rng, space, 1 + rng.below(std::min<std::size_t>(space.size() - 1, 10)));
    const auto d = oracle::exact_matrix(space);
    const auto coeffs = oracle::exact_coeffs(mu);
    auto ip = integer_potential(space, mu);
    auto exact = free_norm_exact(space, mu);
    // The exact plan and the integer potential certify each other.
    auto plan = oracle::check_plan(d, coeffs, exact.plan, Q(0));
    const Q pairing = oracle::pairing(ip.values, coeffs);
    const bool ok = ip.values[0] == 0 && oracle::lipschitz_constant(d, ip.values) <= 1 && plan.feasible &&
                    plan.cost == pairing && pairing == exact.value && ip.value == exact.value;
    if (!ok) ++bad;
  }
  tally.report(3, "integer extremal potentials", bad == 0,
               "200 instances, " + std::to_string(bad) + " failures, " + fmt("%.2f", seconds_since(t0)) + " s");
}

// 4
void sandwich(Tally& tally) {
  const auto t0 = Clock::now();
  Rng rng(4004);
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.below(25);
    const std::int64_t a_steps = rng.between(2, 9);
    auto space = random_uniform_discrete(rng, n, a_steps, 4);
    auto mu = random_element(rng, space, 1 + rng.below(std::min<std::size_t>(space.size() - 1, 10)));
    const auto d = oracle::exact_matrix(space);
    Q a = -1, b = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        if (a < 0 || d[i][j] < a) a = d[i][j];
        b = std::max(b, d[i][j]);
      }
    Q mass = 0;
    for (const auto& [p, v] : oracle::exact_coeffs(mu)) mass += abs(v);
    const Q norm = free_norm_exact(space, mu).value;
    const bool ok = a / 2 * mass <= norm && norm <= b * mass && ell1_bounds(space, mu).within;
    if (!ok) ++bad;
  }
  tally.report(4, "l1 comparison sandwich", bad == 0,
               "1000 instances, " + std::to_string(bad) + " failures, " + fmt("%.2f", seconds_since(t0)) + " s");
}

// 5
void rounding(Tally& tally) {
  const auto t0 = Clock::now();
  Rng rng(5005);
  int bad = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng.below(15);
    auto space = t % 2 ? euclidean_space(rng, n) : random_rational_metric(rng, n);
    const double c = static_cast<double>(1 + rng.below(400)) / 16.0;
    auto r = round_metric(space, c);
    const Q cq = decimal_rational(c);
    const auto rd = oracle::exact_matrix(r);
    bool ok = oracle::is_metric(rd) && validate_metric(r.matrix()).ok && r.is_integer();
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) {
        const Q cd = cq * decimal_rational(space(i, j));
        ok = cd <= rd[i][j] && rd[i][j] <= cd + 1;
      }
    if (!ok) ++bad;
  }
  tally.report(5, "integer rounding sandwich", bad == 0,
               "200 instances, " + std::to_string(bad) + " failures, " + fmt("%.2f", seconds_since(t0)) + " s");
}

// 6
void tree_norms(Tally& tally) {
  const auto t0 = Clock::now();
  Rng rng(6006);
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 300; ++t) {
    auto rt = random_tree(rng, 2 + rng.below(11));
    auto mu = random_element(rng, rt.space, 1 + rng.below(rt.space.size() - 1));
    const double transport = free_norm(rt.space, mu).value;
    // Both the generating tree and the tree rebuilt from the metric alone.
    auto rebuilt = tree_embed(rt.space);
    const double cut = tree_cut_norm(rt.tree, mu);
    const double cut2 = tree_cut_norm(rebuilt, mu);
    const double diff = std::max(std::fabs(cut - transport), std::fabs(cut2 - transport));
    worst = std::max(worst, diff);
    if (diff > 1e-9) ++bad;
  }
  tally.report(6, "tree edge-cut norm equals free norm", bad == 0,
               "300 instances, " + std::to_string(bad) + " mismatches, max diff " + fmt("%.3g", worst) + ", " +
                   fmt("%.2f", seconds_since(t0)) + " s");
}

struct PipelineRun {
  BlockInstance instance;
  WitnessResult witness;
};

// 7
std::vector<PipelineRun> glue_pipeline(Tally& tally) {
  Rng rng(7007);
  std::vector<PipelineRun> runs;
  int bad = 0, within_slack = 0, invariant_breaks = 0;
  double worst_time = 0.0, min_fraction = 1.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t B = 20 + rng.below(21);
    const std::size_t support = 1 + rng.below(4);
    BlockInstance inst = t % 2 ? conflict_block_instance(rng, B, support)
                               : random_block_instance(rng, 2 + rng.between(0, 3), B, support);
    const auto t0 = Clock::now();
    WitnessResult r = glue_witness(inst.space, inst.blocks);
    const double secs = seconds_since(t0);
    worst_time = std::max(worst_time, secs);
    bool ok = r.success && secs < 10.0;
    if (ok) {
      const auto& c = *r.certificate;
      const auto d = oracle::exact_matrix(inst.space);
      ok = oracle::lipschitz_constant(d, c.g.values()) <= 3;
      const double fraction = static_cast<double>(c.retained.size()) / static_cast<double>(B);
      min_fraction = std::min(min_fraction, fraction);
      ok = ok && fraction >= 0.25;

      // Dropped V-sets: disjoint per (later block, triple).
      bool invariants = true;
      std::map<std::pair<std::size_t, ConflictTriple>, std::set<std::size_t>> seen;
      std::map<std::size_t, Q> dropped_by_block;
      for (const auto& ds : r.diagnostics.dropped) {
        auto& s = seen[{ds.n, ds.triple}];
        for (std::size_t p : ds.points) {
          if (!s.insert(p).second) invariants = false;
          dropped_by_block[ds.n] += abs(decimal_rational(inst.blocks.blocks[ds.n].coefficient(p)));
        }
      }
      // Slack chain, recomputed exactly.
      Q min_norm = -1, slack = 0;
      const Q four_n(4 * r.diagnostics.N);
      for (std::size_t n : c.retained) {
        const FreeElement mu = inst.blocks.combined(n);
        const Q norm = free_norm_exact(inst.space, mu).value;
        const Q value = oracle::pairing(c.g.values(), oracle::exact_coeffs(mu));
        if (norm - value > four_n * dropped_by_block[n]) invariants = false;
        if (norm - value < 0) invariants = false;
        slack = std::max(slack, Q(norm - value));
        if (min_norm < 0 || norm < min_norm) min_norm = norm;
      }
      const std::int64_t N = r.diagnostics.N;
      if (static_cast<std::int64_t>(r.diagnostics.active_set.size()) > (N + 1) * (N + 1) * (N + 1))
        invariants = false;
      if (!invariants) ++invariant_breaks;
      ok = ok && invariants;
      if (slack <= Q(1, 20) * min_norm) ++within_slack;
    }
    if (!ok) ++bad;
    runs.push_back({std::move(inst), std::move(r)});
  }
  const bool pass = bad == 0 && within_slack >= 90;
  tally.report(7, "glue witness pipeline", pass,
               "100 instances, " + std::to_string(bad) + " failures, " + std::to_string(invariant_breaks) +
                   " invariant breaks, slack <= 0.05 min norm on " + std::to_string(within_slack) +
                   ", min retained fraction " + fmt("%.3f", min_fraction) + ", max time " +
                   fmt("%.3f", worst_time) + " s");
  return runs;
}

// 8
void schur_ratio(Tally& tally, const std::vector<PipelineRun>& runs) {
  const auto t0 = Clock::now();
  int considered = 0, bad = 0, above_limit = 0;
  double worst = 0.0, worst_ca_de = 0.0, worst_ca_pairing = 0.0;
  for (const auto& run : runs) {
    if (!run.witness.success) continue;
    ++considered;
    ElementSequence seq(run.instance.space, run.instance.items());
    SchurCertificate cert = schur_certificate(seq, 0.1);
    if (!cert.success || !cert.report.ratio_certified) {
      ++bad;
      continue;
    }
    // Recompute ||mu_n|| / <g/3, mu_n> from g alone.
    const auto& g = cert.witness->certificate->g;
    bool ok = oracle::lipschitz_constant(oracle::exact_matrix(seq.space()), g.values()) <= 3;
    Q ratio = 0;
    for (std::size_t item : cert.report.retained_items) {
      const Q pairing = oracle::pairing(g.values(), oracle::exact_coeffs(seq.items()[item])) / 3;
      if (pairing <= 0) {
        ok = false;
        break;
      }
      ratio = std::max(ratio, Q(free_norm_exact(seq.space(), seq.items()[item]).value / pairing));
    }
    const double r = to_double(ratio);
    ok = ok && std::fabs(r - *cert.report.ratio_certified) <= 1e-12 * r;
    ok = ok && cert.report.de_lower <= cert.report.de_upper && cert.report.de_upper <= cert.report.ca;
    worst = std::max(worst, r);
    const double min_pairing = *std::min_element(cert.report.item_pairings.begin(), cert.report.item_pairings.end());
    worst_ca_pairing = std::max(worst_ca_pairing, cert.report.ca / min_pairing);
    if (cert.report.de_lower > 0) worst_ca_de = std::max(worst_ca_de, cert.report.ca / cert.report.de_lower);
    if (r > 3.2) ++above_limit;
    if (!ok || r > 3.0 * 1.06) ++bad;
  }
  tally.report(8, "finite 3-Schur certificate", considered > 0 && bad == 0 && above_limit == 0,
               std::to_string(considered) + " successful instances, " + std::to_string(bad) + " failures, max ratio " +
                   fmt("%.4f", worst) + " (limit 3.18), " + std::to_string(above_limit) + " above 3.2, largest ca/de_lower " +
                   fmt("%.4f", worst_ca_de) + ", largest ca/min pairing " + fmt("%.4f", worst_ca_pairing) + ", " + fmt("%.2f", seconds_since(t0)) + " s");
}

// 9
void density_and_distortion(Tally& tally) {
  const auto t0 = Clock::now();
  Rng rng(9009);
  int bad_density = 0, bad_distortion = 0;
  for (int t = 0; t < 100; ++t) {
    auto k = random_interval_union(rng, 1 + rng.below(15));
    const double eps = static_cast<double>(1 + rng.below(95)) / 100.0;
    auto d = density_interval(k, eps);
    const Q m = oracle::measure_within(k.intervals(), d.a, d.b);
    if (!(d.b > d.a && m > (1 - decimal_rational(eps)) * (d.b - d.a) && m == d.measure)) ++bad_density;
  }
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 3 + rng.below(28);
    auto us = random_ultrametric_sample(rng, n);
    auto p = distortion_pair(us.sample, us.ultrametric, n, us.a, us.b);
    const Q width = (us.b - us.a) / static_cast<long>(n);
    const Q ratio = us.ultrametric.exact(p.x, p.y) / abs(us.sample[p.x] - us.sample[p.y]);
    const bool ok = ratio == p.ratio && ratio <= make_rational(2, static_cast<long>(n) - 2) && us.sample[p.x] < us.a + width &&
                    us.sample[p.y] >= us.b - width;
    if (!ok) ++bad_distortion;
  }
  tally.report(9, "density interval and distortion pair", bad_density == 0 && bad_distortion == 0,
               "100 unions with " + std::to_string(bad_density) + " failures, 100 samples with " +
                   std::to_string(bad_distortion) + " failures, " + fmt("%.2f", seconds_since(t0)) + " s");
}

void guarded(Tally& tally, int id, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    tally.report(id, name, false, std::string("threw: ") + e.what());
  }
}

}  // namespace

int main() {
  Tally tally;
  guarded(tally, 1, "norm oracle equivalence", [&] { norm_oracle(tally); });
  guarded(tally, 2, "duality certificates", [&] { duality(tally); });
  guarded(tally, 3, "integer extremal potentials", [&] { integer_potentials(tally); });
  guarded(tally, 4, "l1 comparison sandwich", [&] { sandwich(tally); });
  guarded(tally, 5, "integer rounding sandwich", [&] { rounding(tally); });
  guarded(tally, 6, "tree edge-cut norm equals free norm", [&] { tree_norms(tally); });
  std::vector<PipelineRun> runs;
  guarded(tally, 7, "glue witness pipeline", [&] { runs = glue_pipeline(tally); });
  guarded(tally, 8, "finite 3-Schur certificate", [&] { schur_ratio(tally, runs); });
  guarded(tally, 9, "density interval and distortion pair", [&] { density_and_distortion(tally); });
  std::printf("[EXCLUDED] 10 optimality of the constant 3: no finite witness is available to reproduce\n");
  std::printf("%d passed, %d failed\n", tally.passed, tally.failures);
  return tally.failures == 0 ? 0 : 1;
}
