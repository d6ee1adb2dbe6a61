#include "lipfree/json_io.hpp"

#include <cmath>
#include <set>

#include "lipfree/error.hpp"

namespace lipfree::io {
namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kStructural, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<std::string> labels_of(const std::vector<std::size_t>& idx, const FiniteMetricSpace& space) {
  std::vector<std::string> out;
  for (std::size_t i : idx) out.push_back(space.label(i));
  return out;
}

Json triple(const ConflictTriple& t) { return Json::array({t.u, t.v, t.w}); }

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

Rational read_rational(const Json& value) {
  if (value.is_number_integer()) return Rational(value.get<long>());
  if (value.is_number()) {
    const double v = value.get<double>();
    if (!std::isfinite(v)) bad("non-finite number");
    return decimal_rational(v);
  }
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  bad("expected a number or a rational string");
}

double read_real(const Json& value) {
  if (value.is_number()) return value.get<double>();
  return to_double(read_rational(value));
}

Json write_rational(const Rational& value) {
  if (is_integer(value) && value.get_num().fits_slong_p()) return value.get_num().get_si();
  const double d = to_double(value);
  if (decimal_rational(d) == value) return d;
  return to_string(value);
}

RawSpace read_raw_space(const Json& j) {
  RawSpace raw;
  const Json& dist = field(j, "dist");
  if (!dist.is_array()) bad("'dist' must be an array of rows");
  for (const auto& row : dist) {
    if (!row.is_array()) bad("'dist' must be an array of rows");
    std::vector<double> r;
    for (const auto& v : row) r.push_back(read_real(v));
    raw.dist.push_back(std::move(r));
  }
  if (j.contains("points")) {
    const Json& points = j.at("points");
    if (!points.is_array()) bad("'points' must be an array");
    for (const auto& p : points) raw.labels.push_back(p.is_string() ? p.get<std::string>() : p.dump());
  } else {
    for (std::size_t i = 0; i < raw.dist.size(); ++i) raw.labels.push_back(std::to_string(i));
  }
  if (raw.labels.size() != raw.dist.size()) bad("'points' and 'dist' sizes differ");
  return raw;
}

FiniteMetricSpace read_space(const Json& j) {
  RawSpace raw = read_raw_space(j);
  return FiniteMetricSpace::create(std::move(raw.labels), raw.dist);
}

Json write_space(const FiniteMetricSpace& space) {
  Json dist = Json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < space.size(); ++k) {
      if (space.is_integer()) {
        row.push_back(space.integer_distance(i, k));
      } else {
        row.push_back(space(i, k));
      }
    }
    dist.push_back(std::move(row));
  }
  return Json{{"points", space.labels()}, {"dist", std::move(dist)}};
}

FreeElement read_element(const Json& j, const FiniteMetricSpace& space) {
  const Json& coeffs = field(j, "coeffs");
  if (!coeffs.is_object()) bad("'coeffs' must map point labels to values");
  std::map<std::size_t, double> out;
  for (const auto& [label, value] : coeffs.items()) {
    auto idx = space.index_of(label);
    if (!idx) bad("unknown point label '" + label + "'");
    out[*idx] += read_real(value);
  }
  return FreeElement(std::move(out));
}

Json write_element(const FreeElement& mu, const FiniteMetricSpace& space) {
  Json coeffs = Json::object();
  for (const auto& [p, a] : mu.coefficients()) coeffs[space.label(p)] = a;
  return Json{{"coeffs", std::move(coeffs)}};
}

ElementSequence read_sequence(const Json& j) {
  FiniteMetricSpace space = read_space(field(j, "space"));
  const Json& items = field(j, "items");
  if (!items.is_array()) bad("'items' must be an array");
  std::vector<FreeElement> out;
  for (const auto& item : items) out.push_back(read_element(item, space));
  return ElementSequence(std::move(space), std::move(out));
}

Json write_sequence(const FiniteMetricSpace& space, const std::vector<FreeElement>& items) {
  Json arr = Json::array();
  for (const auto& mu : items) arr.push_back(write_element(mu, space));
  return Json{{"space", write_space(space)}, {"items", std::move(arr)}};
}

TreeEmbedding read_tree(const Json& j) {
  TreeEmbedding tree;
  const Json& nodes = field(j, "nodes");
  if (!nodes.is_array()) bad("'nodes' must be an array");
  for (const auto& n : nodes) tree.nodes.push_back(n.is_string() ? n.get<std::string>() : n.dump());
  auto node_index = [&](const Json& ref) -> std::size_t {
    if (ref.is_number_unsigned() || ref.is_number_integer()) {
      const long i = ref.get<long>();
      if (i < 0 || static_cast<std::size_t>(i) >= tree.nodes.size()) bad("node index out of range");
      return static_cast<std::size_t>(i);
    }
    if (!ref.is_string()) bad("node reference must be a name or an index");
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      if (tree.nodes[i] == ref.get<std::string>()) return i;
    }
    bad("unknown node '" + ref.get<std::string>() + "'");
  };
  const Json& edges = field(j, "edges");
  if (!edges.is_array()) bad("'edges' must be an array");
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 3) bad("each edge must be [u, v, length]");
    tree.edges.push_back({node_index(e[0]), node_index(e[1]), read_rational(e[2])});
  }
  const Json& map = field(j, "map");
  if (!map.is_object()) bad("'map' must map point labels to nodes");
  for (const auto& [point, node] : map.items()) tree.map.push_back(node_index(node));
  try {
    tree.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  return tree;
}

std::vector<std::string> tree_point_labels(const Json& j) {
  std::vector<std::string> out;
  for (const auto& [point, node] : field(j, "map").items()) out.push_back(point);
  return out;
}

Json write_tree(const TreeEmbedding& tree, const std::vector<std::string>& points) {
  Json edges = Json::array();
  for (const auto& e : tree.edges) {
    edges.push_back(Json::array({tree.nodes[e.u], tree.nodes[e.v], write_rational(e.length)}));
  }
  Json map = Json::object();
  for (std::size_t i = 0; i < tree.map.size(); ++i) {
    map[i < points.size() ? points[i] : tree.nodes[tree.map[i]]] = tree.nodes[tree.map[i]];
  }
  return Json{{"nodes", tree.nodes}, {"edges", std::move(edges)}, {"map", std::move(map)}};
}

IntervalUnion read_intervals(const Json& j) {
  const Json& iv = field(j, "intervals");
  if (!iv.is_array()) bad("'intervals' must be an array");
  std::vector<std::pair<Rational, Rational>> out;
  for (const auto& pair : iv) {
    if (!pair.is_array() || pair.size() != 2) bad("each interval must be [l, r]");
    out.emplace_back(read_rational(pair[0]), read_rational(pair[1]));
  }
  return IntervalUnion::create(std::move(out));
}

Json write_validation(const ValidationReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back(
        Json{{"kind", std::string(to_string(v.kind))}, {"indices", v.indices}, {"magnitude", v.magnitude}});
  }
  return Json{{"ok", report.ok}, {"violations", std::move(violations)}};
}

Json write_classification(const FiniteMetricSpace& space) {
  Json j{{"ok", true}, {"size", space.size()}, {"integer", space.is_integer()}};
  if (space.size() >= 2) {
    SeparationBounds sep = separation_bounds(space);
    j["separation"] = Json{{"a", sep.a}, {"b", sep.b}};
  } else {
    j["separation"] = nullptr;
  }
  UltrametricCheck um = check_ultrametric(space);
  j["ultrametric"] = um.ok;
  if (um.witness) {
    j["ultrametric_witness"] = Json{{"points", labels_of({um.witness->x, um.witness->y, um.witness->z}, space)},
                                    {"slack", um.witness->slack}};
  }
  if (space.size() <= kQuadrupleScanCap) {
    FourPointCheck fp = check_four_point(space);
    j["four_point"] = fp.ok;
    if (fp.witness) {
      const auto& w = *fp.witness;
      j["witness"] = Json{{"points", labels_of({w.x, w.y, w.z, w.u}, space)}, {"slack", w.slack}};
    }
  } else {
    j["four_point"] = nullptr;
    j["four_point_note"] = "not checked: more than " + std::to_string(kQuadrupleScanCap) + " points";
  }
  Json shells = Json::array();
  for (const auto& s : dyadic_decomposition(space)) {
    shells.push_back(Json{{"k", s.k}, {"members", labels_of(s.members, space)}});
  }
  j["dyadic_shells"] = std::move(shells);
  return j;
}

Json write_norm(const FiniteMetricSpace& space, const FreeElement& mu, const NormCertificate& cert) {
  Json plan = Json::array();
  for (const auto& f : cert.plan.flows) {
    plan.push_back(Json{{"from", space.label(f.source)}, {"to", space.label(f.sink)}, {"mass", f.mass}});
  }
  Json potential = Json::object();
  for (std::size_t i = 0; i < space.size(); ++i) potential[space.label(i)] = cert.potential[i];
  Json j{{"value", cert.value},
         {"exact", cert.exact},
         {"gap", cert.gap},
         {"potential_lip", cert.potential_lip},
         {"plan_cost", cert.plan.cost},
         {"total_mass", mu.total_mass()},
         {"dropped_base_coefficient", cert.dropped_base_coefficient},
         {"plan", std::move(plan)},
         {"potential", std::move(potential)}};
  if (cert.exact_value) j["exact_value"] = to_string(*cert.exact_value);
  return j;
}

Json write_integer_potential(const FiniteMetricSpace& space, const IntegerPotential& ip) {
  Json values = Json::object();
  for (std::size_t i = 0; i < space.size(); ++i) values[space.label(i)] = ip.values[i];
  return Json{{"value", to_string(ip.value)},
              {"method", ip.method == IntegerPotential::Method::kTightPropagation ? "tight-propagation"
                                                                                  : "exhaustive-search"},
              {"values", std::move(values)}};
}

Json write_witness(const FiniteMetricSpace& space, const WitnessResult& result) {
  const WitnessDiagnostics& d = result.diagnostics;
  Json f_table = Json::array();
  for (const auto& table : d.f_table) {
    Json row = Json::object();
    for (const auto& [p, v] : table) row[space.label(p)] = v;
    f_table.push_back(std::move(row));
  }
  Json conflict = Json::array(), active = Json::array();
  for (const auto& t : d.conflict_set) conflict.push_back(triple(t));
  for (const auto& t : d.active_set) active.push_back(triple(t));
  Json dropped = Json::array();
  for (const auto& v : d.dropped) {
    dropped.push_back(Json{{"m", v.m}, {"n", v.n}, {"triple", triple(v.triple)},
                           {"points", labels_of(v.points, space)}, {"mass", v.mass}});
  }
  Json offending = Json::array();
  for (const auto& o : d.offending) {
    offending.push_back(Json{{"x", space.label(o.x)}, {"y", space.label(o.y)}, {"m", o.m}, {"n", o.n},
                             {"triple", triple(o.triple)}});
  }
  Json diag{{"N", d.N},
            {"offset", d.offset},
            {"epsilon", d.epsilon},
            {"block_norms", d.block_norms},
            {"f_table", std::move(f_table)},
            {"pigeonhole_class", d.pigeonhole_class},
            {"stabilized", d.stabilized},
            {"conflict_set", std::move(conflict)},
            {"active_set", std::move(active)},
            {"dropped", std::move(dropped)},
            {"H", labels_of(d.H, space)},
            {"offending", std::move(offending)},
            {"verification_drops", d.verification_drops},
            {"disjointness_ok", d.disjointness_ok},
            {"slack_chain_ok", d.slack_chain_ok},
            {"conflict_bound_ok", d.conflict_bound_ok}};
  Json j{{"success", result.success}, {"message", result.message}};
  if (result.certificate) {
    const WitnessCertificate& c = *result.certificate;
    Json g = Json::object();
    for (std::size_t i = 0; i < space.size(); ++i) g[space.label(i)] = c.g(i);
    j["certificate"] = Json{{"lip_g", c.lip_g},
                            {"retained", c.retained},
                            {"values", c.values},
                            {"norm_levels", c.norm_levels},
                            {"block_dropped", c.block_dropped},
                            {"slack", c.slack},
                            {"dropped_mass", c.dropped_mass},
                            {"g", std::move(g)}};
  } else {
    j["certificate"] = nullptr;
  }
  j["diagnostics"] = std::move(diag);
  return j;
}

Json write_schur(const ElementSequence& seq, const SchurCertificate& cert) {
  const SchurReport& r = cert.report;
  Json report{{"ca", r.ca},
              {"de_lower", r.de_lower},
              {"de_upper", r.de_upper},
              {"wca_estimate", r.wca_estimate ? Json(*r.wca_estimate) : Json(nullptr)},
              {"wde_note", r.wde_note},
              {"ratio_certified", r.ratio_certified ? Json(*r.ratio_certified) : Json(nullptr)},
              {"retained_items", r.retained_items},
              {"item_norms", r.item_norms},
              {"item_pairings", r.item_pairings},
              {"proxy_note", r.proxy_note},
              {"limit_note", r.limit_note}};
  Json j{{"success", cert.success}, {"trivial", cert.trivial}, {"message", cert.message}, {"report", report}};
  if (cert.hump) {
    const GlidingHump& h = *cert.hump;
    Json supports = Json::array();
    for (const auto& s : h.blocks.supports) supports.push_back(labels_of(s, seq.space()));
    j["gliding_hump"] = Json{{"epsilon", h.epsilon},
                             {"items", h.items},
                             {"residuals", h.residuals},
                             {"limit_deviations", h.limit_deviations},
                             {"limit", write_element(h.limit, seq.space())},
                             {"consensus_points", labels_of(h.consensus_points, seq.space())},
                             {"supports", std::move(supports)}};
  }
  if (cert.witness) j["witness"] = write_witness(seq.space(), *cert.witness);
  return j;
}

Json write_density(const DensityInterval& d) {
  return Json{{"a", write_rational(d.a)},
              {"b", write_rational(d.b)},
              {"measure", write_rational(d.measure)},
              {"density", write_rational(d.density)},
              {"density_value", to_double(d.density)},
              {"gaps_removed", d.gaps_removed}};
}

Json write_distortion(const std::vector<Rational>& sample, const DistortionPair& p) {
  return Json{{"x", p.x},
              {"y", p.y},
              {"x_value", write_rational(sample[p.x])},
              {"y_value", write_rational(sample[p.y])},
              {"ratio", write_rational(p.ratio)},
              {"ratio_value", to_double(p.ratio)},
              {"bound", write_rational(p.bound)},
              {"chain_bound", write_rational(p.chain_bound)},
              {"representatives", p.representatives}};
}

}  // namespace lipfree::io
