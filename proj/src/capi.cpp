#include "lipfree/lipfree.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "lipfree/error.hpp"
#include "lipfree/generators.hpp"
#include "lipfree/hyperbolic_tree.hpp"
#include "lipfree/json_io.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/schur_witness.hpp"
#include "lipfree/transport_norm.hpp"

using namespace lipfree;
using io::Json;

struct lf_space {
  FiniteMetricSpace space;
};

struct lf_tree {
  TreeEmbedding tree;
  std::vector<std::string> points;
};

struct lf_sequence {
  ElementSequence seq;
};

namespace {

thread_local std::string g_last_error;

lf_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return LF_INVALID_ARGUMENT;
    case ErrorCode::kStructural: return LF_PARSE_ERROR;
    case ErrorCode::kDomain: return LF_DOMAIN_FAILURE;
    case ErrorCode::kCapExceeded: return LF_CAP_EXCEEDED;
    case ErrorCode::kVerificationFailed: return LF_VERIFICATION_FAILED;
  }
  return LF_INTERNAL;
}

lf_status fail(lf_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
lf_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const Json::exception& e) {
    return fail(LF_PARSE_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LF_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LF_INTERNAL, e.what());
  } catch (...) {
    return fail(LF_INTERNAL, "unknown error");
  }
}

char* copy_out(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

void emit(const Json& j, char** out) { *out = copy_out(j.dump(2)); }

FreeElement element_from_arrays(std::size_t n, std::size_t k, const size_t* points, const double* coeffs) {
  if (k > 0 && (!points || !coeffs)) throw Error(ErrorCode::kInvalidArgument, "null coefficient arrays");
  std::map<std::size_t, double> c;
  for (std::size_t i = 0; i < k; ++i) {
    if (points[i] >= n) throw Error(ErrorCode::kInvalidArgument, "point index out of range");
    c[points[i]] += coeffs[i];
  }
  return FreeElement(std::move(c));
}

#define LF_REQUIRE(cond)                                                     \
  do {                                                                       \
    if (!(cond)) return fail(LF_INVALID_ARGUMENT, "null or invalid argument"); \
  } while (0)

}  // namespace

extern "C" {

const char* lf_version(void) { return "0.1.0"; }

const char* lf_last_error(void) { return g_last_error.c_str(); }

void lf_string_free(char* text) { std::free(text); }

// ---------------------------------------------------------------------------

lf_status lf_space_create(size_t n, const double* dist, const char* const* labels, lf_space** out) {
  LF_REQUIRE(out && (dist || n == 0));
  return guarded([&] {
    Matrix m(n, std::vector<double>(n));
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m[i][j] = dist[i * n + j];
      names.push_back(labels && labels[i] ? std::string(labels[i]) : std::to_string(i));
    }
    *out = new lf_space{FiniteMetricSpace::create(std::move(names), m)};
    return LF_OK;
  });
}

lf_status lf_space_from_json(const char* json, lf_space** out) {
  LF_REQUIRE(json && out);
  return guarded([&] {
    *out = new lf_space{io::read_space(io::parse(json))};
    return LF_OK;
  });
}

void lf_space_free(lf_space* space) { delete space; }

size_t lf_space_size(const lf_space* space) { return space ? space->space.size() : 0; }

double lf_space_distance(const lf_space* space, size_t i, size_t j) {
  if (!space || i >= space->space.size() || j >= space->space.size()) return -1.0;
  return space->space(i, j);
}

int lf_space_is_integer(const lf_space* space) { return space && space->space.is_integer() ? 1 : 0; }

lf_status lf_space_to_json(const lf_space* space, char** out) {
  LF_REQUIRE(space && out);
  return guarded([&] {
    emit(io::write_space(space->space), out);
    return LF_OK;
  });
}

lf_status lf_round_metric(const lf_space* space, double scale, lf_space** out) {
  LF_REQUIRE(space && out);
  return guarded([&] {
    *out = new lf_space{round_metric(space->space, scale)};
    return LF_OK;
  });
}

lf_status lf_snowflake(const lf_space* space, double exponent, lf_space** out) {
  LF_REQUIRE(space && out);
  return guarded([&] {
    *out = new lf_space{snowflake(space->space, exponent)};
    return LF_OK;
  });
}

lf_status lf_subdominant_ultrametric(const lf_space* space, lf_space** out) {
  LF_REQUIRE(space && out);
  return guarded([&] {
    *out = new lf_space{subdominant_ultrametric(space->space)};
    return LF_OK;
  });
}

// ---------------------------------------------------------------------------

lf_status lf_free_norm(const lf_space* space, size_t k, const size_t* points, const double* coeffs, double* value,
                       double* potential) {
  LF_REQUIRE(space && value);
  return guarded([&] {
    FreeElement mu = element_from_arrays(space->space.size(), k, points, coeffs);
    NormCertificate cert = free_norm(space->space, mu);
    *value = cert.value;
    if (potential) std::copy(cert.potential.begin(), cert.potential.end(), potential);
    return LF_OK;
  });
}

lf_status lf_integer_potential(const lf_space* space, size_t k, const size_t* points, const double* coeffs,
                               int64_t* values) {
  LF_REQUIRE(space && values);
  return guarded([&] {
    FreeElement mu = element_from_arrays(space->space.size(), k, points, coeffs);
    IntegerPotential ip = integer_potential(space->space, mu);
    std::copy(ip.values.begin(), ip.values.end(), values);
    return LF_OK;
  });
}

// ---------------------------------------------------------------------------

lf_status lf_tree_embed(const lf_space* space, lf_tree** out) {
  LF_REQUIRE(space && out);
  return guarded([&] {
    *out = new lf_tree{tree_embed(space->space), space->space.labels()};
    return LF_OK;
  });
}

lf_status lf_tree_from_json(const char* json, lf_tree** out) {
  LF_REQUIRE(json && out);
  return guarded([&] {
    Json j = io::parse(json);
    *out = new lf_tree{io::read_tree(j), io::tree_point_labels(j)};
    return LF_OK;
  });
}

void lf_tree_free(lf_tree* tree) { delete tree; }

size_t lf_tree_node_count(const lf_tree* tree) { return tree ? tree->tree.nodes.size() : 0; }

size_t lf_tree_steiner_count(const lf_tree* tree) { return tree ? tree->tree.steiner_count() : 0; }

lf_status lf_tree_to_json(const lf_tree* tree, char** out) {
  LF_REQUIRE(tree && out);
  return guarded([&] {
    emit(io::write_tree(tree->tree, tree->points), out);
    return LF_OK;
  });
}

lf_status lf_tree_cut_norm(const lf_tree* tree, size_t k, const size_t* points, const double* coeffs, double* value) {
  LF_REQUIRE(tree && value);
  return guarded([&] {
    *value = tree_cut_norm(tree->tree, element_from_arrays(tree->tree.map.size(), k, points, coeffs));
    return LF_OK;
  });
}

// ---------------------------------------------------------------------------

lf_status lf_sequence_from_json(const char* json, lf_sequence** out) {
  LF_REQUIRE(json && out);
  return guarded([&] {
    *out = new lf_sequence{io::read_sequence(io::parse(json))};
    return LF_OK;
  });
}

void lf_sequence_free(lf_sequence* seq) { delete seq; }

size_t lf_sequence_length(const lf_sequence* seq) { return seq ? seq->seq.size() : 0; }

lf_status lf_sequence_osc(const lf_sequence* seq, double* ca) {
  LF_REQUIRE(seq && ca);
  return guarded([&] {
    *ca = osc_ca(seq->seq);
    return LF_OK;
  });
}

lf_status lf_schur_certificate(const lf_sequence* seq, double epsilon, char** report) {
  LF_REQUIRE(seq && report);
  return guarded([&] {
    SchurCertificate cert = schur_certificate(seq->seq, epsilon);
    emit(io::write_schur(seq->seq, cert), report);
    if (!cert.success) return fail(LF_DOMAIN_FAILURE, cert.message);
    return LF_OK;
  });
}

// ---------------------------------------------------------------------------

lf_status lf_validate_json(const char* space_json, char** report) {
  LF_REQUIRE(space_json && report);
  return guarded([&] {
    io::RawSpace raw = io::read_raw_space(io::parse(space_json));
    ValidationReport v = validate_metric(raw.dist);
    Json j = io::write_validation(v);
    j["size"] = raw.dist.size();
    emit(j, report);
    if (!v.ok) return fail(LF_DOMAIN_FAILURE, "not a metric");
    return LF_OK;
  });
}

lf_status lf_classify_json(const char* space_json, char** report) {
  LF_REQUIRE(space_json && report);
  return guarded([&] {
    io::RawSpace raw = io::read_raw_space(io::parse(space_json));
    ValidationReport v = validate_metric(raw.dist);
    if (!v.ok) {
      emit(io::write_validation(v), report);
      return fail(LF_DOMAIN_FAILURE, "not a metric");
    }
    emit(io::write_classification(FiniteMetricSpace::create(std::move(raw.labels), raw.dist)), report);
    return LF_OK;
  });
}

lf_status lf_norm_json(const char* space_json, const char* element_json, int integer_certificate, char** report) {
  LF_REQUIRE(space_json && element_json && report);
  return guarded([&] {
    FiniteMetricSpace space = io::read_space(io::parse(space_json));
    FreeElement mu = io::read_element(io::parse(element_json), space);
    if (integer_certificate && !space.is_integer()) throw Error(ErrorCode::kDomain, "requires integer metric");
    NormCertificate cert = free_norm(space, mu);
    Json j = io::write_norm(space, mu, cert);
    if (integer_certificate) j["integer_certificate"] = io::write_integer_potential(space, integer_potential(space, mu));
    j["verified"] = true;
    emit(j, report);
    return LF_OK;
  });
}

lf_status lf_witness_json(const char* sequence_json, double epsilon, char** report) {
  LF_REQUIRE(sequence_json && report);
  return guarded([&] {
    ElementSequence seq = io::read_sequence(io::parse(sequence_json));
    SchurCertificate cert = schur_certificate(seq, epsilon);
    emit(io::write_schur(seq, cert), report);
    if (!cert.success) return fail(LF_DOMAIN_FAILURE, cert.message);
    return LF_OK;
  });
}

lf_status lf_generate_json(const char* family, const char* params_json, uint64_t seed, char** out) {
  LF_REQUIRE(family && out);
  return guarded([&] {
    auto fam = parse_family(family);
    if (!fam) throw Error(ErrorCode::kInvalidArgument, std::string("unknown family '") + family + "'");
    GeneratorSpec spec;
    spec.family = *fam;
    if (params_json) {
      Json p = io::parse(params_json);
      if (!p.is_object()) throw Error(ErrorCode::kStructural, "generator parameters must be an object");
      if (p.contains("points")) spec.points = p.at("points").get<std::size_t>();
      if (p.contains("N")) spec.N = p.at("N").get<std::int64_t>();
      if (p.contains("blocks")) spec.blocks = p.at("blocks").get<std::size_t>();
      if (p.contains("support")) spec.support = p.at("support").get<std::size_t>();
    }
    spec.validate();
    Rng rng(seed);
    Json j;
    switch (spec.family) {
      case Family::kUniformDiscrete: j = io::write_space(random_uniform_discrete(rng, spec.points)); break;
      case Family::kIntegerMetric: j = io::write_space(random_integer_metric(rng, spec.points, spec.N)); break;
      case Family::kTree: j = io::write_space(random_tree(rng, spec.points).space); break;
      case Family::kUltrametric: j = io::write_space(random_ultrametric(rng, spec.points)); break;
      case Family::kBlockSequence: {
        BlockInstance inst = random_block_instance(rng, spec.N, spec.blocks, spec.support);
        j = io::write_sequence(inst.space, inst.items());
        break;
      }
      case Family::kConflictBlock: {
        BlockInstance inst = conflict_block_instance(rng, spec.blocks, spec.support);
        j = io::write_sequence(inst.space, inst.items());
        break;
      }
    }
    emit(j, out);
    return LF_OK;
  });
}

lf_status lf_tree_embed_json(const char* space_json, char** tree_json) {
  LF_REQUIRE(space_json && tree_json);
  return guarded([&] {
    FiniteMetricSpace space = io::read_space(io::parse(space_json));
    try {
      emit(io::write_tree(tree_embed(space), space.labels()), tree_json);
    } catch (const FourPointError& e) {
      Json j{{"ok", false}, {"message", e.what()}};
      if (e.witness()) {
        const auto& w = *e.witness();
        j["witness"] = Json{{"points", {space.label(w.x), space.label(w.y), space.label(w.z), space.label(w.u)}},
                            {"slack", w.slack}};
      }
      emit(j, tree_json);
      return fail(LF_DOMAIN_FAILURE, e.what());
    }
    return LF_OK;
  });
}

lf_status lf_tree_norm_json(const char* tree_json, const char* element_json, char** report) {
  LF_REQUIRE(tree_json && element_json && report);
  return guarded([&] {
    Json tj = io::parse(tree_json);
    TreeEmbedding tree = io::read_tree(tj);
    std::vector<std::string> points = io::tree_point_labels(tj);
    Json ej = io::parse(element_json);
    if (!ej.contains("coeffs") || !ej.at("coeffs").is_object()) {
      throw Error(ErrorCode::kStructural, "element needs a 'coeffs' object");
    }
    std::map<std::size_t, double> coeffs;
    for (const auto& [label, value] : ej.at("coeffs").items()) {
      auto it = std::find(points.begin(), points.end(), label);
      if (it == points.end()) throw Error(ErrorCode::kInvalidArgument, "unmapped support point '" + label + "'");
      coeffs[static_cast<std::size_t>(it - points.begin())] += io::read_real(value);
    }
    FreeElement mu(std::move(coeffs));
    const Rational exact = tree_cut_norm_exact(tree, mu);
    Json j{{"value", to_double(exact)}, {"exact_value", to_string(exact)}};

    // Cross-check against the transport solver on the induced path metric.
    FiniteMetricSpace metric = tree_point_metric(tree);
    const double transport = free_norm(metric, mu).value;
    const double gap = std::fabs(transport - to_double(exact));
    j["free_norm"] = transport;
    j["agree"] = gap <= kDualityTolerance * std::max(1.0, transport);
    emit(j, report);
    if (!j["agree"].get<bool>()) return fail(LF_VERIFICATION_FAILED, "edge-cut norm differs from the free norm");
    return LF_OK;
  });
}

lf_status lf_density_json(const char* intervals_json, double epsilon, char** report) {
  LF_REQUIRE(intervals_json && report);
  return guarded([&] {
    IntervalUnion k = io::read_intervals(io::parse(intervals_json));
    emit(io::write_density(density_interval(k, epsilon)), report);
    return LF_OK;
  });
}

lf_status lf_distortion_json(const char* sample_json, char** report) {
  LF_REQUIRE(sample_json && report);
  return guarded([&] {
    Json j = io::parse(sample_json);
    if (!j.is_object() || !j.contains("sample") || !j.at("sample").is_array()) {
      throw Error(ErrorCode::kStructural, "missing field 'sample'");
    }
    std::vector<Rational> sample;
    for (const auto& v : j.at("sample")) sample.push_back(io::read_rational(v));
    if (sample.empty()) throw Error(ErrorCode::kInvalidArgument, "sample is empty");
    if (!j.contains("n")) throw Error(ErrorCode::kStructural, "missing field 'n'");
    const auto n = j.at("n").get<std::size_t>();
    Rational a = *std::min_element(sample.begin(), sample.end());
    Rational b = *std::max_element(sample.begin(), sample.end());
    if (j.contains("interval")) {
      const Json& iv = j.at("interval");
      if (!iv.is_array() || iv.size() != 2) throw Error(ErrorCode::kStructural, "'interval' must be [a, b]");
      a = io::read_rational(iv[0]);
      b = io::read_rational(iv[1]);
    }
    FiniteMetricSpace um = j.contains("dist") ? io::read_space(Json{{"dist", j.at("dist")}})
                                              : subdominant_ultrametric(line_metric(sample));
    emit(io::write_distortion(sample, distortion_pair(sample, um, n, a, b)), report);
    return LF_OK;
  });
}

lf_status lf_round_metric_json(const char* space_json, double scale, char** out) {
  LF_REQUIRE(space_json && out);
  return guarded([&] {
    emit(io::write_space(round_metric(io::read_space(io::parse(space_json)), scale)), out);
    return LF_OK;
  });
}

lf_status lf_snowflake_json(const char* space_json, double exponent, char** out) {
  LF_REQUIRE(space_json && out);
  return guarded([&] {
    emit(io::write_space(snowflake(io::read_space(io::parse(space_json)), exponent)), out);
    return LF_OK;
  });
}

}  // extern "C"
