#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lipfree/generators.hpp"
#include "lipfree/hyperbolic_tree.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/schur_witness.hpp"
#include "lipfree/transport_norm.hpp"

namespace lipfree::io {

using Json = nlohmann::ordered_json;

// Malformed text or shapes throw Error(kStructural).
Json parse(const std::string& text);

// Numbers, or strings holding "p/q" and decimal literals.
Rational read_rational(const Json& value);
double read_real(const Json& value);
// Integral numbers as numbers, other rationals as "p/q" unless the double
// round-trips exactly.
Json write_rational(const Rational& value);

struct RawSpace {
  std::vector<std::string> labels;
  Matrix dist;
};

RawSpace read_raw_space(const Json& j);  // {"points": [...], "dist": [[...]]}
FiniteMetricSpace read_space(const Json& j);
Json write_space(const FiniteMetricSpace& space);

FreeElement read_element(const Json& j, const FiniteMetricSpace& space);  // {"coeffs": {label: value}}
Json write_element(const FreeElement& mu, const FiniteMetricSpace& space);

ElementSequence read_sequence(const Json& j);  // {"space": ..., "items": [...]}
Json write_sequence(const FiniteMetricSpace& space, const std::vector<FreeElement>& items);

TreeEmbedding read_tree(const Json& j);  // {"nodes", "edges": [[u, v, len]], "map": {point: node}}
// `points` labels the mapped points; defaults to the mapped node names.
Json write_tree(const TreeEmbedding& tree, const std::vector<std::string>& points = {});
std::vector<std::string> tree_point_labels(const Json& j);

IntervalUnion read_intervals(const Json& j);  // {"intervals": [[l, r], ...]}

Json write_validation(const ValidationReport& report);
Json write_classification(const FiniteMetricSpace& space);
Json write_norm(const FiniteMetricSpace& space, const FreeElement& mu, const NormCertificate& cert);
Json write_integer_potential(const FiniteMetricSpace& space, const IntegerPotential& ip);
Json write_witness(const FiniteMetricSpace& space, const WitnessResult& result);
Json write_schur(const ElementSequence& seq, const SchurCertificate& cert);
Json write_density(const DensityInterval& d);
Json write_distortion(const std::vector<Rational>& sample, const DistortionPair& p);

}  // namespace lipfree::io
