#pragma once

// JSON encodings of elements, n-norms, functionals, subspaces and sequence
// samples, and of the reports the command-line front end emits.
//
//   Vector       [x1, ..., xd]
//   Polynomial   {"coeffs": [a0, a1, ...]}
//   ProductPair  {"left": side, "right": side}, each side a Vector or Polynomial
//   NNorm        {"kind": "determinant" | ..., "arity": n, "components": [...]}
//   Functional   {"norm": NNorm, "anchors": [...] | "b_scalars": [...],
//                 "action": {"kind": "weight", "w": [...]}
//                         | {"kind": "determinant", "c": c}
//                         | {"kind": "partial_sum", "k": k, "b_scalars": [...]},
//                 "carrier": {"basis": [...]}}
//   Sequence     {"terms": [...], "anchors": [[...], ...]}   (one list per anchor set)

#include <string>
#include <vector>

#include "json.hpp"

#include "nnorm/error.hpp"
#include "nnorm/functional.hpp"
#include "nnorm/hahn_banach.hpp"
#include "nnorm/nnorm.hpp"
#include "nnorm/sequences.hpp"
#include "nnorm/subspace.hpp"
#include "nnorm/ubp.hpp"

namespace nnorm::json_io {

using Json = nlohmann::json;

/// Malformed or semantically invalid input document.
class InputError : public Error {
 public:
  using Error::Error;
};

Json parse_document(const std::string& text);

Element element_from_json(const Json& j);
std::vector<Element> elements_from_json(const Json& j);
Json to_json(const Element& e);
Json to_json(std::span<const Element> es);

NNorm nnorm_from_json(const Json& j);
Json to_json(const NNorm& norm);

/// Anchors of a functional document: "b_scalars" (top level or inside the
/// action) give scalar anchors; otherwise "anchors" under "norm", which
/// defaults to the determinant n-norm of arity anchors + 1.
BAnchors anchors_from_json(const Json& j);
Json anchors_to_json(const BAnchors& b);

/// The space the listed elements live in; polynomials get the longest
/// coefficient list among them.
ElementSpace space_covering(std::span<const Element> elements);

Subspace subspace_from_json(const Json& j, const ElementSpace& space);
Json to_json(const Subspace& s);

BLinearFunctional functional_from_json(const Json& j);
Json to_json(const BLinearFunctional& T);

SequenceSample sequence_from_json(const Json& j);
linalg::Matrix matrix_from_json(const Json& j);

Json to_json(const AxiomReport& r, std::size_t max_listed = 50);
Json to_json(const NormEstimate& e);
Json to_json(const PropertyReport& r);
Json to_json(const ConvergenceReport& r);
Json to_json(const GraphReport& r);
Json to_json(const MemberBound& m);
Json to_json(const WeakStarReport& r);
Json to_json(const AlphaInterval& a);
Json to_json(const ExtensionResult& r);
Json to_json(const DistanceResult& d);
Json to_json(const AnnihilatorResult& a);
Json to_json(const DualityReport& d);

/// Non-finite doubles become null.
Json number(double x);

}  // namespace nnorm::json_io
