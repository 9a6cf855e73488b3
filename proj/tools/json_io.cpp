#include "json_io.hpp"

#include <algorithm>
#include <cmath>

namespace nnorm::json_io {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw InputError(std::string(what) + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Component component_from_json(const Json& j) {
  Element e = element_from_json(j);
  if (auto* v = std::get_if<Vector>(&e)) return *v;
  if (auto* p = std::get_if<Polynomial>(&e)) return *p;
  throw InputError("product pair sides must be vectors or polynomials");
}

Json component_to_json(const Component& c) {
  if (const auto* v = std::get_if<Vector>(&c)) return to_json(Element(*v));
  return to_json(Element(std::get<Polynomial>(c)));
}

Json doubles(std::span<const double> xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

std::size_t coeff_len(const Element& e) {
  if (const auto* p = std::get_if<Polynomial>(&e)) return p->coeffs().size();
  return 0;
}

}  // namespace

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

Element element_from_json(const Json& j) {
  if (j.is_array()) return Vector(numbers(j, "vector"));
  if (j.is_object() && j.contains("coeffs")) return Polynomial(numbers(j.at("coeffs"), "coeffs"));
  if (j.is_object() && j.contains("left") && j.contains("right")) {
    return ProductPair{component_from_json(j.at("left")), component_from_json(j.at("right"))};
  }
  throw InputError("element must be an array, {\"coeffs\": ...} or {\"left\": ..., \"right\": ...}");
}

std::vector<Element> elements_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array of elements");
  std::vector<Element> out;
  for (const auto& e : j) out.push_back(element_from_json(e));
  return out;
}

Json to_json(const Element& e) {
  if (const auto* v = std::get_if<Vector>(&e)) return doubles(v->coords());
  if (const auto* p = std::get_if<Polynomial>(&e)) return Json{{"coeffs", doubles(p->coeffs())}};
  const auto& q = std::get<ProductPair>(e);
  return Json{{"left", component_to_json(q.left)}, {"right", component_to_json(q.right)}};
}

Json to_json(std::span<const Element> es) {
  Json a = Json::array();
  for (const auto& e : es) a.push_back(to_json(e));
  return a;
}

NNorm nnorm_from_json(const Json& j) {
  const auto kind_text = require(j, "kind").get<std::string>();
  const auto kind = parse_nnorm_kind(kind_text);
  if (!kind) throw InputError("unknown n-norm kind \"" + kind_text + "\"");
  if (*kind == NNormKind::ProductSum || *kind == NNormKind::ProductMax) {
    const auto& comps = require(j, "components");
    if (!comps.is_array() || comps.size() != 2) {
      throw InputError("product n-norms need exactly two components");
    }
    NNorm x = nnorm_from_json(comps[0]);
    NNorm y = nnorm_from_json(comps[1]);
    if (j.contains("arity") && j.at("arity").get<std::size_t>() != x.arity()) {
      throw InputError("product arity differs from its components");
    }
    return *kind == NNormKind::ProductSum ? NNorm::product_sum(x, y) : NNorm::product_max(x, y);
  }
  const auto arity = require(j, "arity").get<std::size_t>();
  if (arity < 2) throw InputError("arity must be at least 2");
  switch (*kind) {
    case NNormKind::Determinant: return NNorm::determinant(arity);
    case NNormKind::PolyCoeffProduct: return NNorm::poly_coeff_product(arity);
    case NNormKind::SignedDeterminant: return NNorm::signed_determinant(arity);
    default: break;
  }
  throw InputError("unhandled n-norm kind");
}

Json to_json(const NNorm& norm) {
  Json j{{"kind", to_string(norm.kind())}, {"arity", norm.arity()}};
  if (norm.is_product()) {
    j["components"] = Json::array({to_json(norm.components()[0]), to_json(norm.components()[1])});
  }
  return j;
}

BAnchors anchors_from_json(const Json& j) {
  const Json* scalars = nullptr;
  if (j.contains("b_scalars")) {
    scalars = &j.at("b_scalars");
  } else if (j.contains("action") && j.at("action").contains("b_scalars")) {
    scalars = &j.at("action").at("b_scalars");
  }
  if (scalars) return BAnchors::scalars(numbers(*scalars, "b_scalars"));
  auto anchors = elements_from_json(require(j, "anchors"));
  NNorm norm = j.contains("norm") ? nnorm_from_json(j.at("norm"))
                                  : NNorm::determinant(anchors.size() + 1);
  return BAnchors(std::move(norm), std::move(anchors));
}

Json anchors_to_json(const BAnchors& b) {
  if (b.is_scalar()) return Json{{"b_scalars", doubles(b.scalars())}};
  return Json{{"norm", to_json(b.norm())}, {"anchors", to_json(b.elements())}};
}

ElementSpace space_covering(std::span<const Element> elements) {
  if (elements.empty()) throw InputError("no elements to infer a space from");
  std::size_t coeffs = 1;
  for (const auto& e : elements) coeffs = std::max(coeffs, coeff_len(e));
  return ElementSpace::of(elements.front(), coeffs);
}

Subspace subspace_from_json(const Json& j, const ElementSpace& space) {
  return Subspace(space, elements_from_json(require(j, "basis")));
}

Json to_json(const Subspace& s) { return Json{{"basis", to_json(s.basis())}}; }

BLinearFunctional functional_from_json(const Json& j) {
  BAnchors anchors = anchors_from_json(j);
  const auto& a = require(j, "action");
  const auto kind = require(a, "kind").get<std::string>();
  FunctionalAction action;
  if (kind == "weight") {
    action = WeightForm{numbers(require(a, "w"), "w")};
  } else if (kind == "determinant") {
    action = DeterminantForm{require(a, "c").get<double>()};
  } else if (kind == "partial_sum") {
    action = PartialSumForm{require(a, "k").get<std::size_t>()};
  } else {
    throw InputError("unknown action kind \"" + kind + "\"");
  }
  std::optional<Subspace> carrier;
  if (j.contains("carrier")) {
    auto basis = elements_from_json(require(j.at("carrier"), "basis"));
    std::size_t coeffs = 1;
    for (const auto& e : basis) coeffs = std::max(coeffs, coeff_len(e));
    if (const auto* w = std::get_if<WeightForm>(&action)) coeffs = std::max(coeffs, w->w.size());
    if (basis.empty()) throw InputError("carrier basis must be nonempty");
    const auto space = ElementSpace::of(basis.front(), coeffs);
    carrier = Subspace(space, std::move(basis));
  }
  return BLinearFunctional(std::move(anchors), std::move(action), std::move(carrier));
}

Json to_json(const BLinearFunctional& T) {
  Json j = anchors_to_json(T.anchors());
  Json a{{"kind", action_name(T.action())}};
  if (const auto* w = std::get_if<WeightForm>(&T.action())) a["w"] = doubles(w->w);
  if (const auto* d = std::get_if<DeterminantForm>(&T.action())) a["c"] = number(d->c);
  if (const auto* p = std::get_if<PartialSumForm>(&T.action())) a["k"] = p->k;
  j["action"] = a;
  if (T.carrier()) j["carrier"] = to_json(*T.carrier());
  return j;
}

SequenceSample sequence_from_json(const Json& j) {
  SequenceSample s;
  s.terms = elements_from_json(require(j, "terms"));
  if (j.contains("anchors")) {
    for (const auto& set : j.at("anchors")) s.anchor_sets.push_back(elements_from_json(set));
  }
  return s;
}

linalg::Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InputError("operator must be a nonempty array of rows");
  linalg::Matrix m;
  for (const auto& row : j) m.push_back(numbers(row, "operator row"));
  for (const auto& row : m) {
    if (row.size() != m.front().size()) throw InputError("operator rows differ in length");
  }
  return m;
}

Json to_json(const AxiomReport& r, std::size_t max_listed) {
  Json counts;
  for (auto a : {Axiom::N1, Axiom::N2, Axiom::N3, Axiom::N4}) counts[to_string(a)] = r.count(a);
  Json list = Json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < max_listed; ++i) {
    const auto& v = r.violations[i];
    list.push_back(Json{{"axiom", to_string(v.axiom)},
                        {"sample_index", v.sample_index},
                        {"detail", v.detail},
                        {"observed", number(v.observed)},
                        {"expected", number(v.expected)},
                        {"witness", to_json(v.witness)}});
  }
  return Json{{"samples_checked", r.samples_checked},
              {"evaluations", r.evaluations},
              {"violation_count", r.violations.size()},
              {"counts", counts},
              {"violations", list},
              {"ok", r.ok()}};
}

Json to_json(const NormEstimate& e) {
  return Json{{"lower", number(e.lower)},
              {"exact", e.exact ? number(*e.exact) : Json(nullptr)},
              {"unbounded", e.unbounded},
              {"certificate", to_string(e.certificate)},
              {"witness", e.witness ? to_json(*e.witness) : Json(nullptr)},
              {"evaluations", e.evaluations}};
}

Json to_json(const PropertyReport& r) {
  Json list = Json::array();
  for (const auto& v : r.violations) {
    list.push_back(Json{{"index", v.index},
                        {"detail", v.detail},
                        {"observed", number(v.observed)},
                        {"bound", number(v.bound)}});
  }
  return Json{{"checked", r.checked}, {"violations", list}, {"ok", r.ok()}};
}

Json to_json(const ConvergenceReport& r) {
  return Json{{"converged", r.converged},
              {"limit", r.limit ? to_json(*r.limit) : Json(nullptr)},
              {"max_tail_norm", number(r.max_tail_norm)},
              {"tail_start", r.tail_start},
              {"anchor_sets_checked", r.anchor_sets_checked},
              {"tol", number(r.tol)},
              {"evidence_only", r.evidence_only}};
}

Json to_json(const GraphReport& r) {
  return Json{{"x_convergence", to_json(r.x_convergence)},
              {"y_convergence", to_json(r.y_convergence)},
              {"graph_tail", number(r.graph_tail)},
              {"residual", number(r.residual)},
              {"residual_x", number(r.residual_x)},
              {"residual_y", number(r.residual_y)},
              {"premises_hold", r.premises_hold},
              {"closed", r.closed},
              {"anchor_pairs_checked", r.anchor_pairs_checked},
              {"evidence_only", r.evidence_only}};
}

Json to_json(const MemberBound& m) {
  const auto& e = m.norm;
  return Json{{"label", m.label},
              {"norm_lower", number(e.exact.value_or(e.lower))},
              {"exact", e.exact.has_value()},
              {"unbounded", e.unbounded},
              {"witness", e.witness ? to_json(*e.witness) : Json(nullptr)}};
}

Json to_json(const WeakStarReport& r) {
  Json members = Json::array();
  for (const auto& m : r.members) members.push_back(to_json(m));
  return Json{{"members", members},
              {"verdicts",
               {{"norms_bounded", r.norms_bounded},
                {"cauchy_on_total", r.cauchy_on_total},
                {"cauchy_on_points", r.cauchy_on_points},
                {"converges_to_candidate", r.converges_to_candidate},
                {"conditions_hold", r.conditions_hold},
                {"agrees", r.agrees}}},
              {"max_candidate_gap", number(r.max_candidate_gap)},
              {"evidence_only", r.evidence_only}};
}

Json to_json(const AlphaInterval& a) {
  return Json{{"lo", number(a.lo)},
              {"hi", number(a.hi)},
              {"lo_witness", to_json(a.lo_witness)},
              {"hi_witness", to_json(a.hi_witness)},
              {"sample_count", a.sample_count},
              {"inverted", a.inverted}};
}

Json to_json(const ExtensionResult& r) {
  return Json{{"extended", to_json(r.extended)},
              {"alpha", r.alpha ? number(*r.alpha) : Json(nullptr)},
              {"restriction_residual", number(r.restriction_residual)},
              {"norm_original", number(r.norm_original)},
              {"norm_extended_lower", number(r.norm_extended_lower)},
              {"norm_extended_exact",
               r.norm_extended_exact ? number(*r.norm_extended_exact) : Json(nullptr)},
              {"samples_checked", r.samples_checked},
              {"bound_violations", r.bound_violations},
              {"max_bound_excess", number(r.max_bound_excess)},
              {"norm_not_decreased_evidence", r.norm_not_decreased_evidence},
              {"preserved", r.preserved}};
}

Json to_json(const DistanceResult& d) {
  return Json{{"h", number(d.h)},
              {"nearest", to_json(d.nearest)},
              {"exact", d.exact},
              {"evidence_only", d.evidence_only}};
}

Json to_json(const AnnihilatorResult& a) {
  return Json{{"functional", to_json(a.functional)},
              {"h", number(a.h)},
              {"value_at_x1", number(a.value_at_x1)},
              {"norm", number(a.norm)},
              {"norm_exact", a.norm_exact},
              {"vanishing_residual", number(a.vanishing_residual)},
              {"in_annihilator", a.in_annihilator},
              {"in_unit_annihilator", a.in_unit_annihilator}};
}

Json to_json(const DualityReport& d) {
  return Json{{"lhs", number(d.lhs)},
              {"rhs", number(d.rhs)},
              {"gap", number(d.gap)},
              {"exact", d.exact},
              {"pool_size", d.pool_size}};
}

}  // namespace nnorm::json_io
