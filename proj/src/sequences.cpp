#include "nnorm/sequences.hpp"

#include <algorithm>
#include <cmath>

#include "nnorm/error.hpp"
#include "nnorm/sampling.hpp"

namespace nnorm {

namespace {

void require_tail_args(double tail_fraction, double tol) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw PreconditionError("tail fraction must lie in (0, 1]");
  }
  if (!(tol >= 0.0)) throw PreconditionError("tolerance must be nonnegative");
}

std::size_t tail_start(std::size_t count, double tail_fraction) {
  auto len = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(count)));
  len = std::clamp<std::size_t>(len, 1, count);
  return count - len;
}

std::size_t max_coeff_count(std::span<const Element> terms) {
  std::size_t m = 0;
  for (const auto& e : terms) {
    if (const auto* p = std::get_if<Polynomial>(&e)) m = std::max(m, p->coeffs().size());
    if (const auto* q = std::get_if<ProductPair>(&e)) {
      for (const Component* c : {&q->left, &q->right}) {
        if (const auto* p = std::get_if<Polynomial>(c)) m = std::max(m, p->coeffs().size());
      }
    }
  }
  return m;
}

std::vector<AnchoredNorm> measures_for(const NNorm& norm, const SequenceSample& seq,
                                       bool standard_anchors) {
  if (seq.terms.empty()) throw ShapeError("sequence has no terms");
  require_homogeneous(seq.terms);
  std::vector<AnchoredNorm> out;
  for (std::size_t i = 0; i < seq.anchor_sets.size(); ++i) {
    try {
      out.emplace_back(norm, seq.anchor_sets[i]);
    } catch (const ShapeError& e) {
      throw ShapeError(std::string("anchor set ") + std::to_string(i) + ": " + e.what(), i);
    }
  }
  if (standard_anchors) {
    const std::size_t coeffs = std::max(max_coeff_count(seq.terms), norm.arity());
    for (auto& set : standard_anchor_sets(norm, seq.terms.front(), coeffs)) {
      out.emplace_back(norm, std::move(set));
    }
  }
  if (out.empty()) throw PreconditionError("no anchor sets to quantify over");
  return out;
}

ConvergenceReport fold(std::vector<double> per_anchor, std::size_t start, double tol) {
  ConvergenceReport r;
  r.per_anchor_tail = std::move(per_anchor);
  r.anchor_sets_checked = r.per_anchor_tail.size();
  r.max_tail_norm = r.per_anchor_tail.empty()
                        ? 0.0
                        : *std::max_element(r.per_anchor_tail.begin(), r.per_anchor_tail.end());
  r.tail_start = start;
  r.tol = tol;
  r.converged = r.max_tail_norm <= tol;
  return r;
}

}  // namespace

std::vector<std::vector<Element>> standard_anchor_sets(const NNorm& norm,
                                                       const Element& prototype,
                                                       std::size_t poly_coeffs) {
  const std::size_t k = norm.arity() - 1;
  const auto space =
      ElementSpace::of(prototype, poly_coeffs == 0 ? norm.arity() : poly_coeffs);
  const auto units = space.basis();
  std::vector<std::vector<Element>> sets;
  if (units.size() < k) return sets;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (sets.size() < kMaxStandardAnchorSets) {
    std::vector<Element> set;
    for (std::size_t i : idx) set.push_back(units[i]);
    sets.push_back(std::move(set));
    // next k-combination of units.size() in lexicographic order
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == units.size() - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return sets;
}

ConvergenceReport check_convergence_anchored(std::span<const AnchoredNorm> measures,
                                             std::span<const Element> terms,
                                             const Element& candidate_limit,
                                             double tail_fraction, double tol) {
  require_tail_args(tail_fraction, tol);
  if (terms.empty()) throw ShapeError("sequence has no terms");
  const std::size_t start = tail_start(terms.size(), tail_fraction);
  std::vector<Element> diffs;
  diffs.reserve(terms.size() - start);
  for (std::size_t k = start; k < terms.size(); ++k) {
    try {
      diffs.push_back(subtract(terms[k], candidate_limit));
    } catch (const ShapeError& e) {
      throw ShapeError(std::string("limit incompatible with term ") + std::to_string(k) + ": " +
                           e.what(),
                       k);
    }
  }
  std::vector<double> per_anchor;
  for (const auto& m : measures) {
    double worst = 0.0;
    for (const auto& d : diffs) worst = std::max(worst, m(d));
    per_anchor.push_back(worst);
  }
  auto r = fold(std::move(per_anchor), start, tol);
  r.limit = candidate_limit;
  return r;
}

ConvergenceReport check_convergence(const NNorm& norm, const SequenceSample& seq,
                                    const Element& candidate_limit, double tail_fraction,
                                    double tol, bool standard_anchors) {
  require_tail_args(tail_fraction, tol);
  auto measures = measures_for(norm, seq, standard_anchors);
  return check_convergence_anchored(measures, seq.terms, candidate_limit, tail_fraction, tol);
}

ConvergenceReport check_cauchy(const NNorm& norm, const SequenceSample& seq, double tail_fraction,
                               double tol, bool standard_anchors) {
  require_tail_args(tail_fraction, tol);
  auto measures = measures_for(norm, seq, standard_anchors);
  const std::size_t start = tail_start(seq.terms.size(), tail_fraction);
  std::vector<double> per_anchor(measures.size(), 0.0);
  for (std::size_t l = start; l < seq.terms.size(); ++l) {
    for (std::size_t k = l + 1; k < seq.terms.size(); ++k) {
      const Element d = subtract(seq.terms[l], seq.terms[k]);
      for (std::size_t a = 0; a < measures.size(); ++a) {
        per_anchor[a] = std::max(per_anchor[a], measures[a](d));
      }
    }
  }
  return fold(std::move(per_anchor), start, tol);
}

Vector apply_matrix(const linalg::Matrix& op, const Vector& x) {
  if (op.empty()) throw ShapeError("operator matrix has no rows");
  std::vector<double> y(op.size());
  for (std::size_t i = 0; i < op.size(); ++i) {
    if (op[i].size() != x.dim()) {
      throw ShapeError("operator row " + std::to_string(i) + " has length " +
                           std::to_string(op[i].size()) + ", input dimension is " +
                           std::to_string(x.dim()),
                       i);
    }
    y[i] = linalg::dot(op[i], x.coords());
  }
  return Vector(std::move(y));
}

GraphReport check_closed_graph(const NNorm& norm_x, const NNorm& norm_y,
                               const linalg::Matrix& op, const SequenceSample& seq,
                               const Element& x_limit, const Element& y_limit, double tol,
                               double tail_fraction) {
  require_tail_args(tail_fraction, tol);
  if (norm_x.arity() != norm_y.arity()) {
    throw ShapeError("graph norms must share arity");
  }
  if (seq.terms.empty()) throw ShapeError("sequence has no terms");
  auto as_vector = [](const Element& e, const char* what) -> const Vector& {
    const auto* v = std::get_if<Vector>(&e);
    if (!v) throw ShapeError(std::string(what) + " must be a vector");
    return *v;
  };
  const Vector& xl = as_vector(x_limit, "x limit");
  const Vector& yl = as_vector(y_limit, "y limit");
  const std::size_t dy = op.size();
  if (yl.dim() != dy) throw ShapeError("y limit dimension differs from operator rows");

  std::vector<Element> images;
  images.reserve(seq.terms.size());
  for (std::size_t k = 0; k < seq.terms.size(); ++k) {
    try {
      images.emplace_back(apply_matrix(op, as_vector(seq.terms[k], "sequence term")));
    } catch (const ShapeError& e) {
      throw ShapeError(std::string("term ") + std::to_string(k) + ": " + e.what(), k);
    }
  }

  GraphReport g;
  auto x_measures = measures_for(norm_x, seq, true);
  SequenceSample yseq{images, {}};
  auto y_measures = measures_for(norm_y, yseq, true);
  g.x_convergence =
      check_convergence_anchored(x_measures, seq.terms, x_limit, tail_fraction, tol);
  g.y_convergence = check_convergence_anchored(y_measures, images, y_limit, tail_fraction, tol);
  g.premises_hold = g.x_convergence.converged && g.y_convergence.converged;

  // product-sum graph norm over every (X set, Y set) anchor pair
  const NNorm graph = NNorm::product_sum(norm_x, norm_y);
  const Element gap = subtract(Element(apply_matrix(op, xl)), y_limit);
  const Element zero_x = zero_like(x_limit);
  const std::size_t start = tail_start(seq.terms.size(), tail_fraction);
  for (const auto& mx : x_measures) {
    for (const auto& my : y_measures) {
      std::vector<Element> pairs;
      for (std::size_t i = 0; i + 1 < norm_x.arity(); ++i) {
        pairs.emplace_back(ProductPair{std::get<Vector>(mx.anchors()[i]),
                                       std::get<Vector>(my.anchors()[i])});
      }
      AnchoredNorm gm(graph, pairs);
      ++g.anchor_pairs_checked;
      for (std::size_t k = start; k < seq.terms.size(); ++k) {
        ProductPair d{std::get<Vector>(subtract(seq.terms[k], x_limit)),
                      std::get<Vector>(subtract(images[k], y_limit))};
        g.graph_tail = std::max(g.graph_tail, gm(d));
      }
      const double r = gm(ProductPair{std::get<Vector>(zero_x), std::get<Vector>(gap)});
      if (r > g.residual || g.anchor_pairs_checked == 1) {
        g.residual = r;
        g.residual_x = mx(zero_x);
        g.residual_y = my(gap);
      }
    }
  }
  g.closed = g.residual <= tol;
  return g;
}

}  // namespace nnorm
