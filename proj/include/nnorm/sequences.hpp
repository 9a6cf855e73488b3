#pragma once

// Finite-prefix evidence for convergence, the Cauchy property and closed
// graphs. Every verdict here is evidence from a finite tail, never a proof.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nnorm/element.hpp"
#include "nnorm/linalg.hpp"
#include "nnorm/nnorm.hpp"

namespace nnorm {

/// Upper limit on the number of standard-basis anchor sets added by default.
inline constexpr std::size_t kMaxStandardAnchorSets = 256;

struct SequenceSample {
  std::vector<Element> terms;
  /// Each entry holds arity - 1 anchors x_2 ... x_n.
  std::vector<std::vector<Element>> anchor_sets;
};

struct ConvergenceReport {
  bool converged = false;
  std::optional<Element> limit;
  double max_tail_norm = 0.0;
  /// Max over the tail, one entry per anchor set checked (in order).
  std::vector<double> per_anchor_tail;
  std::size_t tail_start = 0;
  std::size_t anchor_sets_checked = 0;
  double tol = 0.0;
  /// Always true: the definitions quantify over infinite tails.
  bool evidence_only = true;
};

/// All (n-1)-subsets of the coordinate unit elements of the space `prototype`
/// lives in, lexicographic, capped at kMaxStandardAnchorSets. Polynomial
/// slices are sized to max(coefficient count of prototype, n).
std::vector<std::vector<Element>> standard_anchor_sets(const NNorm& norm,
                                                       const Element& prototype,
                                                       std::size_t poly_coeffs = 0);

/// ||x_k - limit, a_2, ..., a_n|| over the trailing tail_fraction of the terms
/// for every anchor set (the sample's own, then the standard ones unless
/// `standard_anchors` is false); converged iff all values are <= tol.
ConvergenceReport check_convergence(const NNorm& norm, const SequenceSample& seq,
                                    const Element& candidate_limit, double tail_fraction,
                                    double tol, bool standard_anchors = true);

/// As check_convergence over all pairs (l, k) of tail terms;
/// `converged` reads "Cauchy at sample scale".
ConvergenceReport check_cauchy(const NNorm& norm, const SequenceSample& seq, double tail_fraction,
                               double tol, bool standard_anchors = true);

/// Convergence measured with fixed anchored norms only.
ConvergenceReport check_convergence_anchored(std::span<const AnchoredNorm> measures,
                                             std::span<const Element> terms,
                                             const Element& candidate_limit,
                                             double tail_fraction, double tol);

struct GraphReport {
  ConvergenceReport x_convergence;
  /// T x_k -> y_limit
  ConvergenceReport y_convergence;
  /// max over tail and anchor pairs of the product-sum graph norm of
  /// (x_k - x_limit, T x_k - y_limit)
  double graph_tail = 0.0;
  /// max over anchor pairs of ||(0, T x_limit - y_limit), pairs|| in the
  /// product-sum graph norm, and its X / Y parts at the maximising pair
  double residual = 0.0;
  double residual_x = 0.0;
  double residual_y = 0.0;
  /// x_k -> x_limit and T x_k -> y_limit both hold at sample scale
  bool premises_hold = false;
  /// (x_limit, y_limit) lies on the graph: residual <= tol
  bool closed = false;
  std::size_t anchor_pairs_checked = 0;
  bool evidence_only = true;
};

/// Closed-graph check for the matrix operator T : R^dx -> R^dy, where
/// `op` has dy rows of length dx. The X anchors come from the sample (plus
/// standard sets); the Y anchors are the standard sets of R^dy.
GraphReport check_closed_graph(const NNorm& norm_x, const NNorm& norm_y,
                               const linalg::Matrix& op, const SequenceSample& seq,
                               const Element& x_limit, const Element& y_limit, double tol,
                               double tail_fraction = 0.5);

/// Applies a dy x dx matrix to a vector of R^dx.
Vector apply_matrix(const linalg::Matrix& op, const Vector& x);

}  // namespace nnorm
