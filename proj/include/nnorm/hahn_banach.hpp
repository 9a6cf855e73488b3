#pragma once

// Constructive Hahn-Banach machinery for b-linear functionals: the alpha
// interval and one-step extension, the exact determinant-case extension,
// norming and annihilating functionals, the dual-sup norm identity and
// distance duality.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nnorm/functional.hpp"
#include "nnorm/subspace.hpp"

namespace nnorm {

/// Absolute slack in the extension bound |T0(y)| <= N ||y, b|| + slack.
inline constexpr double kExtensionSlack = 1e-6;

struct AlphaInterval {
  /// sup over sampled x in W of T_W(x) - N ||x + x0, b||
  double lo = 0.0;
  /// inf over sampled x in W of T_W(x) + N ||x + x0, b||
  double hi = 0.0;
  Element lo_witness;
  Element hi_witness;
  std::size_t sample_count = 0;
  /// lo > hi beyond rounding (1e-12 relative): a sampling artefact, reported
  /// rather than clamped
  bool inverted = false;
};

/// Throws PreconditionError when x0 lies in W or the budget is zero.
AlphaInterval alpha_interval(const BLinearFunctional& T_W, const Subspace& W, const Element& x0,
                             double norm_TW, std::size_t budget, std::uint64_t seed);

struct ExtensionResult {
  BLinearFunctional extended;
  std::optional<double> alpha;
  /// max |T0 - T_W| over the basis of W and seeded samples of W
  double restriction_residual = 0.0;
  double norm_original = 0.0;
  /// largest sampled |T0(y)| / ||y, b|| on the carrier
  double norm_extended_lower = 0.0;
  std::optional<double> norm_extended_exact;
  std::size_t samples_checked = 0;
  std::size_t bound_violations = 0;
  /// max of |T0(y)| - N ||y, b|| over the samples
  double max_bound_excess = 0.0;
  /// ||T0|| >= ||T_W|| can only be evidenced by sampling outside the
  /// determinant case
  bool norm_not_decreased_evidence = false;
  bool preserved = false;
};

/// T0(x + t x0) = T_W(x) - t alpha on span(W, x0), as the minimum-norm weight
/// vector with that action, with the carrier recorded. Validated on `checks`
/// fresh carrier samples against |T0(y)| <= norm_TW ||y, b|| + kExtensionSlack.
ExtensionResult one_step_extension(const BLinearFunctional& T_W, const Subspace& W,
                                   const Element& x0, double alpha, double norm_TW,
                                   std::size_t checks = 1000, std::uint64_t seed = 42);

struct ValidatedExtension {
  AlphaInterval interval;
  ExtensionResult result;
  int rounds = 0;
};

/// alpha = midpoint of the sampled interval; on a failed validation the
/// interval is re-sampled with 4x the budget, at most 3 rounds, after which
/// ValidationError is thrown.
ValidatedExtension validated_extension(const BLinearFunctional& T_W, const Subspace& W,
                                       const Element& x0, double norm_TW, std::size_t budget,
                                       std::uint64_t seed, std::size_t checks = 1000);

/// Chains validated one-step extensions over the coordinate unit elements
/// until the carrier is the whole coordinate space of W.
ExtensionResult extend_to_space(const BLinearFunctional& T_W, const Subspace& W,
                                double norm_TW, std::size_t budget, std::uint64_t seed);

/// The extension c det(x, b_2, ..., b_n) of a functional bounded on W.
/// Throws PreconditionError when T_W is unbounded on W (nonzero on a
/// direction of W inside ker v).
ExtensionResult extend_determinant_form(const BLinearFunctional& T_W, const Subspace& W,
                                        double tol = kUnboundedTolerance);

/// T_W restricted to W as a functional carried by W.
BLinearFunctional restrict_to(const BLinearFunctional& T, const Subspace& W);

struct NormingResult {
  BLinearFunctional functional;
  double value_at_x0 = 0.0;
  /// exact norm in the determinant case, sampled lower bound otherwise
  double norm = 0.0;
  bool exact = false;
};

/// Norm-one functional with T(x0) = ||x0, b||. Throws PreconditionError when
/// ||x0, b|| is degenerate.
NormingResult norming_functional(const Element& x0, const BAnchors& anchors,
                                 std::size_t budget = 2000, std::uint64_t seed = 42);

struct DualSupResult {
  double value = 0.0;
  std::size_t skipped = 0;
  std::optional<std::size_t> best_index;
};

/// max over the pool of |T(x)| / ||T||; members with zero or unbounded norm
/// are skipped and counted.
DualSupResult norm_via_dual_sup(const Element& x, std::span<const BLinearFunctional> pool,
                                std::size_t budget = 20000, std::uint64_t seed = 42);

struct DistanceResult {
  double h = 0.0;
  /// a point of S attaining (or approaching) h
  Element nearest;
  bool exact = false;
  bool evidence_only = false;
};

/// inf over s in S of ||x - s, b||. Exact in the determinant case; otherwise a
/// multi-start upper bound on the infimum.
DistanceResult distance_to_subspace(const Element& x, const Subspace& S, const BAnchors& anchors,
                                    std::size_t budget = 2000, std::uint64_t seed = 42);

struct AnnihilatorResult {
  BLinearFunctional functional;
  double h = 0.0;
  double value_at_x1 = 0.0;
  double norm = 0.0;
  bool norm_exact = false;
  /// max |T(w)| over the basis of W
  double vanishing_residual = 0.0;
  bool in_annihilator = false;
  bool in_unit_annihilator = false;
};

/// Functional vanishing on W with T(x1) = h and ||T|| = 1. Checks that x1,
/// b_2, ..., b_n are independent and that h > 0 separately, throwing
/// PreconditionError naming the one that fails.
AnnihilatorResult annihilator_functional(const Element& x1, const Subspace& W,
                                         const BAnchors& anchors, std::size_t budget = 2000,
                                         std::uint64_t seed = 42);

struct DualityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  bool exact = false;
  std::size_t pool_size = 0;
};

/// inf ||x - s, b|| over S against sup T(x) over a pool of norm <= 1
/// functionals vanishing on S. Throws PreconditionError when x, b_2, ...,
/// b_n are dependent.
DualityReport distance_duality_check(const Element& x, const Subspace& S,
                                     const BAnchors& anchors, std::size_t pool_size,
                                     std::uint64_t seed);

}  // namespace nnorm
