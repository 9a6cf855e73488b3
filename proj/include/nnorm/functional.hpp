#pragma once

// b-linear functionals T(x, b_2, ..., b_n): construction, evaluation, exact
// and sampled norms, and the Lipschitz / continuity property checks.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nnorm/element.hpp"
#include "nnorm/nnorm.hpp"
#include "nnorm/sequences.hpp"
#include "nnorm/subspace.hpp"

namespace nnorm {

/// Relative size of the component of w orthogonal to the cofactor vector above
/// which a weight form is declared unbounded.
inline constexpr double kUnboundedTolerance = 1e-9;
/// Anchored norms below this are treated as degenerate sample directions.
inline constexpr double kDegenerateNorm = 1e-12;
/// Anchored norms below this fraction of the Hadamard scale ||x|| ||b_2|| ...
/// are excluded from sampled ratios: there the value is dominated by
/// cancellation error, and a maximiser would chase that error upward.
inline constexpr double kRatioConditioning = 1e-8;

/// The fixed anchors b_2 ... b_n together with the n-norm they feed.
class BAnchors {
 public:
  /// Throws ShapeError on incompatible anchors and PreconditionError when the
  /// anchors are linearly dependent among themselves.
  BAnchors(NNorm norm, std::vector<Element> anchors);
  /// Constant polynomial anchors entering only through their product.
  static BAnchors scalars(std::vector<double> b);

  const NNorm& norm() const noexcept { return measure_.norm(); }
  const AnchoredNorm& measure() const noexcept { return measure_; }
  std::span<const Element> elements() const noexcept { return measure_.anchors(); }
  bool is_scalar() const noexcept { return measure_.uses_scalar_anchors(); }
  std::span<const double> scalars() const noexcept { return measure_.scalars(); }
  /// b_2 b_3 ... b_n for scalar anchors or constant polynomial anchors.
  double constant_product() const;
  bool is_determinant() const noexcept { return norm().kind() == NNormKind::Determinant; }
  /// v with det(x, b_2, ..., b_n) = v . x; Determinant kind only.
  const std::vector<double>& cofactor() const;

  /// ||x, b_2, ..., b_n||
  double operator()(const Element& x) const { return measure_(x); }
  /// Whether a measured value ||x, b|| is large enough, absolutely and
  /// relative to the size of x and the anchors, to divide by.
  bool well_conditioned(const Element& x, double measured) const;

  friend bool operator==(const BAnchors& a, const BAnchors& b);

 private:
  explicit BAnchors(AnchoredNorm measure);

  AnchoredNorm measure_;
  std::vector<double> cofactor_;
};

/// x -> w . x on coordinates (polynomials: coefficients, zero padded).
struct WeightForm {
  std::vector<double> w;
};
/// x -> c det(x, b_2, ..., b_n)
struct DeterminantForm {
  double c = 1.0;
};
/// x -> (a_0 + ... + a_k) b_2 ... b_n on polynomials.
struct PartialSumForm {
  std::size_t k = 0;
};
using FunctionalAction = std::variant<WeightForm, DeterminantForm, PartialSumForm>;

std::string action_name(const FunctionalAction& a);

class BLinearFunctional {
 public:
  /// A carrier restricts the domain to a subspace; evaluating outside it is an
  /// error rather than zero.
  BLinearFunctional(BAnchors anchors, FunctionalAction action,
                    std::optional<Subspace> carrier = std::nullopt);

  const BAnchors& anchors() const noexcept { return anchors_; }
  const FunctionalAction& action() const noexcept { return action_; }
  const std::optional<Subspace>& carrier() const noexcept { return carrier_; }

  double operator()(const Element& x) const;
  BLinearFunctional scaled(double alpha) const;

 private:
  BAnchors anchors_;
  FunctionalAction action_;
  std::optional<Subspace> carrier_;
};

double evaluate(const BLinearFunctional& T, const Element& x);

/// Determinant n-norm with a weight or determinant action: the case with an
/// exact norm.
bool is_determinant_case(const BLinearFunctional& T);

struct PropertyViolation {
  std::size_t index = 0;
  std::string detail;
  double observed = 0.0;
  double bound = 0.0;
};

struct PropertyReport {
  std::size_t checked = 0;
  std::vector<PropertyViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Additivity |T(x+y) - T(x) - T(y)| <= tol (1 + |T x| + |T y|) per pair and
/// homogeneity |T(a x) - a T(x)| <= tol (1 + |a| |T x|) per pair and scalar.
PropertyReport check_b_linearity(const BLinearFunctional& T,
                                 std::span<const std::pair<Element, Element>> samples,
                                 std::span<const double> scalars, double tol = 1e-9);

enum class Certificate { None, CofactorDecomposition };
std::string to_string(Certificate c);

struct NormEstimate {
  double lower = 0.0;
  /// Point with ||witness, b|| = 1 attaining `lower` (absent when unknown).
  std::optional<Element> witness;
  std::optional<double> exact;
  Certificate certificate = Certificate::None;
  bool unbounded = false;
  std::size_t evaluations = 0;
};

/// Exact norm through the cofactor vector v. A carrier restricts w and v to
/// the carrier coordinates first. Throws PreconditionError outside the
/// determinant case.
NormEstimate exact_norm_determinant(const BLinearFunctional& T,
                                    double tol = kUnboundedTolerance);

struct SamplingOptions {
  /// Degree cap of the sampled polynomial slice.
  std::size_t max_degree = 32;
  /// Best random samples handed to local refinement.
  std::size_t refine_starts = 8;
  /// Objective evaluations per refinement start.
  std::size_t refine_evaluations = 20000;
};

/// Lower bound on ||T|| as the best |T(x)| / ||x, b|| over `budget` seeded
/// random points plus coordinate-wise refinement of the best few. Never
/// claims exactness.
NormEstimate estimate_norm_sampling(const BLinearFunctional& T, std::size_t budget,
                                    std::uint64_t seed, const SamplingOptions& opts = {});

/// Exact norm in the determinant case, sampled lower bound otherwise.
NormEstimate functional_norm(const BLinearFunctional& T, std::size_t budget = 20000,
                             std::uint64_t seed = 42, const SamplingOptions& opts = {});

struct NormFormulas {
  /// sup |T x| over ||x, b|| <= 1
  double ball_sup = 0.0;
  /// sup |T x| over ||x, b|| = 1
  double sphere_sup = 0.0;
  /// sup |T x| / ||x, b|| over ||x, b|| != 0
  double ratio_sup = 0.0;
};

/// The three equivalent norm formulas, each sampled on its own stream.
NormFormulas norm_formulas_sampled(const BLinearFunctional& T, std::size_t budget,
                                   std::uint64_t seed, const SamplingOptions& opts = {});

/// |T x - T y| <= norm_bound ||x - y, b|| + tol for every pair.
PropertyReport check_lipschitz(const BLinearFunctional& T, double norm_bound,
                               std::span<const std::pair<Element, Element>> pairs,
                               double tol = 1e-9);

struct SequentialContinuityReport {
  PropertyReport property;
  ConvergenceReport premise;
  double max_tail_gap = 0.0;
};

/// Checks that T x_k -> T(limit) on the tail. The premise x_k -> limit is
/// checked first with T's own anchors at `convergence_tol` (default: tol);
/// if it fails a PreconditionError is thrown instead of a violation.
SequentialContinuityReport check_b_sequential_continuity(
    const BLinearFunctional& T, const SequenceSample& seq, const Element& limit, double tol,
    double tail_fraction = 0.5, std::optional<double> convergence_tol = std::nullopt);

inline constexpr int kDeltaLadderRungs = 60;

struct EpsDeltaEntry {
  double epsilon = 0.0;
  /// Largest ladder value 2^-r whose probes all stayed within epsilon.
  std::optional<double> delta;
  int rung = -1;
};

struct EpsDeltaReport {
  std::vector<EpsDeltaEntry> entries;
  std::size_t probes = 0;
  bool ok() const noexcept;
};

/// For each epsilon walks the ladder 1, 1/2, 1/4, ... and accepts the first
/// delta for which `probe_budget` seeded points of the open delta-ball around
/// `point` (offsets along the anchors included) map within epsilon of T(point).
EpsDeltaReport check_epsilon_delta_continuity(const BLinearFunctional& T, const Element& point,
                                              std::span<const double> epsilons,
                                              std::size_t probe_budget, std::uint64_t seed,
                                              const SamplingOptions& opts = {});

/// Random elements in the space T samples from (the carrier when present).
class FunctionalChart {
 public:
  FunctionalChart(const BLinearFunctional& T, std::size_t max_degree);
  std::size_t dim() const noexcept { return dim_; }
  Element element(std::span<const double> coords) const;
  std::vector<double> random_coords(Rng& rng) const;

 private:
  std::optional<ElementSpace> space_;
  std::optional<Subspace> carrier_;
  std::size_t dim_ = 0;
};

}  // namespace nnorm
