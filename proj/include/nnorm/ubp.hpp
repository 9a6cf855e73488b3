#pragma once

// Families of b-linear functionals: pointwise versus uniform bounds, the
// polynomial partial-sum counterexample, convergence on an epsilon-net,
// Cauchy families, pointwise limits and weak* convergence.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nnorm/functional.hpp"

namespace nnorm {

/// Absolute Cauchy tolerance over the last quarter of a value sequence.
inline constexpr double kFamilyCauchyTolerance = 1e-8;

class FunctionalFamily {
 public:
  /// Throws PreconditionError on an empty family or members with different
  /// anchors. Missing labels default to "T_<index>".
  explicit FunctionalFamily(std::vector<BLinearFunctional> members,
                            std::vector<std::string> labels = {});

  std::span<const BLinearFunctional> members() const noexcept { return members_; }
  std::span<const std::string> labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return members_.size(); }
  const BAnchors& anchors() const noexcept { return members_.front().anchors(); }

 private:
  std::vector<BLinearFunctional> members_;
  std::vector<std::string> labels_;
};

struct MemberBound {
  std::string label;
  NormEstimate norm;
};

struct BoundReport {
  /// max over the family of |T(x)| for each point, in point order
  std::vector<double> per_point_bounds;
  std::vector<MemberBound> members;
  /// max over member norm lower bounds (infinite when a member is unbounded)
  double uniform_lower = 0.0;
  bool pointwise_bounded_evidence = false;
  bool uniform_bound_refuted = false;
  bool evidence_only = true;
};

BoundReport pointwise_bounds(const FunctionalFamily& family, std::span<const Element> points);

/// Element at which member `i`'s norm is witnessed.
using WitnessBuilder = std::function<Element(std::size_t member)>;

/// Member norm lower bounds from the witnesses (|T(w)| / ||w, b||), or by
/// functional_norm when no builder is given. Refuted when some member is
/// unbounded or the bounds show an unsaturated strictly increasing tail.
BoundReport uniform_bound_refutation(const FunctionalFamily& family,
                                     const std::optional<WitnessBuilder>& witness,
                                     std::size_t budget, std::uint64_t seed);

/// The last half (at least two values) is strictly increasing and its final
/// step is at least half its first step, i.e. no visible saturation.
bool growth_without_saturation(std::span<const double> values);

/// T_k(x) = (a_0 + ... + a_k) b_2 ... b_n for k = k_first .. k_last.
FunctionalFamily partial_sum_family(std::size_t k_first, std::size_t k_last,
                                    std::vector<double> b_scalars);

/// (N_x + 1) max_j |a_j b_2 ... b_n| with N_x the degree of x.
double partial_sum_pointwise_bound(const Polynomial& x, const BAnchors& anchors);

/// The witness-based refutation for T_0 ... T_kmax with x(t) = 1 + ... + t^k.
BoundReport partial_sum_counterexample(std::size_t kmax, std::vector<double> b_scalars = {1.0});

struct EpsNet {
  std::vector<Element> centers;
  double radius = 0.0;
};

struct NetConvergenceReport {
  /// sup over the net centers of |T_k(x) - T(x)|, per member
  std::vector<double> sup_on_net;
  /// sup_on_net + (cap + 1 + ||T||) radius: a bound on the whole set
  std::vector<double> propagated;
  std::vector<double> member_norms;
  double limit_norm = 0.0;
  bool converged = false;
  bool evidence_only = true;
};

/// Throws PreconditionError naming the first member whose norm (lower bound)
/// exceeds the cap, and on a non-positive radius or empty net.
NetConvergenceReport uniform_convergence_on_net(const FunctionalFamily& family,
                                                const BLinearFunctional& limit,
                                                const EpsNet& net, double member_norm_cap,
                                                std::size_t budget = 20000,
                                                std::uint64_t seed = 42);

/// Cauchy test on the last quarter (at least two values): max - min <= tol.
bool cauchy_tail(std::span<const double> values, double tol);

struct CauchyFamilyReport {
  std::vector<bool> point_cauchy;
  bool all_cauchy = false;
  std::vector<MemberBound> members;
  double uniform_lower = 0.0;
  bool norms_bounded_evidence = false;
  bool evidence_only = true;
};

CauchyFamilyReport cauchy_family_bound(const FunctionalFamily& family,
                                       std::span<const Element> points,
                                       double tol = kFamilyCauchyTolerance,
                                       std::size_t budget = 20000, std::uint64_t seed = 42);

struct LimitFunctionalResult {
  BLinearFunctional functional;
  /// limiting value of T_k(e_i) for each basis element (last sample)
  std::vector<double> basis_limits;
  /// max over member norms
  double m_bound = 0.0;
  PropertyReport bound_check;
  PropertyReport linearity;
};

/// Weight-form limit of a pointwise convergent family on a finite basis.
/// Throws PreconditionError naming the basis index whose value sequence is
/// not Cauchy. The limit value is the last sample of each sequence.
LimitFunctionalResult pointwise_limit_functional(const FunctionalFamily& family,
                                                 std::span<const Element> basis,
                                                 double tol = kFamilyCauchyTolerance,
                                                 std::size_t checks = 1000,
                                                 std::uint64_t seed = 42);

struct WeakStarReport {
  /// (I) member norms show no unbounded growth
  bool norms_bounded = false;
  /// (II) T_k(x) is Cauchy for every x in the total set
  bool cauchy_on_total = false;
  /// direct convergence to the candidate on the points
  bool converges_to_candidate = false;
  /// T_k(x) is Cauchy on the points
  bool cauchy_on_points = false;
  double max_candidate_gap = 0.0;
  std::vector<MemberBound> members;
  /// (I) and (II)
  bool conditions_hold = false;
  /// conditions_hold == converges_to_candidate
  bool agrees = false;
  bool evidence_only = true;
};

/// Throws PreconditionError when the total set does not span its space.
WeakStarReport weakstar_check(const FunctionalFamily& family,
                              const BLinearFunctional& candidate_limit,
                              std::span<const Element> total_set,
                              std::span<const Element> points,
                              double tol = kFamilyCauchyTolerance, std::size_t budget = 20000,
                              std::uint64_t seed = 42);

}  // namespace nnorm
