#pragma once

// n-norms over tuples of elements, the linear-dependence oracle that decides
// their zero set, the axiom checker, and ball membership.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nnorm/element.hpp"

namespace nnorm {

/// Pivot threshold for rank decisions, relative to the largest absolute entry.
/// The axiom checker uses the same figure to call an n-norm value "zero".
inline constexpr double kRankTolerance = 1e-9;

enum class NNormKind {
  /// |det| of the n x n matrix whose rows are the tuple entries (R^n only).
  Determinant,
  /// Product over entries of max_j |a_j| for independent polynomial tuples,
  /// 0 for dependent ones.
  PolyCoeffProduct,
  /// ||x-parts||_X + ||y-parts||_Y on X x Y.
  ProductSum,
  /// max(||x-parts||_X, ||y-parts||_Y) on X x Y.
  ProductMax,
  /// det without the absolute value. Not an n-norm; it exists so the axiom
  /// checker can be shown to catch a broken candidate.
  SignedDeterminant,
};

std::string to_string(NNormKind k);
std::optional<NNormKind> parse_nnorm_kind(std::string_view s);

class NNorm {
 public:
  static NNorm determinant(std::size_t arity);
  static NNorm poly_coeff_product(std::size_t arity);
  static NNorm product_sum(NNorm x, NNorm y);
  static NNorm product_max(NNorm x, NNorm y);
  static NNorm signed_determinant(std::size_t arity);

  NNormKind kind() const noexcept { return kind_; }
  std::size_t arity() const noexcept { return arity_; }
  bool is_product() const noexcept {
    return kind_ == NNormKind::ProductSum || kind_ == NNormKind::ProductMax;
  }
  /// The X and Y norms of a product kind; empty otherwise.
  std::span<const NNorm> components() const noexcept { return components_; }

  friend bool operator==(const NNorm&, const NNorm&) = default;

 private:
  NNorm(NNormKind kind, std::size_t arity, std::vector<NNorm> components);

  NNormKind kind_;
  std::size_t arity_;
  std::vector<NNorm> components_;
};

/// Throws ShapeError when `tuple` cannot be fed to `norm` (wrong length, mixed
/// kinds, wrong element kind, Determinant with dim != n).
void require_compatible(const NNorm& norm, std::span<const Element> tuple);

/// Value of the n-norm on the tuple. Always >= 0 for the four genuine kinds.
double eval_nnorm(const NNorm& norm, std::span<const Element> tuple);

struct DependenceVerdict {
  bool dependent = false;
  std::size_t rank = 0;
  double tolerance_used = 0.0;
};

/// Rank of the tuple's coordinate embedding (see embed_rows). Product pairs are
/// tested jointly, i.e. as elements of X x Y.
DependenceVerdict is_linearly_dependent(std::span<const Element> tuple,
                                        double tol = kRankTolerance);

/// Size the value of `norm` on `tuple` is measured against when deciding
/// whether it is zero: the product of entry lengths (Hadamard bound) for
/// single-space kinds, and the sum / max of component scales for products.
double tuple_scale(const NNorm& norm, std::span<const Element> tuple);

enum class Axiom { N1, N2, N3, N4 };
std::string to_string(Axiom a);

struct AxiomViolation {
  Axiom axiom;
  std::size_t sample_index;
  std::string detail;
  VectorTuple witness;
  double observed = 0.0;
  double expected = 0.0;
};

struct AxiomReport {
  std::size_t samples_checked = 0;
  std::size_t evaluations = 0;
  std::vector<AxiomViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::size_t count(Axiom a) const noexcept;
};

/// Checks the four n-norm axioms on every sample:
///  N1  value is "zero" (< tol * tuple_scale) exactly when the tuple is
///      dependent; also probed with slot 1 replaced by a combination of the
///      other slots, which must evaluate to zero;
///  N2  all n! permutations agree to tol * (1 + value);
///  N3  ||a x1, ...|| = |a| ||x1, ...|| to tol * (1 + |a| value), per scalar;
///  N4  ||x + y, rest|| <= ||x, rest|| + ||y, rest|| + tol, with x, y taken
///      from slot 1 of consecutive samples and rest from the first of the two.
AxiomReport check_axioms(const NNorm& norm, std::span<const VectorTuple> samples,
                         std::span<const double> scalars, double tol = kRankTolerance);

/// ||point - center, e_2, ..., e_n|| < radius (open) or <= radius (closed).
bool ball_contains(const NNorm& norm, std::span<const Element> anchors, const Element& center,
                   double radius, bool open, const Element& point);

/// x -> ||x, b_2, ..., b_n|| for fixed anchors.
///
/// The scalar-anchor form covers constant polynomial anchors entering only
/// through their product b_2 b_3 ... b_n: it evaluates to
/// max_j |a_j| * |b_2 ... b_n| for nonzero x, the value the coefficient-product
/// n-norm takes on the independent branch.
class AnchoredNorm {
 public:
  AnchoredNorm(NNorm norm, std::vector<Element> anchors);
  static AnchoredNorm scalar_anchors(std::vector<double> b_scalars);

  double operator()(const Element& x) const;

  const NNorm& norm() const noexcept { return norm_; }
  std::span<const Element> anchors() const noexcept { return anchors_; }
  bool uses_scalar_anchors() const noexcept { return scalar_; }
  std::span<const double> scalars() const noexcept { return scalars_; }
  double scalar_product() const noexcept;

 private:
  AnchoredNorm(NNorm norm, std::vector<Element> anchors, std::vector<double> scalars, bool scalar);

  NNorm norm_;
  std::vector<Element> anchors_;
  std::vector<double> scalars_;
  bool scalar_ = false;
};

}  // namespace nnorm
