#pragma once

// Finite-dimensional subspaces of a coordinate chart, with the unique
// decomposition y = sum s_i w_i that the extension construction relies on.

#include <cstddef>
#include <span>
#include <vector>

#include "nnorm/element.hpp"
#include "nnorm/sampling.hpp"

namespace nnorm {

/// Relative least-squares residual above which an element is declared to lie
/// outside a subspace.
inline constexpr double kDecompositionTolerance = 1e-8;

class Subspace {
 public:
  /// Throws ShapeError when a basis element is not in `space`, and
  /// PreconditionError when the basis is linearly dependent. An empty basis
  /// is the trivial subspace {0}.
  Subspace(ElementSpace space, std::vector<Element> basis);
  static Subspace of_vectors(std::size_t ambient_dim, std::vector<Vector> basis);

  const ElementSpace& space() const noexcept { return space_; }
  std::span<const Element> basis() const noexcept { return basis_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  std::size_t ambient_dim() const noexcept { return space_.coord_dim(); }
  std::span<const std::vector<double>> basis_coords() const noexcept { return coords_; }

  /// Coefficients s with y = sum s_i basis_i. Throws PreconditionError when
  /// the least-squares residual exceeds kDecompositionTolerance relative to
  /// |y|, ShapeError when y is not in the ambient space.
  std::vector<double> decompose(const Element& y) const;
  bool contains(const Element& y) const;
  Element combine(std::span<const double> s) const;
  /// span(basis, x0); PreconditionError when x0 already lies in the span.
  Subspace extended_by(const Element& x0) const;

 private:
  ElementSpace space_;
  std::vector<Element> basis_;
  std::vector<std::vector<double>> coords_;
};

}  // namespace nnorm
