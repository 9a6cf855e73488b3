#include "nnorm/subspace.hpp"

#include <cmath>

#include "nnorm/error.hpp"
#include "nnorm/linalg.hpp"

namespace nnorm {

Subspace::Subspace(ElementSpace space, std::vector<Element> basis)
    : space_(std::move(space)), basis_(std::move(basis)) {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    try {
      coords_.push_back(space_.to_coords(basis_[i]));
    } catch (const ShapeError& e) {
      throw ShapeError(std::string("basis element ") + std::to_string(i) + ": " + e.what(), i);
    }
  }
  if (!coords_.empty()) {
    if (coords_.size() > space_.coord_dim() ||
        linalg::rank(coords_, 1e-9).rank < coords_.size()) {
      throw PreconditionError("subspace basis is linearly dependent");
    }
  }
}

Subspace Subspace::of_vectors(std::size_t ambient_dim, std::vector<Vector> basis) {
  std::vector<Element> b(basis.begin(), basis.end());
  return Subspace(ElementSpace::vectors(ambient_dim), std::move(b));
}

std::vector<double> Subspace::decompose(const Element& y) const {
  const auto target = space_.to_coords(y);
  const double scale = linalg::norm2(target);
  if (basis_.empty()) {
    if (scale > 0.0) throw PreconditionError("element lies outside the trivial subspace");
    return {};
  }
  auto ls = linalg::least_squares(coords_, target);
  if (ls.residual_norm > kDecompositionTolerance * scale) {
    throw PreconditionError("element lies outside the subspace (relative residual " +
                            std::to_string(ls.residual_norm / scale) + ")");
  }
  return ls.solution;
}

bool Subspace::contains(const Element& y) const {
  try {
    (void)decompose(y);
    return true;
  } catch (const PreconditionError&) {
    return false;
  } catch (const ShapeError&) {
    return false;
  }
}

Element Subspace::combine(std::span<const double> s) const {
  if (s.size() != basis_.size()) throw ShapeError("coefficient count differs from subspace dim");
  return space_.from_coords(linalg::combine(coords_, s, space_.coord_dim()));
}

Subspace Subspace::extended_by(const Element& x0) const {
  if (contains(x0)) throw PreconditionError("x0 lies in the subspace");
  auto b = basis_;
  b.push_back(x0);
  return Subspace(space_, std::move(b));
}

}  // namespace nnorm
