#pragma once

// Finite coordinate slices of the element spaces plus the derivative-free
// local search shared by the sampling estimators.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nnorm/element.hpp"
#include "nnorm/nnorm.hpp"
#include "nnorm/seeding.hpp"

namespace nnorm {

/// Default number of polynomial coefficients (degree cap 32) for sampling.
inline constexpr std::size_t kDefaultPolyCoeffs = 33;

struct SideSpace {
  bool polynomial = false;
  /// vector dimension, or number of polynomial coefficients in the slice
  std::size_t dim = 0;
};

/// A finite-dimensional coordinate chart on one element space: R^d, the
/// polynomials of degree < d, or a product of two such spaces.
class ElementSpace {
 public:
  static ElementSpace vectors(std::size_t dim);
  static ElementSpace polynomials(std::size_t coeff_count);
  static ElementSpace product(SideSpace left, SideSpace right);
  /// The space `prototype` lives in. Polynomial sides get at least
  /// `poly_coeffs` coefficients (more if the prototype is longer).
  static ElementSpace of(const Element& prototype, std::size_t poly_coeffs = kDefaultPolyCoeffs);

  std::size_t coord_dim() const noexcept;
  bool is_product() const noexcept { return right_.has_value(); }
  bool is_polynomial() const noexcept { return !right_ && left_.polynomial; }
  bool is_vector() const noexcept { return !right_ && !left_.polynomial; }

  Element from_coords(std::span<const double> coords) const;
  /// Throws ShapeError when `e` has the wrong kind or, for polynomials, a
  /// nonzero coefficient outside the slice.
  std::vector<double> to_coords(const Element& e) const;
  bool contains(const Element& e) const;

  /// Standard normal coordinates.
  Element random(Rng& rng) const;
  std::vector<double> random_coords(Rng& rng) const;
  /// Unit coordinate elements, in coordinate order.
  std::vector<Element> basis() const;

 private:
  ElementSpace(SideSpace left, std::optional<SideSpace> right) : left_(left), right_(right) {}

  SideSpace left_;
  std::optional<SideSpace> right_;
};

/// The space a norm's tuples are drawn from: R^n for determinant kinds, the
/// polynomial slice of `poly_coeffs` coefficients (at least n) for the
/// coefficient-product kind, and the pair of component spaces for products.
ElementSpace space_for(const NNorm& norm, std::size_t poly_coeffs = 0);

/// `count` tuples of standard-normal elements of space_for(norm); tuple i
/// depends only on (seed, i).
std::vector<VectorTuple> random_tuples(const NNorm& norm, std::size_t count, std::uint64_t seed,
                                       std::size_t poly_coeffs = 0);

struct SearchResult {
  std::vector<double> point;
  double value = 0.0;
  std::size_t evaluations = 0;
};

/// Compass search maximising `objective` from `start`: try +-step along each
/// coordinate, keep improvements, halve the step (relative to the current
/// largest coordinate) when a sweep stalls. Points where the objective is NaN
/// or -inf are rejected.
SearchResult coordinate_ascent(const std::function<double(std::span<const double>)>& objective,
                               std::vector<double> start, int halvings = 48,
                               std::size_t max_evaluations = 200000);

}  // namespace nnorm
