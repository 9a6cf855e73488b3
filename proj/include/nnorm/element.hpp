#pragma once

// Elements of the spaces the n-norms act on: coordinate vectors of R^d,
// real polynomials, and pairs drawn from a Cartesian product X x Y.

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nnorm {

class Vector {
 public:
  /// Throws ShapeError on an empty coordinate list, NonFiniteError on NaN/inf.
  explicit Vector(std::vector<double> coords);
  Vector(std::initializer_list<double> coords)
      : Vector(std::vector<double>(coords)) {}

  static Vector zero(std::size_t dim);
  static Vector unit(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> coords_;
};

/// Coefficients below this magnitude at the top end do not count toward the
/// reported degree.
inline constexpr double kCoefficientTrim = 1e-12;

class Polynomial {
 public:
  /// coeffs[j] multiplies t^j. An empty list is the zero polynomial.
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs)
      : Polynomial(std::vector<double>(coeffs)) {}

  /// 1 + t + ... + t^k
  static Polynomial ones(std::size_t k);
  static Polynomial monomial(std::size_t j, double coeff = 1.0);

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  /// Index of the last coefficient with |a_j| >= kCoefficientTrim; 0 for the
  /// zero polynomial.
  std::size_t degree() const noexcept;
  bool is_zero() const noexcept;
  double coeff(std::size_t j) const noexcept {
    return j < coeffs_.size() ? coeffs_[j] : 0.0;
  }
  double max_abs_coeff() const noexcept;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

/// One side of a product pair.
using Component = std::variant<Vector, Polynomial>;

struct ProductPair {
  Component left;
  Component right;

  friend bool operator==(const ProductPair&, const ProductPair&) = default;
};

using Element = std::variant<Vector, Polynomial, ProductPair>;

/// Ordered n-tuple, the argument of an n-norm.
using VectorTuple = std::vector<Element>;

enum class ElementKind { Vector, Polynomial, ProductPair };

ElementKind kind_of(const Element& e) noexcept;
std::string kind_name(ElementKind k);

// Linear structure. Vectors must agree in dimension; polynomials are padded.
Element add(const Element& a, const Element& b);
Element subtract(const Element& a, const Element& b);
Element scale(double alpha, const Element& a);
/// a + alpha * b
Element axpy(const Element& a, double alpha, const Element& b);
Element zero_like(const Element& e);


/// Euclidean length of the coordinate embedding.
double euclidean_length(const Element& e);
/// Largest absolute coordinate / coefficient.
double max_abs_entry(const Element& e);

/// Coordinate embedding of each tuple entry as a row. Polynomials are padded to
/// the longest coefficient list in the tuple; product pairs concatenate their
/// (separately padded) sides.
std::vector<std::vector<double>> embed_rows(std::span<const Element> tuple);

/// Throws ShapeError naming the first index whose kind or dimension differs
/// from entry 0.
void require_homogeneous(std::span<const Element> tuple);

}  // namespace nnorm
