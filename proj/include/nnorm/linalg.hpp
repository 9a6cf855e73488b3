#pragma once

// Small dense linear algebra on row lists. Sizes here are desk scale (n <= ~40),
// so everything is plain O(n^3) elimination.

#include <cstddef>
#include <span>
#include <vector>

namespace nnorm::linalg {

using Row = std::vector<double>;
using Matrix = std::vector<Row>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// Determinant of a square matrix by Gaussian elimination with partial
/// pivoting. Returns exactly 0 when a pivot column is identically zero.
double determinant(Matrix m);

struct RankResult {
  std::size_t rank = 0;
  /// Absolute pivot threshold actually used: rel_tol * max |entry|.
  double threshold = 0.0;
};

/// Row rank by elimination with full pivoting. Pivots at or below
/// rel_tol * (largest absolute entry) count as zero.
RankResult rank(Matrix rows, double rel_tol);

/// The vector v with det(x; a_2; ...; a_n) = v . x for every x, built from
/// first-row cofactors. `anchors` holds n-1 rows of length n.
Row cofactor_vector(std::span<const Row> anchors);

struct LeastSquaresResult {
  Row solution;
  double residual_norm = 0.0;
  double target_norm = 0.0;
};

/// Minimises |sum_j y_j columns[j] - target| by Householder QR. The columns
/// must be linearly independent; throws PreconditionError when the triangular
/// factor is numerically singular.
LeastSquaresResult least_squares(std::span<const Row> columns, std::span<const double> target);

/// sum_j coeffs[j] * columns[j]
Row combine(std::span<const Row> columns, std::span<const double> coeffs, std::size_t dim);

}  // namespace nnorm::linalg
