#include "nnorm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "nnorm/error.hpp"

namespace nnorm::linalg {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double determinant(Matrix m) {
  const std::size_t n = m.size();
  for (const auto& r : m) {
    if (r.size() != n) throw ShapeError("determinant needs a square matrix");
  }
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m[i][k]) > std::abs(m[p][k])) p = i;
    }
    if (m[p][k] == 0.0) return 0.0;
    if (p != k) {
      std::swap(m[p], m[k]);
      det = -det;
    }
    const double pivot = m[k][k];
    det *= pivot;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i][k] / pivot;
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

RankResult rank(Matrix rows, double rel_tol) {
  RankResult out;
  if (rows.empty()) return out;
  const std::size_t cols = rows.front().size();
  double big = 0.0;
  for (const auto& r : rows) {
    if (r.size() != cols) throw ShapeError("rank needs rows of equal length");
    for (double x : r) big = std::max(big, std::abs(x));
  }
  out.threshold = rel_tol * big;
  if (big == 0.0) return out;

  std::vector<bool> used_col(cols, false);
  std::size_t r0 = 0;
  while (r0 < rows.size()) {
    // full pivot over the remaining block
    std::size_t pi = r0, pj = cols;
    double best = 0.0;
    for (std::size_t i = r0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (used_col[j]) continue;
        if (std::abs(rows[i][j]) > best) {
          best = std::abs(rows[i][j]);
          pi = i;
          pj = j;
        }
      }
    }
    if (pj == cols || best <= out.threshold) break;
    std::swap(rows[pi], rows[r0]);
    used_col[pj] = true;
    for (std::size_t i = r0 + 1; i < rows.size(); ++i) {
      const double f = rows[i][pj] / rows[r0][pj];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] -= f * rows[r0][j];
      rows[i][pj] = 0.0;
    }
    ++r0;
  }
  out.rank = r0;
  return out;
}

Row cofactor_vector(std::span<const Row> anchors) {
  const std::size_t n = anchors.size() + 1;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (anchors[i].size() != n) {
      throw ShapeError("anchor length must equal anchor count + 1", i);
    }
  }
  Row v(n, 0.0);
  if (n == 1) {
    v[0] = 1.0;
    return v;
  }
  for (std::size_t j = 0; j < n; ++j) {
    Matrix minor;
    minor.reserve(n - 1);
    for (const auto& a : anchors) {
      Row r;
      r.reserve(n - 1);
      for (std::size_t c = 0; c < n; ++c) {
        if (c != j) r.push_back(a[c]);
      }
      minor.push_back(std::move(r));
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    v[j] = sign * determinant(std::move(minor));
  }
  return v;
}

LeastSquaresResult least_squares(std::span<const Row> columns, std::span<const double> target) {
  LeastSquaresResult out;
  const std::size_t m = columns.size();
  const std::size_t d = target.size();
  out.target_norm = norm2(target);
  if (m == 0) {
    out.residual_norm = out.target_norm;
    return out;
  }
  if (m > d) throw PreconditionError("more columns than ambient dimension");
  // a: d x m working copy, column-major
  std::vector<Row> a(columns.begin(), columns.end());
  for (std::size_t j = 0; j < m; ++j) {
    if (a[j].size() != d) throw ShapeError("column length differs from target", j);
  }
  Row b(target.begin(), target.end());
  double scale = 0.0;
  for (const auto& c : a) scale = std::max(scale, norm2(c));

  for (std::size_t k = 0; k < m; ++k) {
    double s = 0.0;
    for (std::size_t i = k; i < d; ++i) s += a[k][i] * a[k][i];
    s = std::sqrt(s);
    if (s <= 1e-13 * scale) throw PreconditionError("least squares columns are dependent");
    const double alpha = a[k][k] > 0 ? -s : s;
    Row u(d, 0.0);
    for (std::size_t i = k; i < d; ++i) u[i] = a[k][i];
    u[k] -= alpha;
    const double un = dot(u, u);
    if (un > 0.0) {
      for (std::size_t j = k; j < m; ++j) {
        const double f = 2.0 * dot(u, a[j]) / un;
        for (std::size_t i = k; i < d; ++i) a[j][i] -= f * u[i];
      }
      const double f = 2.0 * dot(u, b) / un;
      for (std::size_t i = k; i < d; ++i) b[i] -= f * u[i];
    }
  }
  Row y(m, 0.0);
  for (std::size_t k = m; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < m; ++j) s -= a[j][k] * y[j];
    y[k] = s / a[k][k];
  }
  double r = 0.0;
  for (std::size_t i = m; i < d; ++i) r += b[i] * b[i];
  out.solution = std::move(y);
  out.residual_norm = std::sqrt(r);
  return out;
}

Row combine(std::span<const Row> columns, std::span<const double> coeffs, std::size_t dim) {
  Row out(dim, 0.0);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (std::size_t i = 0; i < dim; ++i) out[i] += coeffs[j] * columns[j][i];
  }
  return out;
}

}  // namespace nnorm::linalg
