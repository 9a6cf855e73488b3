#include "nnorm/element.hpp"

#include <algorithm>
#include <cmath>

#include "nnorm/error.hpp"

namespace nnorm {

namespace {

void require_finite(std::span<const double> xs, const char* what) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) {
      throw NonFiniteError(std::string(what) + " has a non-finite entry at " +
                           std::to_string(i));
    }
  }
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

Vector add_vec(const Vector& a, double alpha, const Vector& b) {
  if (a.dim() != b.dim()) {
    throw ShapeError("vector dimensions differ: " + std::to_string(a.dim()) +
                     " vs " + std::to_string(b.dim()));
  }
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + alpha * b[i];
  return Vector(std::move(out));
}

Polynomial add_poly(const Polynomial& a, double alpha, const Polynomial& b) {
  std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = a.coeff(j) + alpha * b.coeff(j);
  return Polynomial(std::move(out));
}

Component axpy_component(const Component& a, double alpha, const Component& b) {
  if (a.index() != b.index()) throw ShapeError("product pair sides differ in kind");
  if (const auto* va = std::get_if<Vector>(&a)) {
    return add_vec(*va, alpha, std::get<Vector>(b));
  }
  return add_poly(std::get<Polynomial>(a), alpha, std::get<Polynomial>(b));
}

Component scale_component(double alpha, const Component& a) {
  return std::visit(
      overloaded{[&](const Vector& v) -> Component {
                   std::vector<double> out(v.coords().begin(), v.coords().end());
                   for (double& x : out) x *= alpha;
                   return Vector(std::move(out));
                 },
                 [&](const Polynomial& p) -> Component {
                   std::vector<double> out(p.coeffs().begin(), p.coeffs().end());
                   for (double& x : out) x *= alpha;
                   return Polynomial(std::move(out));
                 }},
      a);
}

std::span<const double> raw(const Component& c) {
  if (const auto* v = std::get_if<Vector>(&c)) return v->coords();
  return std::get<Polynomial>(c).coeffs();
}

bool same_shape(const Component& a, const Component& b) {
  if (a.index() != b.index()) return false;
  if (const auto* va = std::get_if<Vector>(&a)) return va->dim() == std::get<Vector>(b).dim();
  return true;
}

}  // namespace

Vector::Vector(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw ShapeError("vector must have positive dimension");
  require_finite(coords_, "vector");
}

Vector Vector::zero(std::size_t dim) { return Vector(std::vector<double>(dim, 0.0)); }

Vector Vector::unit(std::size_t dim, std::size_t index) {
  std::vector<double> c(dim, 0.0);
  c.at(index) = 1.0;
  return Vector(std::move(c));
}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  require_finite(coeffs_, "polynomial");
}

Polynomial Polynomial::ones(std::size_t k) {
  return Polynomial(std::vector<double>(k + 1, 1.0));
}

Polynomial Polynomial::monomial(std::size_t j, double coeff) {
  std::vector<double> c(j + 1, 0.0);
  c[j] = coeff;
  return Polynomial(std::move(c));
}

std::size_t Polynomial::degree() const noexcept {
  for (std::size_t j = coeffs_.size(); j-- > 0;) {
    if (std::abs(coeffs_[j]) >= kCoefficientTrim) return j;
  }
  return 0;
}

bool Polynomial::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](double a) { return std::abs(a) < kCoefficientTrim; });
}

double Polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double a : coeffs_) m = std::max(m, std::abs(a));
  return m;
}

ElementKind kind_of(const Element& e) noexcept {
  return static_cast<ElementKind>(e.index());
}

std::string kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::Vector: return "vector";
    case ElementKind::Polynomial: return "polynomial";
    case ElementKind::ProductPair: return "product_pair";
  }
  return "unknown";
}

Element axpy(const Element& a, double alpha, const Element& b) {
  if (a.index() != b.index()) {
    throw ShapeError("cannot combine " + kind_name(kind_of(a)) + " with " +
                     kind_name(kind_of(b)));
  }
  return std::visit(
      overloaded{
          [&](const Vector& va) -> Element { return add_vec(va, alpha, std::get<Vector>(b)); },
          [&](const Polynomial& pa) -> Element {
            return add_poly(pa, alpha, std::get<Polynomial>(b));
          },
          [&](const ProductPair& qa) -> Element {
            const auto& qb = std::get<ProductPair>(b);
            return ProductPair{axpy_component(qa.left, alpha, qb.left),
                               axpy_component(qa.right, alpha, qb.right)};
          }},
      a);
}

Element add(const Element& a, const Element& b) { return axpy(a, 1.0, b); }
Element subtract(const Element& a, const Element& b) { return axpy(a, -1.0, b); }

Element scale(double alpha, const Element& a) {
  if (const auto* q = std::get_if<ProductPair>(&a)) {
    return ProductPair{scale_component(alpha, q->left), scale_component(alpha, q->right)};
  }
  if (const auto* v = std::get_if<Vector>(&a)) return std::get<Vector>(scale_component(alpha, *v));
  return std::get<Polynomial>(scale_component(alpha, std::get<Polynomial>(a)));
}

Element zero_like(const Element& e) { return scale(0.0, e); }


double euclidean_length(const Element& e) {
  double s = 0.0;
  auto acc = [&](std::span<const double> xs) {
    for (double x : xs) s += x * x;
  };
  if (const auto* q = std::get_if<ProductPair>(&e)) {
    acc(raw(q->left));
    acc(raw(q->right));
  } else if (const auto* v = std::get_if<Vector>(&e)) {
    acc(v->coords());
  } else {
    acc(std::get<Polynomial>(e).coeffs());
  }
  return std::sqrt(s);
}

double max_abs_entry(const Element& e) {
  double m = 0.0;
  auto acc = [&](std::span<const double> xs) {
    for (double x : xs) m = std::max(m, std::abs(x));
  };
  if (const auto* q = std::get_if<ProductPair>(&e)) {
    acc(raw(q->left));
    acc(raw(q->right));
  } else if (const auto* v = std::get_if<Vector>(&e)) {
    acc(v->coords());
  } else {
    acc(std::get<Polynomial>(e).coeffs());
  }
  return m;
}

void require_homogeneous(std::span<const Element> tuple) {
  if (tuple.empty()) throw ShapeError("tuple is empty");
  const Element& first = tuple.front();
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    const Element& e = tuple[i];
    if (e.index() != first.index()) {
      throw ShapeError("tuple mixes " + kind_name(kind_of(first)) + " and " +
                           kind_name(kind_of(e)),
                       i);
    }
    if (const auto* v = std::get_if<Vector>(&e)) {
      if (v->dim() != std::get<Vector>(first).dim()) {
        throw ShapeError("vector dimension " + std::to_string(v->dim()) +
                             " differs from " +
                             std::to_string(std::get<Vector>(first).dim()),
                         i);
      }
    } else if (const auto* q = std::get_if<ProductPair>(&e)) {
      const auto& q0 = std::get<ProductPair>(first);
      if (!same_shape(q->left, q0.left) || !same_shape(q->right, q0.right)) {
        throw ShapeError("product pair shape differs from entry 0", i);
      }
    }
  }
}

std::vector<std::vector<double>> embed_rows(std::span<const Element> tuple) {
  require_homogeneous(tuple);
  std::vector<std::vector<double>> rows;
  rows.reserve(tuple.size());
  if (std::holds_alternative<ProductPair>(tuple.front())) {
    std::size_t lw = 0, rw = 0;
    for (const auto& e : tuple) {
      const auto& q = std::get<ProductPair>(e);
      lw = std::max(lw, raw(q.left).size());
      rw = std::max(rw, raw(q.right).size());
    }
    for (const auto& e : tuple) {
      const auto& q = std::get<ProductPair>(e);
      std::vector<double> row(lw + rw, 0.0);
      auto l = raw(q.left);
      auto r = raw(q.right);
      std::copy(l.begin(), l.end(), row.begin());
      std::copy(r.begin(), r.end(), row.begin() + static_cast<std::ptrdiff_t>(lw));
      rows.push_back(std::move(row));
    }
    return rows;
  }
  std::size_t width = 0;
  for (const auto& e : tuple) {
    width = std::max(width, std::holds_alternative<Vector>(e)
                                ? std::get<Vector>(e).dim()
                                : std::get<Polynomial>(e).coeffs().size());
  }
  for (const auto& e : tuple) {
    std::vector<double> row(width, 0.0);
    auto xs = std::holds_alternative<Vector>(e) ? std::get<Vector>(e).coords()
                                                : std::get<Polynomial>(e).coeffs();
    std::copy(xs.begin(), xs.end(), row.begin());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace nnorm
