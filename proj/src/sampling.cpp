#include "nnorm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnorm/error.hpp"

namespace nnorm {

namespace {

Component side_from(const SideSpace& s, std::span<const double> c) {
  std::vector<double> xs(c.begin(), c.end());
  if (s.polynomial) return Polynomial(std::move(xs));
  return Vector(std::move(xs));
}

void side_to(const SideSpace& s, const Component& c, std::vector<double>& out) {
  if (s.polynomial) {
    const auto* p = std::get_if<Polynomial>(&c);
    if (!p) throw ShapeError("expected a polynomial");
    auto a = p->coeffs();
    for (std::size_t j = s.dim; j < a.size(); ++j) {
      if (a[j] != 0.0) {
        throw ShapeError("polynomial degree " + std::to_string(p->degree()) +
                         " exceeds the coordinate slice of " + std::to_string(s.dim) +
                         " coefficients");
      }
    }
    for (std::size_t j = 0; j < s.dim; ++j) out.push_back(p->coeff(j));
    return;
  }
  const auto* v = std::get_if<Vector>(&c);
  if (!v) throw ShapeError("expected a vector");
  if (v->dim() != s.dim) {
    throw ShapeError("vector dimension " + std::to_string(v->dim()) + " differs from " +
                     std::to_string(s.dim));
  }
  out.insert(out.end(), v->coords().begin(), v->coords().end());
}

SideSpace side_of(const Component& c, std::size_t poly_coeffs) {
  if (const auto* v = std::get_if<Vector>(&c)) return {false, v->dim()};
  const auto& p = std::get<Polynomial>(c);
  return {true, std::max(poly_coeffs, p.degree() + 1)};
}

}  // namespace

ElementSpace ElementSpace::vectors(std::size_t dim) {
  if (dim == 0) throw ShapeError("space dimension must be positive");
  return ElementSpace({false, dim}, std::nullopt);
}

ElementSpace ElementSpace::polynomials(std::size_t coeff_count) {
  if (coeff_count == 0) throw ShapeError("polynomial slice needs at least one coefficient");
  return ElementSpace({true, coeff_count}, std::nullopt);
}

ElementSpace ElementSpace::product(SideSpace left, SideSpace right) {
  if (left.dim == 0 || right.dim == 0) {
    throw ShapeError("product space sides must have positive dimension");
  }
  return ElementSpace(left, right);
}

ElementSpace ElementSpace::of(const Element& prototype, std::size_t poly_coeffs) {
  if (const auto* v = std::get_if<Vector>(&prototype)) return vectors(v->dim());
  if (const auto* p = std::get_if<Polynomial>(&prototype)) {
    return polynomials(std::max(poly_coeffs, p->degree() + 1));
  }
  const auto& q = std::get<ProductPair>(prototype);
  return product(side_of(q.left, poly_coeffs), side_of(q.right, poly_coeffs));
}

std::size_t ElementSpace::coord_dim() const noexcept {
  return left_.dim + (right_ ? right_->dim : 0);
}

Element ElementSpace::from_coords(std::span<const double> coords) const {
  if (coords.size() != coord_dim()) {
    throw ShapeError("coordinate count " + std::to_string(coords.size()) + " differs from " +
                     std::to_string(coord_dim()));
  }
  if (right_) {
    return ProductPair{side_from(left_, coords.first(left_.dim)),
                       side_from(*right_, coords.subspan(left_.dim))};
  }
  std::vector<double> xs(coords.begin(), coords.end());
  if (left_.polynomial) return Polynomial(std::move(xs));
  return Vector(std::move(xs));
}

std::vector<double> ElementSpace::to_coords(const Element& e) const {
  std::vector<double> out;
  out.reserve(coord_dim());
  if (right_) {
    const auto* q = std::get_if<ProductPair>(&e);
    if (!q) throw ShapeError("expected a product pair");
    side_to(left_, q->left, out);
    side_to(*right_, q->right, out);
    return out;
  }
  if (left_.polynomial) {
    if (!std::holds_alternative<Polynomial>(e)) throw ShapeError("expected a polynomial");
    side_to(left_, std::get<Polynomial>(e), out);
  } else {
    if (!std::holds_alternative<Vector>(e)) throw ShapeError("expected a vector");
    side_to(left_, std::get<Vector>(e), out);
  }
  return out;
}

bool ElementSpace::contains(const Element& e) const {
  try {
    (void)to_coords(e);
    return true;
  } catch (const ShapeError&) {
    return false;
  }
}

std::vector<double> ElementSpace::random_coords(Rng& rng) const {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> c(coord_dim());
  for (double& x : c) x = gauss(rng);
  return c;
}

namespace {

SideSpace side_for(const NNorm& norm, std::size_t poly_coeffs) {
  if (norm.kind() == NNormKind::PolyCoeffProduct) {
    return SideSpace{true, std::max(poly_coeffs, norm.arity())};
  }
  if (norm.is_product()) throw ShapeError("nested product norms are not supported");
  return SideSpace{false, norm.arity()};
}

}  // namespace

ElementSpace space_for(const NNorm& norm, std::size_t poly_coeffs) {
  if (norm.is_product()) {
    return ElementSpace::product(side_for(norm.components()[0], poly_coeffs),
                                 side_for(norm.components()[1], poly_coeffs));
  }
  const SideSpace s = side_for(norm, poly_coeffs);
  return s.polynomial ? ElementSpace::polynomials(s.dim) : ElementSpace::vectors(s.dim);
}

std::vector<VectorTuple> random_tuples(const NNorm& norm, std::size_t count, std::uint64_t seed,
                                       std::size_t poly_coeffs) {
  const ElementSpace space = space_for(norm, poly_coeffs);
  std::vector<VectorTuple> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = make_rng(seed, streams::kFixtures, i);
    VectorTuple t;
    for (std::size_t j = 0; j < norm.arity(); ++j) t.push_back(space.random(rng));
    out.push_back(std::move(t));
  }
  return out;
}

Element ElementSpace::random(Rng& rng) const { return from_coords(random_coords(rng)); }

std::vector<Element> ElementSpace::basis() const {
  std::vector<Element> out;
  const std::size_t d = coord_dim();
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> c(d, 0.0);
    c[i] = 1.0;
    out.push_back(from_coords(c));
  }
  return out;
}

SearchResult coordinate_ascent(const std::function<double(std::span<const double>)>& objective,
                               std::vector<double> start, int halvings,
                               std::size_t max_evaluations) {
  SearchResult r;
  r.point = std::move(start);
  auto f = [&](std::span<const double> x) {
    ++r.evaluations;
    const double v = objective(x);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };
  r.value = f(r.point);
  const std::size_t d = r.point.size();
  if (d == 0) return r;
  constexpr int kMaxSweeps = 16;
  for (int h = 0; h < halvings && r.evaluations < max_evaluations; ++h) {
    double big = 0.0;
    for (double x : r.point) big = std::max(big, std::abs(x));
    if (big == 0.0) big = 1.0;
    const double step = big * std::ldexp(1.0, -(h + 1));
    bool improved = true;
    for (int sweep = 0; improved && sweep < kMaxSweeps && r.evaluations < max_evaluations;
         ++sweep) {
      improved = false;
      for (std::size_t j = 0; j < d; ++j) {
        for (double sgn : {1.0, -1.0}) {
          const double old = r.point[j];
          r.point[j] = old + sgn * step;
          const double v = f(r.point);
          if (v > r.value) {
            r.value = v;
            improved = true;
            break;
          }
          r.point[j] = old;
        }
      }
    }
  }
  return r;
}

}  // namespace nnorm
