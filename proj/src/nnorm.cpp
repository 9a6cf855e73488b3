#include "nnorm/nnorm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nnorm/error.hpp"
#include "nnorm/linalg.hpp"

namespace nnorm {

namespace {

bool is_polynomial(const Component& c) { return std::holds_alternative<Polynomial>(c); }

void require_component_kind(const NNorm& norm, const Component& c, std::size_t i) {
  const bool want_poly = norm.kind() == NNormKind::PolyCoeffProduct;
  if (want_poly != is_polynomial(c)) {
    throw ShapeError(std::string("product side must be a ") + (want_poly ? "polynomial" : "vector") +
                         " for " + to_string(norm.kind()),
                     i);
  }
  if (!want_poly && std::get<Vector>(c).dim() != norm.arity()) {
    throw ShapeError("determinant side needs dimension " + std::to_string(norm.arity()), i);
  }
}

std::vector<Element> side(std::span<const Element> tuple, bool left) {
  std::vector<Element> out;
  out.reserve(tuple.size());
  for (const auto& e : tuple) {
    const auto& q = std::get<ProductPair>(e);
    const Component& c = left ? q.left : q.right;
    if (const auto* v = std::get_if<Vector>(&c)) {
      out.emplace_back(*v);
    } else {
      out.emplace_back(std::get<Polynomial>(c));
    }
  }
  return out;
}

double signed_det(std::span<const Element> tuple) {
  linalg::Matrix m;
  m.reserve(tuple.size());
  for (const auto& e : tuple) {
    auto c = std::get<Vector>(e).coords();
    m.emplace_back(c.begin(), c.end());
  }
  return linalg::determinant(std::move(m));
}

double poly_coeff_product(std::span<const Element> tuple) {
  if (is_linearly_dependent(tuple).dependent) return 0.0;
  double p = 1.0;
  for (const auto& e : tuple) p *= std::get<Polynomial>(e).max_abs_coeff();
  return p;
}

double eval_unchecked(const NNorm& norm, std::span<const Element> tuple) {
  switch (norm.kind()) {
    case NNormKind::Determinant: return std::abs(signed_det(tuple));
    case NNormKind::SignedDeterminant: return signed_det(tuple);
    case NNormKind::PolyCoeffProduct: return poly_coeff_product(tuple);
    case NNormKind::ProductSum:
    case NNormKind::ProductMax: {
      const double x = eval_unchecked(norm.components()[0], side(tuple, true));
      const double y = eval_unchecked(norm.components()[1], side(tuple, false));
      return norm.kind() == NNormKind::ProductSum ? x + y : std::max(x, y);
    }
  }
  return 0.0;
}

double scale_unchecked(const NNorm& norm, std::span<const Element> tuple) {
  switch (norm.kind()) {
    case NNormKind::Determinant:
    case NNormKind::SignedDeterminant: {
      double s = 1.0;
      for (const auto& e : tuple) s *= euclidean_length(e);
      return s;
    }
    case NNormKind::PolyCoeffProduct: {
      double s = 1.0;
      for (const auto& e : tuple) s *= std::get<Polynomial>(e).max_abs_coeff();
      return s;
    }
    case NNormKind::ProductSum:
    case NNormKind::ProductMax: {
      const double x = scale_unchecked(norm.components()[0], side(tuple, true));
      const double y = scale_unchecked(norm.components()[1], side(tuple, false));
      return norm.kind() == NNormKind::ProductSum ? x + y : std::max(x, y);
    }
  }
  return 0.0;
}

// Coefficients for the N1 dependent probe: fixed, nonzero, varied per slot.
double probe_coefficient(std::size_t sample, std::size_t slot) {
  static constexpr double table[] = {0.75, -1.5, 2.25, -0.625, 1.125, -2.5, 0.3125};
  return table[(sample + 3 * slot) % (sizeof(table) / sizeof(table[0]))];
}

}  // namespace

std::string to_string(NNormKind k) {
  switch (k) {
    case NNormKind::Determinant: return "determinant";
    case NNormKind::PolyCoeffProduct: return "poly_coeff_product";
    case NNormKind::ProductSum: return "product_sum";
    case NNormKind::ProductMax: return "product_max";
    case NNormKind::SignedDeterminant: return "signed_determinant";
  }
  return "unknown";
}

std::optional<NNormKind> parse_nnorm_kind(std::string_view s) {
  for (auto k : {NNormKind::Determinant, NNormKind::PolyCoeffProduct, NNormKind::ProductSum,
                 NNormKind::ProductMax, NNormKind::SignedDeterminant}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

NNorm::NNorm(NNormKind kind, std::size_t arity, std::vector<NNorm> components)
    : kind_(kind), arity_(arity), components_(std::move(components)) {
  if (arity_ < 2) throw ShapeError("n-norm arity must be at least 2");
}

NNorm NNorm::determinant(std::size_t arity) { return NNorm(NNormKind::Determinant, arity, {}); }
NNorm NNorm::poly_coeff_product(std::size_t arity) {
  return NNorm(NNormKind::PolyCoeffProduct, arity, {});
}
NNorm NNorm::signed_determinant(std::size_t arity) {
  return NNorm(NNormKind::SignedDeterminant, arity, {});
}

NNorm NNorm::product_sum(NNorm x, NNorm y) {
  if (x.arity() != y.arity()) throw ShapeError("product components must share arity");
  if (x.is_product() || y.is_product()) throw ShapeError("product components must be simple kinds");
  const std::size_t n = x.arity();
  return NNorm(NNormKind::ProductSum, n, {std::move(x), std::move(y)});
}

NNorm NNorm::product_max(NNorm x, NNorm y) {
  if (x.arity() != y.arity()) throw ShapeError("product components must share arity");
  if (x.is_product() || y.is_product()) throw ShapeError("product components must be simple kinds");
  const std::size_t n = x.arity();
  return NNorm(NNormKind::ProductMax, n, {std::move(x), std::move(y)});
}

void require_compatible(const NNorm& norm, std::span<const Element> tuple) {
  if (tuple.size() != norm.arity()) {
    throw ShapeError("tuple length " + std::to_string(tuple.size()) + " differs from arity " +
                     std::to_string(norm.arity()));
  }
  require_homogeneous(tuple);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const Element& e = tuple[i];
    switch (norm.kind()) {
      case NNormKind::Determinant:
      case NNormKind::SignedDeterminant: {
        const auto* v = std::get_if<Vector>(&e);
        if (!v) throw ShapeError("determinant n-norm needs vectors", i);
        if (v->dim() != norm.arity()) {
          throw ShapeError("determinant n-norm needs dimension " + std::to_string(norm.arity()) +
                               ", got " + std::to_string(v->dim()),
                           i);
        }
        break;
      }
      case NNormKind::PolyCoeffProduct:
        if (!std::holds_alternative<Polynomial>(e)) {
          throw ShapeError("coefficient-product n-norm needs polynomials", i);
        }
        break;
      case NNormKind::ProductSum:
      case NNormKind::ProductMax: {
        const auto* q = std::get_if<ProductPair>(&e);
        if (!q) throw ShapeError("product n-norm needs product pairs", i);
        require_component_kind(norm.components()[0], q->left, i);
        require_component_kind(norm.components()[1], q->right, i);
        break;
      }
    }
  }
}

double eval_nnorm(const NNorm& norm, std::span<const Element> tuple) {
  require_compatible(norm, tuple);
  return eval_unchecked(norm, tuple);
}

DependenceVerdict is_linearly_dependent(std::span<const Element> tuple, double tol) {
  if (tuple.empty()) throw ShapeError("dependence test needs a nonempty tuple");
  if (!(tol > 0.0)) throw PreconditionError("rank tolerance must be positive");
  auto rows = embed_rows(tuple);
  auto r = linalg::rank(std::move(rows), tol);
  return DependenceVerdict{r.rank < tuple.size(), r.rank, tol};
}

double tuple_scale(const NNorm& norm, std::span<const Element> tuple) {
  require_compatible(norm, tuple);
  return scale_unchecked(norm, tuple);
}

std::string to_string(Axiom a) {
  switch (a) {
    case Axiom::N1: return "N1";
    case Axiom::N2: return "N2";
    case Axiom::N3: return "N3";
    case Axiom::N4: return "N4";
  }
  return "?";
}

std::size_t AxiomReport::count(Axiom a) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [a](const auto& v) { return v.axiom == a; }));
}

AxiomReport check_axioms(const NNorm& norm, std::span<const VectorTuple> samples,
                         std::span<const double> scalars, double tol) {
  if (samples.empty()) throw PreconditionError("axiom check needs at least one sample");
  for (std::size_t s = 0; s < samples.size(); ++s) {
    try {
      require_compatible(norm, samples[s]);
    } catch (const ShapeError& e) {
      throw ShapeError(std::string("sample ") + std::to_string(s) + ": " + e.what(), s);
    }
  }

  AxiomReport report;
  report.samples_checked = samples.size();
  const std::size_t n = norm.arity();
  auto eval = [&](std::span<const Element> t) {
    ++report.evaluations;
    return eval_unchecked(norm, t);
  };
  auto violate = [&](Axiom a, std::size_t s, std::string detail, VectorTuple witness,
                     double observed, double expected) {
    report.violations.push_back(
        AxiomViolation{a, s, std::move(detail), std::move(witness), observed, expected});
  };

  for (std::size_t s = 0; s < samples.size(); ++s) {
    const VectorTuple& t = samples[s];
    const double value = eval(t);
    const double tscale = scale_unchecked(norm, t);

    // N1
    {
      const bool dependent = is_linearly_dependent(t, tol).dependent;
      const bool zero = std::abs(value) < tol * tscale || value == 0.0;
      if (dependent != zero) {
        violate(Axiom::N1, s,
                dependent ? "dependent tuple has nonzero value"
                          : "independent tuple has zero value",
                t, value, 0.0);
      }
      VectorTuple probe = t;
      Element combo = scale(probe_coefficient(s, 1), t[1]);
      for (std::size_t j = 2; j < n; ++j) combo = axpy(combo, probe_coefficient(s, j), t[j]);
      probe[0] = combo;
      const double pv = eval(probe);
      const double ps = scale_unchecked(norm, probe);
      const bool pdep = is_linearly_dependent(probe, tol).dependent;
      const bool pzero = std::abs(pv) < tol * ps || pv == 0.0;
      if (!pdep || !pzero) {
        violate(Axiom::N1, s, "slot 1 in the span of the others does not give zero", probe, pv,
                0.0);
      }
    }

    // N2
    {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      VectorTuple permuted(t);
      while (std::next_permutation(perm.begin(), perm.end())) {
        for (std::size_t i = 0; i < n; ++i) permuted[i] = t[perm[i]];
        const double pv = eval(permuted);
        if (std::abs(pv - value) > tol * (1.0 + std::abs(value))) {
          violate(Axiom::N2, s, "permutation changes the value", permuted, pv, value);
        }
      }
    }

    // N3
    for (double alpha : scalars) {
      VectorTuple scaled = t;
      scaled[0] = scale(alpha, t[0]);
      const double sv = eval(scaled);
      const double expected = std::abs(alpha) * value;
      if (std::abs(sv - expected) > tol * (1.0 + std::abs(expected))) {
        violate(Axiom::N3, s, "not absolutely homogeneous for alpha = " + std::to_string(alpha),
                scaled, sv, expected);
      }
    }

    // N4
    if (s + 1 < samples.size()) {
      const Element& x = t[0];
      const Element& y = samples[s + 1][0];
      VectorTuple sum = t;
      sum[0] = add(x, y);
      VectorTuple with_y = t;
      with_y[0] = y;
      const double lhs = eval(sum);
      const double rhs = value + eval(with_y);
      if (lhs > rhs + tol) {
        violate(Axiom::N4, s, "triangle inequality fails in slot 1", sum, lhs, rhs);
      }
    }
  }
  return report;
}

bool ball_contains(const NNorm& norm, std::span<const Element> anchors, const Element& center,
                   double radius, bool open, const Element& point) {
  if (!(radius > 0.0)) throw PreconditionError("ball radius must be positive");
  if (anchors.size() + 1 != norm.arity()) {
    throw ShapeError("ball needs arity - 1 anchors, got " + std::to_string(anchors.size()));
  }
  VectorTuple t;
  t.reserve(norm.arity());
  t.push_back(subtract(point, center));
  t.insert(t.end(), anchors.begin(), anchors.end());
  const double d = eval_nnorm(norm, t);
  return open ? d < radius : d <= radius;
}

AnchoredNorm::AnchoredNorm(NNorm norm, std::vector<Element> anchors, std::vector<double> scalars,
                           bool scalar)
    : norm_(std::move(norm)),
      anchors_(std::move(anchors)),
      scalars_(std::move(scalars)),
      scalar_(scalar) {}

AnchoredNorm::AnchoredNorm(NNorm norm, std::vector<Element> anchors)
    : AnchoredNorm(std::move(norm), std::move(anchors), {}, false) {
  if (anchors_.size() + 1 != norm_.arity()) {
    throw ShapeError("expected " + std::to_string(norm_.arity() - 1) + " anchors, got " +
                     std::to_string(anchors_.size()));
  }
  if (!anchors_.empty()) {
    // probe compatibility with the first anchor standing in slot 1
    VectorTuple t;
    t.push_back(anchors_.front());
    t.insert(t.end(), anchors_.begin(), anchors_.end());
    require_compatible(norm_, t);
  }
}

AnchoredNorm AnchoredNorm::scalar_anchors(std::vector<double> b_scalars) {
  if (b_scalars.empty()) throw ShapeError("scalar anchors need at least one value");
  for (double b : b_scalars) {
    if (!std::isfinite(b)) throw NonFiniteError("scalar anchor is not finite");
  }
  const std::size_t n = b_scalars.size() + 1;
  return AnchoredNorm(NNorm::poly_coeff_product(n), {}, std::move(b_scalars), true);
}

double AnchoredNorm::scalar_product() const noexcept {
  double p = 1.0;
  for (double b : scalars_) p *= b;
  return p;
}

double AnchoredNorm::operator()(const Element& x) const {
  if (scalar_) {
    const auto* p = std::get_if<Polynomial>(&x);
    if (!p) throw ShapeError("scalar anchors act on polynomials only");
    return p->max_abs_coeff() * std::abs(scalar_product());
  }
  VectorTuple t;
  t.reserve(norm_.arity());
  t.push_back(x);
  t.insert(t.end(), anchors_.begin(), anchors_.end());
  return eval_nnorm(norm_, t);
}

}  // namespace nnorm
