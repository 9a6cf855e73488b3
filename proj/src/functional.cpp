#include "nnorm/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnorm/error.hpp"
#include "nnorm/linalg.hpp"
#include "nnorm/sampling.hpp"
#include "nnorm/seeding.hpp"

namespace nnorm {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_constant(const Element& e) {
  const auto* p = std::get_if<Polynomial>(&e);
  return p && p->degree() == 0;
}

double weight_dot(const std::vector<double>& w, const Element& x) {
  if (const auto* v = std::get_if<Vector>(&x)) {
    if (v->dim() != w.size()) {
      throw ShapeError("weight form has " + std::to_string(w.size()) +
                       " weights, input dimension is " + std::to_string(v->dim()));
    }
    return linalg::dot(w, v->coords());
  }
  if (const auto* p = std::get_if<Polynomial>(&x)) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * p->coeff(j);
    return s;
  }
  const auto& q = std::get<ProductPair>(x);
  const auto* l = std::get_if<Vector>(&q.left);
  const auto* r = std::get_if<Vector>(&q.right);
  if (!l || !r) throw ShapeError("weight forms on product pairs need vector sides");
  if (l->dim() + r->dim() != w.size()) {
    throw ShapeError("weight form length differs from the product dimension");
  }
  return linalg::dot(std::span(w).first(l->dim()), l->coords()) +
         linalg::dot(std::span(w).subspan(l->dim()), r->coords());
}

struct Scored {
  double value;
  std::vector<double> coords;
};

/// Keeps the `keep` best entries, highest value first.
void offer(std::vector<Scored>& top, std::size_t keep, double value,
           const std::vector<double>& coords) {
  if (keep == 0) return;
  if (top.size() == keep && value <= top.back().value) return;
  auto it = std::upper_bound(top.begin(), top.end(), value,
                             [](double v, const Scored& s) { return v > s.value; });
  top.insert(it, Scored{value, coords});
  if (top.size() > keep) top.pop_back();
}

/// Random coordinates whose anchored norm is not degenerate; empty when 16
/// draws all were.
std::optional<std::vector<double>> draw_nondegenerate(const FunctionalChart& chart,
                                                       const BAnchors& anchors, Rng& rng,
                                                       double& measured) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    auto c = chart.random_coords(rng);
    measured = anchors(chart.element(c));
    if (measured >= kDegenerateNorm) return c;
  }
  return std::nullopt;
}

}  // namespace

BAnchors::BAnchors(AnchoredNorm measure) : measure_(std::move(measure)) {}

BAnchors::BAnchors(NNorm norm, std::vector<Element> anchors)
    : measure_(std::move(norm), std::move(anchors)) {
  const auto els = measure_.anchors();
  if (!els.empty() && is_linearly_dependent(els).dependent) {
    throw PreconditionError("anchors b_2 ... b_n are linearly dependent");
  }
  if (is_determinant()) {
    std::vector<linalg::Row> rows;
    for (const auto& a : els) {
      auto c = std::get<Vector>(a).coords();
      rows.emplace_back(c.begin(), c.end());
    }
    cofactor_ = linalg::cofactor_vector(rows);
  }
}

BAnchors BAnchors::scalars(std::vector<double> b) {
  return BAnchors(AnchoredNorm::scalar_anchors(std::move(b)));
}

double BAnchors::constant_product() const {
  if (is_scalar()) return measure_.scalar_product();
  double p = 1.0;
  for (const auto& a : elements()) {
    if (!is_constant(a)) throw PreconditionError("anchors are not constant polynomials");
    p *= std::get<Polynomial>(a).coeff(0);
  }
  return p;
}

bool BAnchors::well_conditioned(const Element& x, double measured) const {
  if (!(measured >= kDegenerateNorm)) return false;
  // the scalar-anchor measure is a max of coefficients: no cancellation
  if (is_scalar()) return true;
  VectorTuple t{x};
  t.insert(t.end(), elements().begin(), elements().end());
  return measured >= kRatioConditioning * tuple_scale(norm(), t);
}

const std::vector<double>& BAnchors::cofactor() const {
  if (!is_determinant()) throw PreconditionError("cofactor vector needs the determinant n-norm");
  return cofactor_;
}

bool operator==(const BAnchors& a, const BAnchors& b) {
  if (!(a.norm() == b.norm()) || a.is_scalar() != b.is_scalar()) return false;
  if (a.is_scalar()) {
    return std::ranges::equal(a.scalars(), b.scalars());
  }
  return std::ranges::equal(a.elements(), b.elements());
}

std::string action_name(const FunctionalAction& a) {
  return std::visit(overloaded{[](const WeightForm&) { return std::string("weight"); },
                               [](const DeterminantForm&) { return std::string("determinant"); },
                               [](const PartialSumForm&) { return std::string("partial_sum"); }},
                    a);
}

BLinearFunctional::BLinearFunctional(BAnchors anchors, FunctionalAction action,
                                     std::optional<Subspace> carrier)
    : anchors_(std::move(anchors)), action_(std::move(action)), carrier_(std::move(carrier)) {
  std::visit(
      overloaded{
          [&](const WeightForm& f) {
            for (double w : f.w) {
              if (!std::isfinite(w)) throw NonFiniteError("weight is not finite");
            }
            if (anchors_.is_determinant() && f.w.size() != anchors_.norm().arity()) {
              throw ShapeError("weight form length " + std::to_string(f.w.size()) +
                               " differs from dimension " +
                               std::to_string(anchors_.norm().arity()));
            }
          },
          [&](const DeterminantForm& f) {
            if (!std::isfinite(f.c)) throw NonFiniteError("determinant form scalar is not finite");
            if (!anchors_.is_determinant()) {
              throw PreconditionError("determinant form needs the determinant n-norm");
            }
          },
          [&](const PartialSumForm&) {
            if (anchors_.norm().kind() != NNormKind::PolyCoeffProduct) {
              throw PreconditionError("partial-sum form needs the polynomial coefficient n-norm");
            }
            (void)anchors_.constant_product();
          }},
      action_);
}

double BLinearFunctional::operator()(const Element& x) const {
  if (carrier_ && !carrier_->contains(x)) {
    throw PreconditionError("argument lies outside the functional's carrier");
  }
  return std::visit(
      overloaded{[&](const WeightForm& f) { return weight_dot(f.w, x); },
                 [&](const DeterminantForm& f) {
                   const auto* v = std::get_if<Vector>(&x);
                   if (!v || v->dim() != anchors_.norm().arity()) {
                     throw ShapeError("determinant form needs a vector of dimension " +
                                      std::to_string(anchors_.norm().arity()));
                   }
                   linalg::Matrix m;
                   m.emplace_back(v->coords().begin(), v->coords().end());
                   for (const auto& a : anchors_.elements()) {
                     auto c = std::get<Vector>(a).coords();
                     m.emplace_back(c.begin(), c.end());
                   }
                   return f.c * linalg::determinant(std::move(m));
                 },
                 [&](const PartialSumForm& f) {
                   const auto* p = std::get_if<Polynomial>(&x);
                   if (!p) throw ShapeError("partial-sum form needs a polynomial");
                   double s = 0.0;
                   for (std::size_t j = 0; j <= f.k; ++j) s += p->coeff(j);
                   return s * anchors_.constant_product();
                 }},
      action_);
}

BLinearFunctional BLinearFunctional::scaled(double alpha) const {
  FunctionalAction a = std::visit(
      overloaded{[&](const WeightForm& f) -> FunctionalAction {
                   WeightForm g = f;
                   for (double& w : g.w) w *= alpha;
                   return g;
                 },
                 [&](const DeterminantForm& f) -> FunctionalAction {
                   return DeterminantForm{alpha * f.c};
                 },
                 [&](const PartialSumForm&) -> FunctionalAction {
                   throw PreconditionError("partial-sum forms carry no scalar");
                 }},
      action_);
  return BLinearFunctional(anchors_, std::move(a), carrier_);
}

double evaluate(const BLinearFunctional& T, const Element& x) { return T(x); }

bool is_determinant_case(const BLinearFunctional& T) {
  return T.anchors().is_determinant() &&
         !std::holds_alternative<PartialSumForm>(T.action());
}

PropertyReport check_b_linearity(const BLinearFunctional& T,
                                 std::span<const std::pair<Element, Element>> samples,
                                 std::span<const double> scalars, double tol) {
  if (samples.empty()) throw PreconditionError("linearity check needs samples");
  PropertyReport r;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [x, y] = samples[i];
    const double tx = T(x);
    const double ty = T(y);
    const double txy = T(add(x, y));
    ++r.checked;
    const double add_bound = tol * (1.0 + std::abs(tx) + std::abs(ty));
    if (std::abs(txy - tx - ty) > add_bound) {
      r.violations.push_back({i, "additivity", txy, tx + ty});
    }
    for (double a : scalars) {
      ++r.checked;
      const double tax = T(scale(a, x));
      if (std::abs(tax - a * tx) > tol * (1.0 + std::abs(a) * std::abs(tx))) {
        r.violations.push_back({i, "homogeneity for scalar " + std::to_string(a), tax, a * tx});
      }
    }
  }
  return r;
}

std::string to_string(Certificate c) {
  return c == Certificate::CofactorDecomposition ? "cofactor_decomposition" : "none";
}

NormEstimate exact_norm_determinant(const BLinearFunctional& T, double tol) {
  if (!is_determinant_case(T)) {
    throw PreconditionError("exact norms need the determinant n-norm and a weight or "
                            "determinant action");
  }
  const auto& v = T.anchors().cofactor();
  std::vector<double> w;
  if (const auto* f = std::get_if<WeightForm>(&T.action())) {
    w = f->w;
  } else {
    const double c = std::get<DeterminantForm>(T.action()).c;
    w = v;
    for (double& x : w) x *= c;
  }

  // Restrict to the carrier: T(B s) = (B^T w) . s and ||B s, b|| = |(B^T v) . s|.
  std::vector<double> wr = w, vr = v;
  std::vector<std::vector<double>> basis;
  if (T.carrier()) {
    basis.assign(T.carrier()->basis_coords().begin(), T.carrier()->basis_coords().end());
    wr.clear();
    vr.clear();
    for (const auto& b : basis) {
      wr.push_back(linalg::dot(b, w));
      vr.push_back(linalg::dot(b, v));
    }
  }
  auto lift = [&](const std::vector<double>& s) -> Element {
    if (!T.carrier()) return Vector(s);
    return T.carrier()->combine(s);
  };

  NormEstimate est;
  est.certificate = Certificate::CofactorDecomposition;
  const double wn = linalg::norm2(wr);
  const double vv = linalg::dot(vr, vr);
  double basis_scale = 1.0;
  for (const auto& b : basis) basis_scale = std::max(basis_scale, linalg::norm2(b));
  const bool v_vanishes =
      vr.empty() || std::sqrt(vv) <= tol * linalg::norm2(v) * basis_scale;

  if (wn == 0.0) {
    est.exact = 0.0;
    return est;
  }
  const double c = v_vanishes ? 0.0 : linalg::dot(wr, vr) / vv;
  std::vector<double> orth = wr;
  for (std::size_t i = 0; i < orth.size(); ++i) orth[i] -= c * vr[i];
  if (v_vanishes || linalg::norm2(orth) > tol * wn) {
    est.unbounded = true;
    est.lower = kInf;
    est.certificate = Certificate::None;
    // a direction with T != 0 on which the anchored norm (nearly) vanishes
    est.witness = lift(orth);
    return est;
  }
  est.exact = std::abs(c);
  est.lower = std::abs(c);
  // witness: v direction scaled to ||x, b|| = 1
  std::vector<double> x = vr;
  for (double& xi : x) xi /= vv;
  est.witness = lift(x);
  return est;
}

FunctionalChart::FunctionalChart(const BLinearFunctional& T, std::size_t max_degree) {
  if (T.carrier()) {
    carrier_ = *T.carrier();
    dim_ = carrier_->dim();
    return;
  }
  std::size_t coeffs = max_degree + 1;
  if (const auto* f = std::get_if<PartialSumForm>(&T.action())) {
    coeffs = std::max(coeffs, f->k + 1);
  }
  if (T.anchors().is_scalar()) {
    space_ = ElementSpace::polynomials(coeffs);
  } else {
    space_ = ElementSpace::of(T.anchors().elements().front(), coeffs);
  }
  dim_ = space_->coord_dim();
}

Element FunctionalChart::element(std::span<const double> coords) const {
  if (carrier_) return carrier_->combine(coords);
  return space_->from_coords(coords);
}

std::vector<double> FunctionalChart::random_coords(Rng& rng) const {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> c(dim_);
  for (double& x : c) x = g(rng);
  return c;
}

NormEstimate estimate_norm_sampling(const BLinearFunctional& T, std::size_t budget,
                                    std::uint64_t seed, const SamplingOptions& opts) {
  if (budget == 0) throw PreconditionError("sampling budget must be at least 1");
  const FunctionalChart chart(T, opts.max_degree);
  const BAnchors& b = T.anchors();
  NormEstimate est;
  if (chart.dim() == 0) return est;

  auto ratio = [&](std::span<const double> c) {
    ++est.evaluations;
    const Element x = chart.element(c);
    const double m = b(x);
    if (!b.well_conditioned(x, m)) return -kInf;
    return std::abs(T(x)) / m;
  };

  std::vector<Scored> top;
  for (std::size_t i = 0; i < budget; ++i) {
    auto rng = make_rng(seed, streams::kNormSampling, i);
    double m = 0.0;
    auto c = draw_nondegenerate(chart, b, rng, m);
    if (!c) continue;
    offer(top, opts.refine_starts, ratio(*c), *c);
  }
  if (top.empty()) return est;
  Scored best = top.front();
  for (const auto& start : top) {
    auto r = coordinate_ascent(ratio, start.coords, 48, opts.refine_evaluations);
    if (r.value > best.value) best = Scored{r.value, r.point};
  }
  est.lower = best.value;
  const Element x = chart.element(best.coords);
  est.witness = scale(1.0 / b(x), x);
  return est;
}

NormEstimate functional_norm(const BLinearFunctional& T, std::size_t budget, std::uint64_t seed,
                             const SamplingOptions& opts) {
  if (is_determinant_case(T)) return exact_norm_determinant(T);
  return estimate_norm_sampling(T, budget, seed, opts);
}

NormFormulas norm_formulas_sampled(const BLinearFunctional& T, std::size_t budget,
                                   std::uint64_t seed, const SamplingOptions& opts) {
  if (budget == 0) throw PreconditionError("sampling budget must be at least 1");
  const FunctionalChart chart(T, opts.max_degree);
  const BAnchors& b = T.anchors();
  NormFormulas out;
  if (chart.dim() == 0) return out;
  const double d = static_cast<double>(chart.dim());

  // ratio formula
  out.ratio_sup = estimate_norm_sampling(T, budget, seed, opts).lower;

  // unit sphere: normalise first, then evaluate
  auto on_sphere = [&](std::span<const double> c) {
    Element x = chart.element(c);
    const double m = b(x);
    if (!b.well_conditioned(x, m)) return -kInf;
    return std::abs(T(scale(1.0 / m, x)));
  };
  // closed unit ball: evaluate only points inside
  auto in_ball = [&](std::span<const double> c) {
    Element x = chart.element(c);
    if (b(x) > 1.0) return -kInf;
    return std::abs(T(x));
  };
  std::vector<Scored> sphere_top, ball_top;
  for (std::size_t i = 0; i < budget; ++i) {
    {
      auto rng = make_rng(seed, streams::kSphereFormula, i);
      double m = 0.0;
      if (auto c = draw_nondegenerate(chart, b, rng, m)) {
        offer(sphere_top, opts.refine_starts, on_sphere(*c), *c);
      }
    }
    {
      auto rng = make_rng(seed, streams::kBallFormula, i);
      double m = 0.0;
      if (auto c = draw_nondegenerate(chart, b, rng, m)) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double rho = std::pow(u(rng), 1.0 / d) / m;
        for (double& x : *c) x *= rho;
        offer(ball_top, opts.refine_starts, in_ball(*c), *c);
      }
    }
  }
  for (const auto& s : sphere_top) {
    out.sphere_sup = std::max(
        out.sphere_sup, coordinate_ascent(on_sphere, s.coords, 48, opts.refine_evaluations).value);
  }
  for (const auto& s : ball_top) {
    out.ball_sup = std::max(
        out.ball_sup, coordinate_ascent(in_ball, s.coords, 48, opts.refine_evaluations).value);
  }
  return out;
}

PropertyReport check_lipschitz(const BLinearFunctional& T, double norm_bound,
                               std::span<const std::pair<Element, Element>> pairs, double tol) {
  if (!(norm_bound >= 0.0)) throw PreconditionError("norm bound must be nonnegative");
  PropertyReport r;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [x, y] = pairs[i];
    const double lhs = std::abs(T(x) - T(y));
    const double rhs = norm_bound * T.anchors()(subtract(x, y)) + tol;
    ++r.checked;
    if (lhs > rhs) r.violations.push_back({i, "Lipschitz bound exceeded", lhs, rhs});
  }
  return r;
}

SequentialContinuityReport check_b_sequential_continuity(const BLinearFunctional& T,
                                                         const SequenceSample& seq,
                                                         const Element& limit, double tol,
                                                         double tail_fraction,
                                                         std::optional<double> convergence_tol) {
  SequentialContinuityReport out;
  const AnchoredNorm& m = T.anchors().measure();
  out.premise = check_convergence_anchored(std::span(&m, 1), seq.terms, limit, tail_fraction,
                                           convergence_tol.value_or(tol));
  if (!out.premise.converged) {
    throw PreconditionError("sequence does not converge to the limit at sample scale (tail " +
                            std::to_string(out.premise.max_tail_norm) + ")");
  }
  const double tl = T(limit);
  for (std::size_t k = out.premise.tail_start; k < seq.terms.size(); ++k) {
    const double gap = std::abs(T(seq.terms[k]) - tl);
    out.max_tail_gap = std::max(out.max_tail_gap, gap);
    ++out.property.checked;
    if (gap > tol) out.property.violations.push_back({k, "T x_k stays away from T x", gap, tol});
  }
  return out;
}

bool EpsDeltaReport::ok() const noexcept {
  return std::all_of(entries.begin(), entries.end(),
                     [](const EpsDeltaEntry& e) { return e.delta.has_value(); });
}

EpsDeltaReport check_epsilon_delta_continuity(const BLinearFunctional& T, const Element& point,
                                              std::span<const double> epsilons,
                                              std::size_t probe_budget, std::uint64_t seed,
                                              const SamplingOptions& opts) {
  if (probe_budget == 0) throw PreconditionError("probe budget must be at least 1");
  const FunctionalChart chart(T, opts.max_degree);
  const BAnchors& b = T.anchors();
  const double tp = T(point);
  const bool anchor_moves = !T.carrier() && !b.is_scalar();
  EpsDeltaReport rep;

  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    const double eps = epsilons[e];
    if (!(eps > 0.0)) throw PreconditionError("epsilon must be positive");
    EpsDeltaEntry entry{eps, std::nullopt, -1};
    for (int r = 0; r < kDeltaLadderRungs && !entry.delta; ++r) {
      const double delta = std::ldexp(1.0, -r);
      auto rng = make_rng(seed, streams::kEpsDelta,
                          e * static_cast<std::uint64_t>(kDeltaLadderRungs) + r);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      std::normal_distribution<double> g(0.0, 1.0);
      bool all_within = true;
      for (std::size_t p = 0; p < probe_budget && all_within; ++p) {
        double m = 0.0;
        auto c = draw_nondegenerate(chart, b, rng, m);
        if (!c) continue;
        // radius fraction biased toward the boundary, strictly inside
        const double frac = 1.0 - std::pow(1.0 - u(rng), 3.0);
        const double rho = std::min(frac, 1.0 - 1e-12) * delta / m;
        Element offset = scale(rho, chart.element(*c));
        if (anchor_moves) {
          for (const auto& a : b.elements()) offset = axpy(offset, 10.0 * g(rng), a);
        }
        if (!(b(offset) < delta)) continue;
        ++rep.probes;
        if (std::abs(T(add(point, offset)) - tp) >= eps) all_within = false;
      }
      if (all_within) {
        entry.delta = delta;
        entry.rung = r;
      }
    }
    rep.entries.push_back(entry);
  }
  return rep;
}

}  // namespace nnorm
