#include "nnorm/hahn_banach.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnorm/error.hpp"
#include "nnorm/linalg.hpp"
#include "nnorm/sampling.hpp"
#include "nnorm/seeding.hpp"

namespace nnorm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kRefineStarts = 8;
constexpr std::size_t kRefineEvaluations = 20000;
constexpr std::size_t kRestrictionSamples = 200;
constexpr double kIntervalRounding = 1e-12;

struct Start {
  double value;
  std::vector<double> coords;
};

void keep_best(std::vector<Start>& top, double value, std::vector<double> coords) {
  if (top.size() == kRefineStarts && value <= top.back().value) return;
  auto it = std::upper_bound(top.begin(), top.end(), value,
                             [](double v, const Start& s) { return v > s.value; });
  top.insert(it, Start{value, std::move(coords)});
  if (top.size() > kRefineStarts) top.pop_back();
}

/// Multi-start maximisation of `objective` over coefficient vectors of length
/// `dim`. Random starts are Gaussian with a log-uniform spread of scales
/// around `scale`; the zero vector is always a start.
SearchResult maximise(const std::function<double(std::span<const double>)>& objective,
                      std::size_t dim, double scale, std::size_t budget, std::uint64_t seed,
                      std::uint64_t stream) {
  std::vector<Start> top;
  std::vector<double> zero(dim, 0.0);
  keep_best(top, objective(zero), zero);
  for (std::size_t i = 0; i < budget; ++i) {
    auto rng = make_rng(seed, stream, i);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const double spread = scale * std::exp(u(rng));
    std::vector<double> s(dim);
    for (double& x : s) x = spread * g(rng);
    const double v = objective(s);
    if (!std::isnan(v)) keep_best(top, v, std::move(s));
  }
  SearchResult best{top.front().coords, top.front().value, 0};
  for (const auto& st : top) {
    auto r = coordinate_ascent(objective, st.coords, 60, kRefineEvaluations);
    if (r.value > best.value) best = std::move(r);
  }
  return best;
}

double coeff_scale(const Subspace& W, const Element& x0) {
  const double x0n = euclidean_length(x0);
  double bn = 0.0;
  for (const auto& c : W.basis_coords()) bn = std::max(bn, linalg::norm2(c));
  if (bn == 0.0) return 1.0;
  return std::max(x0n, 1e-300) / bn;
}

/// Minimum-norm weight vector w (in the coordinates of C's space) with
/// w . c_i = values[i] for every basis element c_i of C.
std::vector<double> min_norm_weights(const Subspace& C, std::span<const double> values) {
  const auto cols = C.basis_coords();
  const std::size_t k = cols.size();
  std::vector<linalg::Row> gram_cols(k, linalg::Row(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) gram_cols[j][i] = linalg::dot(cols[i], cols[j]);
  }
  const auto ls = linalg::least_squares(gram_cols, values);
  return linalg::combine(cols, ls.solution, C.ambient_dim());
}

bool tuple_dependent(const Element& x, const BAnchors& anchors) {
  if (anchors.is_scalar()) return anchors(x) == 0.0;
  VectorTuple t{x};
  t.insert(t.end(), anchors.elements().begin(), anchors.elements().end());
  return is_linearly_dependent(t).dependent;
}

/// Residual, bound validation and norm evidence for an extension of T_W.
ExtensionResult assess(BLinearFunctional extended, const BLinearFunctional& T_W,
                       const Subspace& W, double norm_TW, std::size_t checks,
                       std::uint64_t seed) {
  const BAnchors& b = T_W.anchors();
  ExtensionResult r{std::move(extended), std::nullopt, 0.0, norm_TW, 0.0, std::nullopt,
                    0, 0, -kInf, false, false};
  const BLinearFunctional& T0 = r.extended;

  double value_scale = 0.0;
  for (const auto& w : W.basis()) {
    const double tw = T_W(w);
    value_scale = std::max(value_scale, std::abs(tw));
    r.restriction_residual = std::max(r.restriction_residual, std::abs(T0(w) - tw));
  }
  if (W.dim() > 0) {
    for (std::size_t i = 0; i < kRestrictionSamples; ++i) {
      auto rng = make_rng(seed, streams::kRestriction, i);
      std::normal_distribution<double> g(0.0, 1.0);
      std::vector<double> s(W.dim());
      for (double& x : s) x = g(rng);
      const Element x = W.combine(s);
      r.restriction_residual = std::max(r.restriction_residual, std::abs(T0(x) - T_W(x)));
    }
  }

  const FunctionalChart chart(T0, SamplingOptions{}.max_degree);
  for (std::size_t i = 0; i < checks; ++i) {
    auto rng = make_rng(seed, streams::kExtensionCheck, i);
    const Element y = chart.element(chart.random_coords(rng));
    const double m = b(y);
    const double val = std::abs(T0(y));
    ++r.samples_checked;
    const double excess = val - norm_TW * m;
    r.max_bound_excess = std::max(r.max_bound_excess, excess);
    if (excess > kExtensionSlack) ++r.bound_violations;
    if (b.well_conditioned(y, m)) r.norm_extended_lower = std::max(r.norm_extended_lower, val / m);
  }
  if (is_determinant_case(T0)) {
    const auto e = exact_norm_determinant(T0);
    if (e.exact) r.norm_extended_exact = *e.exact;
  }
  r.norm_not_decreased_evidence =
      r.norm_extended_exact ? *r.norm_extended_exact >= norm_TW - 1e-9 * std::max(1.0, norm_TW)
                            : r.norm_extended_lower >= norm_TW * (1.0 - 1e-6);
  const bool exact_ok =
      !r.norm_extended_exact ||
      std::abs(*r.norm_extended_exact - norm_TW) <= 1e-6 * std::max(1.0, norm_TW);
  r.preserved = r.bound_violations == 0 &&
                r.restriction_residual <= 1e-9 * (1.0 + value_scale) && exact_ok;
  return r;
}

}  // namespace

AlphaInterval alpha_interval(const BLinearFunctional& T_W, const Subspace& W, const Element& x0,
                             double norm_TW, std::size_t budget, std::uint64_t seed) {
  if (budget == 0) throw PreconditionError("alpha interval needs a positive budget");
  if (W.contains(x0)) throw PreconditionError("x0 lies in W");
  const BAnchors& b = T_W.anchors();
  const Element zero = zero_like(x0);
  if (W.dim() == 0) {
    const double m = norm_TW * b(x0);
    return AlphaInterval{-m, m, zero, zero, 1, false};
  }
  auto lo_obj = [&](std::span<const double> s) {
    const Element x = W.combine(s);
    return T_W(x) - norm_TW * b(add(x, x0));
  };
  auto hi_obj = [&](std::span<const double> s) {
    const Element x = W.combine(s);
    return -(T_W(x) + norm_TW * b(add(x, x0)));
  };
  const double sc = coeff_scale(W, x0);
  const auto lo = maximise(lo_obj, W.dim(), sc, budget, seed, streams::kAlphaLo);
  const auto hi = maximise(hi_obj, W.dim(), sc, budget, seed, streams::kAlphaHi);
  AlphaInterval a{lo.value, -hi.value, W.combine(lo.point), W.combine(hi.point), 2 * budget,
                  false};
  // the exact interval can be a single point; crossings at rounding level are not
  // sampling errors
  a.inverted = a.lo - a.hi > kIntervalRounding * (1.0 + std::abs(a.lo) + std::abs(a.hi));
  return a;
}

ExtensionResult one_step_extension(const BLinearFunctional& T_W, const Subspace& W,
                                   const Element& x0, double alpha, double norm_TW,
                                   std::size_t checks, std::uint64_t seed) {
  if (!std::isfinite(alpha)) throw NonFiniteError("alpha is not finite");
  const Subspace C = W.extended_by(x0);
  std::vector<double> values;
  for (const auto& w : W.basis()) values.push_back(T_W(w));
  values.push_back(-alpha);
  BLinearFunctional T0(T_W.anchors(), WeightForm{min_norm_weights(C, values)}, C);
  auto r = assess(std::move(T0), T_W, W, norm_TW, checks, seed);
  r.alpha = alpha;
  return r;
}

ValidatedExtension validated_extension(const BLinearFunctional& T_W, const Subspace& W,
                                       const Element& x0, double norm_TW, std::size_t budget,
                                       std::uint64_t seed, std::size_t checks) {
  std::size_t round_budget = budget;
  for (int round = 0; round < 3; ++round, round_budget *= 4) {
    const auto round_seed = derive_seed(seed, streams::kAlphaLo, round);
    auto interval = alpha_interval(T_W, W, x0, norm_TW, round_budget, round_seed);
    const double alpha = 0.5 * (interval.lo + interval.hi);
    auto result = one_step_extension(T_W, W, x0, alpha, norm_TW, checks, round_seed);
    if (result.bound_violations == 0) {
      return ValidatedExtension{std::move(interval), std::move(result), round + 1};
    }
  }
  throw ValidationError("one-step extension failed validation after 3 rounds");
}

ExtensionResult extend_to_space(const BLinearFunctional& T_W, const Subspace& W,
                                double norm_TW, std::size_t budget, std::uint64_t seed) {
  BLinearFunctional current = restrict_to(T_W, W);
  Subspace carrier = W;
  const auto units = W.space().basis();
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (carrier.contains(units[i])) continue;
    auto step = validated_extension(current, carrier, units[i], norm_TW, budget,
                                    derive_seed(seed, streams::kExtensionChain, i));
    current = step.result.extended;
    carrier = *current.carrier();
  }
  return assess(std::move(current), T_W, W, norm_TW, 1000, seed);
}

BLinearFunctional restrict_to(const BLinearFunctional& T, const Subspace& W) {
  if (T.carrier()) {
    for (std::size_t i = 0; i < W.dim(); ++i) {
      if (!T.carrier()->contains(W.basis()[i])) {
        throw PreconditionError("basis element " + std::to_string(i) +
                                " of W lies outside the functional's carrier");
      }
    }
  }
  return BLinearFunctional(T.anchors(), T.action(), W);
}

ExtensionResult extend_determinant_form(const BLinearFunctional& T_W, const Subspace& W,
                                        double tol) {
  const BAnchors& b = T_W.anchors();
  if (!b.is_determinant()) throw PreconditionError("determinant extension needs the determinant n-norm");
  const auto restricted = restrict_to(T_W, W);
  const auto est = exact_norm_determinant(restricted, tol);
  if (est.unbounded) {
    std::string dir;
    for (double c : W.space().to_coords(*est.witness)) dir += " " + std::to_string(c);
    throw PreconditionError("T_W is unbounded on W: nonzero along a direction of ker v:" + dir);
  }
  const auto& v = b.cofactor();
  std::vector<double> r, p;
  for (std::size_t i = 0; i < W.dim(); ++i) {
    r.push_back(T_W(W.basis()[i]));
    p.push_back(linalg::dot(v, W.basis_coords()[i]));
  }
  const double pp = linalg::dot(p, p);
  const double c = (*est.exact == 0.0 || pp == 0.0) ? 0.0 : linalg::dot(r, p) / pp;
  BLinearFunctional T(b, DeterminantForm{c});

  auto res = assess(std::move(T), T_W, W, *est.exact, 1000, kDefaultSeed);
  res.norm_extended_exact = std::abs(c);
  res.preserved = res.preserved &&
                  std::abs(std::abs(c) - *est.exact) <= tol * std::max(1.0, *est.exact);
  return res;
}

NormingResult norming_functional(const Element& x0, const BAnchors& anchors, std::size_t budget,
                                 std::uint64_t seed) {
  const double m = anchors(x0);
  if (!(m >= kDegenerateNorm)) {
    throw PreconditionError("||x0, b|| vanishes: no norming functional");
  }
  if (anchors.is_determinant()) {
    const double d = BLinearFunctional(anchors, DeterminantForm{1.0})(x0);
    BLinearFunctional T(anchors, DeterminantForm{d < 0.0 ? -1.0 : 1.0});
    return NormingResult{T, T(x0), 1.0, true};
  }
  std::size_t coeffs = 1;
  if (const auto* p = std::get_if<Polynomial>(&x0)) coeffs = p->degree() + 1;
  for (const auto& a : anchors.elements()) {
    if (const auto* p = std::get_if<Polynomial>(&a)) coeffs = std::max(coeffs, p->degree() + 1);
  }
  const Subspace line(ElementSpace::of(x0, coeffs), {x0});
  const double vals[] = {m};
  BLinearFunctional T_line(anchors, WeightForm{min_norm_weights(line, vals)}, line);
  auto ext = extend_to_space(T_line, line, 1.0, budget, seed);
  const double value = ext.extended(x0);
  return NormingResult{ext.extended, value, ext.norm_extended_lower, false};
}

DualSupResult norm_via_dual_sup(const Element& x, std::span<const BLinearFunctional> pool,
                                std::size_t budget, std::uint64_t seed) {
  if (pool.empty()) throw PreconditionError("functional pool is empty");
  DualSupResult r;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto e = functional_norm(pool[i], budget, derive_seed(seed, streams::kDualPool, i));
    const double nv = e.exact.value_or(e.lower);
    if (e.unbounded || !(nv > 0.0)) {
      ++r.skipped;
      continue;
    }
    const double val = std::abs(pool[i](x)) / nv;
    if (!r.best_index || val > r.value) {
      r.value = val;
      r.best_index = i;
    }
  }
  return r;
}

DistanceResult distance_to_subspace(const Element& x, const Subspace& S, const BAnchors& anchors,
                                    std::size_t budget, std::uint64_t seed) {
  if (S.dim() == 0) return DistanceResult{anchors(x), zero_like(x), true, false};
  if (anchors.is_determinant()) {
    const auto& v = anchors.cofactor();
    const auto xc = S.space().to_coords(x);
    std::vector<double> p;
    double bscale = 1.0;
    for (const auto& c : S.basis_coords()) {
      p.push_back(linalg::dot(v, c));
      bscale = std::max(bscale, linalg::norm2(c));
    }
    const double vx = linalg::dot(v, xc);
    const double pn = linalg::norm2(p);
    if (pn > kUnboundedTolerance * linalg::norm2(v) * bscale) {
      // det(x - s, b) = v.x - v.s is affine in s and not constant: it hits 0
      std::vector<double> y = p;
      for (double& yi : y) yi *= vx / (pn * pn);
      return DistanceResult{0.0, S.combine(y), true, false};
    }
    return DistanceResult{std::abs(vx), zero_like(x), true, false};
  }
  auto neg_dist = [&](std::span<const double> s) { return -anchors(subtract(x, S.combine(s))); };
  const double sc = coeff_scale(S, x);
  const auto best = maximise(neg_dist, S.dim(), sc, budget, seed, streams::kDistance);
  return DistanceResult{std::max(0.0, -best.value), S.combine(best.point), false, true};
}

AnnihilatorResult annihilator_functional(const Element& x1, const Subspace& W,
                                         const BAnchors& anchors, std::size_t budget,
                                         std::uint64_t seed) {
  if (tuple_dependent(x1, anchors)) {
    throw PreconditionError("x1, b_2, ..., b_n are linearly dependent");
  }
  const auto d = distance_to_subspace(x1, W, anchors, budget, seed);
  if (!(d.h > kDegenerateNorm)) {
    throw PreconditionError("h = 0: x1 lies at zero distance from W");
  }
  auto finish = [&](BLinearFunctional T, double norm, bool exact) {
    AnnihilatorResult r{T, d.h, T(x1), norm, exact, 0.0, false, false};
    double scale = 1.0;
    for (const auto& w : W.basis()) {
      r.vanishing_residual = std::max(r.vanishing_residual, std::abs(T(w)));
      scale = std::max(scale, euclidean_length(w));
    }
    r.in_annihilator = r.vanishing_residual <= 1e-9 * scale;
    r.in_unit_annihilator = r.in_annihilator && norm <= 1.0 + (exact ? 1e-12 : 1e-6);
    return r;
  };
  if (anchors.is_determinant()) {
    const double s = BLinearFunctional(anchors, DeterminantForm{1.0})(x1);
    return finish(BLinearFunctional(anchors, DeterminantForm{s < 0.0 ? -1.0 : 1.0}), 1.0, true);
  }
  const Subspace C = W.extended_by(x1);
  std::vector<double> values(W.dim(), 0.0);
  values.push_back(d.h);
  BLinearFunctional T_C(anchors, WeightForm{min_norm_weights(C, values)}, C);
  auto ext = extend_to_space(T_C, C, 1.0, budget, seed);
  return finish(ext.extended, ext.norm_extended_lower, false);
}

DualityReport distance_duality_check(const Element& x, const Subspace& S, const BAnchors& anchors,
                                     std::size_t pool_size, std::uint64_t seed) {
  if (tuple_dependent(x, anchors)) {
    throw PreconditionError("x, b_2, ..., b_n are linearly dependent");
  }
  DualityReport r;
  const auto d = distance_to_subspace(x, S, anchors, 2000, seed);
  r.lhs = d.h;
  r.exact = d.exact;
  if (anchors.is_determinant()) {
    if (d.h > 0.0) {
      // S lies in ker v: the annihilators are exactly c det(., b) with |c| <= 1
      const auto ann = annihilator_functional(x, S, anchors, 2000, seed);
      r.rhs = ann.value_at_x1;
      r.pool_size = 1;
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (std::size_t i = 1; i < pool_size; ++i) {
        auto rng = make_rng(seed, streams::kDualPool, i);
        BLinearFunctional T(anchors, DeterminantForm{u(rng)});
        r.rhs = std::max(r.rhs, T(x));
        ++r.pool_size;
      }
    } else {
      // v is not orthogonal to S: only the zero functional annihilates S
      r.rhs = 0.0;
      r.pool_size = 1;
    }
  } else {
    r.rhs = 0.0;
    r.pool_size = 1;
    if (d.h > kDegenerateNorm) {
      const auto ann = annihilator_functional(x, S, anchors, 2000, seed);
      r.rhs = std::max(r.rhs, ann.value_at_x1 / std::max(1.0, ann.norm));
      ++r.pool_size;
    }
  }
  r.gap = std::abs(r.lhs - r.rhs);
  return r;
}

}  // namespace nnorm
