#include "nnorm/ubp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnorm/error.hpp"
#include "nnorm/linalg.hpp"
#include "nnorm/seeding.hpp"

namespace nnorm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t quarter_start(std::size_t count) {
  std::size_t len = std::max<std::size_t>(2, (count + 3) / 4);
  len = std::min(len, count);
  return count - len;
}

std::vector<MemberBound> member_norms(const FunctionalFamily& family, std::size_t budget,
                                      std::uint64_t seed) {
  std::vector<MemberBound> out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    out.push_back({family.labels()[i],
                   functional_norm(family.members()[i], budget,
                                   derive_seed(seed, streams::kFamilyMember, i))});
  }
  return out;
}

double norm_value(const NormEstimate& e) {
  if (e.unbounded) return kInf;
  return e.exact.value_or(e.lower);
}

bool bounded_evidence(const std::vector<MemberBound>& members) {
  std::vector<double> values;
  for (const auto& m : members) {
    if (m.norm.unbounded) return false;
    values.push_back(norm_value(m.norm));
  }
  return !growth_without_saturation(values);
}

std::vector<double> values_at(const FunctionalFamily& family, const Element& x) {
  std::vector<double> v;
  v.reserve(family.size());
  for (const auto& T : family.members()) v.push_back(T(x));
  return v;
}

}  // namespace

FunctionalFamily::FunctionalFamily(std::vector<BLinearFunctional> members,
                                   std::vector<std::string> labels)
    : members_(std::move(members)), labels_(std::move(labels)) {
  if (members_.empty()) throw PreconditionError("functional family is empty");
  for (std::size_t i = 1; i < members_.size(); ++i) {
    if (!(members_[i].anchors() == members_.front().anchors())) {
      throw PreconditionError("family member " + std::to_string(i) +
                              " uses different anchors than member 0");
    }
  }
  if (!labels_.empty() && labels_.size() != members_.size()) {
    throw ShapeError("label count differs from member count");
  }
  for (std::size_t i = labels_.size(); i < members_.size(); ++i) {
    labels_.push_back("T_" + std::to_string(i));
  }
}

BoundReport pointwise_bounds(const FunctionalFamily& family, std::span<const Element> points) {
  BoundReport r;
  for (const auto& x : points) {
    double m = 0.0;
    for (const auto& T : family.members()) m = std::max(m, std::abs(T(x)));
    r.per_point_bounds.push_back(m);
  }
  r.pointwise_bounded_evidence = std::all_of(r.per_point_bounds.begin(), r.per_point_bounds.end(),
                                             [](double b) { return std::isfinite(b); });
  return r;
}

bool growth_without_saturation(std::span<const double> values) {
  if (values.size() < 2) return false;
  const std::size_t start = values.size() - std::max<std::size_t>(2, values.size() / 2);
  for (std::size_t i = start + 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) return false;
  }
  const double first_step = values[start + 1] - values[start];
  const double last_step = values.back() - values[values.size() - 2];
  return last_step >= 0.5 * first_step;
}

BoundReport uniform_bound_refutation(const FunctionalFamily& family,
                                     const std::optional<WitnessBuilder>& witness,
                                     std::size_t budget, std::uint64_t seed) {
  BoundReport r;
  if (witness) {
    for (std::size_t i = 0; i < family.size(); ++i) {
      const auto& T = family.members()[i];
      const Element w = (*witness)(i);
      const double m = T.anchors()(w);
      NormEstimate e;
      if (m >= kDegenerateNorm) {
        e.lower = std::abs(T(w)) / m;
        e.witness = scale(1.0 / m, w);
      } else if (T(w) != 0.0) {
        e.lower = kInf;
        e.unbounded = true;
        e.witness = w;
      }
      e.evaluations = 1;
      r.members.push_back({family.labels()[i], std::move(e)});
    }
  } else {
    r.members = member_norms(family, budget, seed);
  }
  std::vector<double> lowers;
  bool any_unbounded = false;
  for (const auto& m : r.members) {
    lowers.push_back(m.norm.lower);
    any_unbounded = any_unbounded || m.norm.unbounded;
    r.uniform_lower = std::max(r.uniform_lower, m.norm.lower);
  }
  r.uniform_bound_refuted = any_unbounded || growth_without_saturation(lowers);
  return r;
}

FunctionalFamily partial_sum_family(std::size_t k_first, std::size_t k_last,
                                    std::vector<double> b_scalars) {
  if (k_last < k_first) throw PreconditionError("empty partial-sum range");
  const auto anchors = BAnchors::scalars(std::move(b_scalars));
  std::vector<BLinearFunctional> members;
  std::vector<std::string> labels;
  for (std::size_t k = k_first; k <= k_last; ++k) {
    members.emplace_back(anchors, PartialSumForm{k});
    labels.push_back("T_" + std::to_string(k));
  }
  return FunctionalFamily(std::move(members), std::move(labels));
}

double partial_sum_pointwise_bound(const Polynomial& x, const BAnchors& anchors) {
  const double nx = static_cast<double>(x.degree());
  return (nx + 1.0) * x.max_abs_coeff() * std::abs(anchors.constant_product());
}

BoundReport partial_sum_counterexample(std::size_t kmax, std::vector<double> b_scalars) {
  auto family = partial_sum_family(0, kmax, std::move(b_scalars));
  WitnessBuilder w = [](std::size_t k) -> Element { return Polynomial::ones(k); };
  return uniform_bound_refutation(family, w, 1, kDefaultSeed);
}

NetConvergenceReport uniform_convergence_on_net(const FunctionalFamily& family,
                                                const BLinearFunctional& limit,
                                                const EpsNet& net, double member_norm_cap,
                                                std::size_t budget, std::uint64_t seed) {
  if (net.centers.empty()) throw PreconditionError("epsilon-net has no centers");
  if (!(net.radius > 0.0)) throw PreconditionError("epsilon-net radius must be positive");
  if (!(limit.anchors() == family.anchors())) {
    throw PreconditionError("limit functional uses different anchors than the family");
  }
  NetConvergenceReport r;
  const auto norms = member_norms(family, budget, seed);
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const double v = norm_value(norms[i].norm);
    if (!(v <= member_norm_cap)) {
      throw PreconditionError("member " + norms[i].label + " has norm " + std::to_string(v) +
                              " above the cap " + std::to_string(member_norm_cap));
    }
    r.member_norms.push_back(v);
  }
  const auto ln = functional_norm(limit, budget, derive_seed(seed, streams::kFamilyMember,
                                                             family.size()));
  if (ln.unbounded) throw PreconditionError("limit functional is unbounded");
  r.limit_norm = norm_value(ln);

  std::vector<double> at_limit;
  for (const auto& c : net.centers) at_limit.push_back(limit(c));
  const double inflate = (member_norm_cap + 1.0 + r.limit_norm) * net.radius;
  for (const auto& T : family.members()) {
    double s = 0.0;
    for (std::size_t j = 0; j < net.centers.size(); ++j) {
      s = std::max(s, std::abs(T(net.centers[j]) - at_limit[j]));
    }
    r.sup_on_net.push_back(s);
    r.propagated.push_back(s + inflate);
  }
  const auto& s = r.sup_on_net;
  const std::size_t start = s.size() - std::max<std::size_t>(1, s.size() / 2);
  bool nonincreasing = true;
  for (std::size_t i = start + 1; i < s.size(); ++i) nonincreasing &= s[i] <= s[i - 1];
  const double peak = *std::max_element(s.begin(), s.end());
  r.converged = nonincreasing && (s.back() == 0.0 || s.back() <= 0.5 * peak);
  return r;
}

bool cauchy_tail(std::span<const double> values, double tol) {
  if (values.size() < 2) return true;
  const auto tail = values.subspan(quarter_start(values.size()));
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  return *hi - *lo <= tol;
}

CauchyFamilyReport cauchy_family_bound(const FunctionalFamily& family,
                                       std::span<const Element> points, double tol,
                                       std::size_t budget, std::uint64_t seed) {
  CauchyFamilyReport r;
  r.all_cauchy = true;
  for (const auto& x : points) {
    const bool c = cauchy_tail(values_at(family, x), tol);
    r.point_cauchy.push_back(c);
    r.all_cauchy = r.all_cauchy && c;
  }
  r.members = member_norms(family, budget, seed);
  for (const auto& m : r.members) r.uniform_lower = std::max(r.uniform_lower, norm_value(m.norm));
  r.norms_bounded_evidence = bounded_evidence(r.members);
  return r;
}

LimitFunctionalResult pointwise_limit_functional(const FunctionalFamily& family,
                                                 std::span<const Element> basis, double tol,
                                                 std::size_t checks, std::uint64_t seed) {
  if (basis.empty()) throw PreconditionError("limit functional needs a basis");
  std::vector<double> limits;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto vals = values_at(family, basis[i]);
    if (!cauchy_tail(vals, tol)) {
      throw PreconditionError("values at basis element " + std::to_string(i) +
                              " do not converge at sample scale");
    }
    limits.push_back(vals.back());
  }
  // weights w with w . e_i = limit_i
  const auto rows = embed_rows(basis);
  const std::size_t width = rows.front().size();
  if (width != basis.size()) {
    throw PreconditionError("basis has " + std::to_string(basis.size()) +
                            " elements in a space of dimension " + std::to_string(width));
  }
  std::vector<linalg::Row> columns(width, linalg::Row(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) columns[j][i] = rows[i][j];
  }
  const auto ls = linalg::least_squares(columns, limits);
  BLinearFunctional L(family.anchors(), WeightForm{ls.solution});

  double m = 0.0;
  for (const auto& mb : member_norms(family, 20000, seed)) {
    m = std::max(m, norm_value(mb.norm));
  }

  LimitFunctionalResult out{L, limits, m, {}, {}};
  const FunctionalChart chart(L, SamplingOptions{}.max_degree);
  std::vector<std::pair<Element, Element>> pairs;
  for (std::size_t i = 0; i < checks; ++i) {
    auto rng = make_rng(seed, streams::kLimitCheck, i);
    const Element x = chart.element(chart.random_coords(rng));
    const Element y = chart.element(chart.random_coords(rng));
    const double lhs = std::abs(L(x));
    const double bound = m * L.anchors()(x);
    ++out.bound_check.checked;
    if (lhs > bound + 1e-9 * (1.0 + bound)) {
      out.bound_check.violations.push_back({i, "limit exceeds the M bound", lhs, bound});
    }
    pairs.emplace_back(x, y);
  }
  if (!pairs.empty()) {
    const std::vector<double> scalars{-2.0, -1.0, 0.0, 0.5, 3.0};
    out.linearity = check_b_linearity(L, pairs, scalars);
  }
  return out;
}

WeakStarReport weakstar_check(const FunctionalFamily& family,
                              const BLinearFunctional& candidate_limit,
                              std::span<const Element> total_set, std::span<const Element> points,
                              double tol, std::size_t budget, std::uint64_t seed) {
  if (total_set.empty()) throw PreconditionError("total set is empty");
  const auto rows = embed_rows(total_set);
  const std::size_t width = rows.front().size();
  if (linalg::rank(rows, 1e-9).rank < width) {
    throw PreconditionError("total set does not span the space");
  }
  WeakStarReport r;
  r.members = member_norms(family, budget, seed);
  r.norms_bounded = bounded_evidence(r.members);
  r.cauchy_on_total = true;
  for (const auto& x : total_set) {
    r.cauchy_on_total = r.cauchy_on_total && cauchy_tail(values_at(family, x), tol);
  }
  r.cauchy_on_points = true;
  for (const auto& x : points) {
    const auto vals = values_at(family, x);
    r.cauchy_on_points = r.cauchy_on_points && cauchy_tail(vals, tol);
    const double target = candidate_limit(x);
    for (std::size_t k = quarter_start(vals.size()); k < vals.size(); ++k) {
      r.max_candidate_gap = std::max(r.max_candidate_gap, std::abs(vals[k] - target));
    }
  }
  r.converges_to_candidate = r.max_candidate_gap <= tol;
  r.conditions_hold = r.norms_bounded && r.cauchy_on_total;
  r.agrees = r.conditions_hold == r.converges_to_candidate;
  return r;
}

}  // namespace nnorm
