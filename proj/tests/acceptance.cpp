// Acceptance harness: one PASS/FAIL line per criterion, exit status 0 only
// when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json_io.hpp"
#include "nnorm/hahn_banach.hpp"
#include "nnorm/sampling.hpp"
#include "nnorm/sequences.hpp"
#include "nnorm/ubp.hpp"

using namespace nnorm;

namespace {

constexpr std::uint64_t kSeed = 42;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<Element> random_vectors(std::size_t count, std::size_t dim, Rng& rng) {
  auto space = ElementSpace::vectors(dim);
  std::vector<Element> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(space.random(rng));
  return out;
}

BAnchors random_anchors(std::size_t n, Rng& rng) {
  return BAnchors(NNorm::determinant(n), random_vectors(n - 1, n, rng));
}

double gauss(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

VectorTuple with_anchors(const Element& x, const BAnchors& b) {
  VectorTuple t{x};
  t.insert(t.end(), b.elements().begin(), b.elements().end());
  return t;
}

// --- 1: partial-sum ladder -------------------------------------------------

Verdict ubp_ladder() {
  Verdict v;
  const char* argv[] = {"nnorm", "ubp-demo", "--kmax", "50"};
  std::ostringstream out, err;
  const int code = cli::run_cli(4, argv, out, err);
  v.require(code == 0, "ubp-demo exited with " + std::to_string(code));
  const auto doc = json_io::Json::parse(out.str());
  const auto& rows = doc.at("members");
  v.require(rows.size() == 50, "ubp-demo emitted " + std::to_string(rows.size()) + " rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double got = rows[i].at("norm_lower").get<double>();
    v.require(std::abs(got - static_cast<double>(i + 2)) <= 1e-9,
              "row k=" + std::to_string(i + 1) + " shows " + fmt("%.17g", got));
  }
  // the library ladder also covers k = 0
  const auto r = partial_sum_counterexample(50);
  v.require(r.members.size() == 51, "library ladder size");
  double prev = -1.0;
  for (std::size_t k = 0; k < r.members.size(); ++k) {
    const auto& e = r.members[k].norm;
    const double got = e.exact.value_or(e.lower);
    v.require(std::abs(got - static_cast<double>(k + 1)) <= 1e-9,
              "library k=" + std::to_string(k) + " gives " + fmt("%.17g", got));
    v.require(got > prev, "ladder not strictly increasing at k=" + std::to_string(k));
    prev = got;
  }
  v.require(r.uniform_bound_refuted, "uniform bound not refuted");
  if (v.pass) v.detail = "k = 0..50 give k+1; CLI rows 1..50 match";
  return v;
}

// --- 2: pointwise bound -----------------------------------------------------

Verdict ubp_pointwise() {
  Verdict v;
  std::size_t checked = 0;
  for (const auto& b : {std::vector<double>{1.0}, std::vector<double>{2.0, -0.5, 3.0}}) {
    const auto family = partial_sum_family(0, 50, b);
    std::vector<Element> points;
    for (std::size_t i = 0; i < 20; ++i) {
      auto rng = make_rng(kSeed, streams::kFixtures, 1000 + i);
      std::vector<double> c(i % 11 + 1);
      for (double& a : c) a = std::round(8.0 * gauss(rng)) / 4.0;
      if (i % 5 == 0) std::fill(c.begin(), c.end(), c.back() == 0.0 ? 1.0 : c.back());
      points.emplace_back(Polynomial(c));
    }
    const auto r = pointwise_bounds(family, points);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double bound =
          partial_sum_pointwise_bound(std::get<Polynomial>(points[i]), family.anchors());
      // equality cases (equal coefficients) are compared with rounding slack
      v.require(r.per_point_bounds[i] <= bound * (1.0 + 1e-12),
                "point " + std::to_string(i) + ": " + fmt("%.17g", r.per_point_bounds[i]) +
                    " > " + fmt("%.17g", bound));
      ++checked;
    }
  }
  if (v.pass) v.detail = std::to_string(checked) + " point/anchor cases, 0 violations";
  return v;
}

// --- 3: determinant extension on the worked example -------------------------

Verdict worked_example() {
  Verdict v;
  std::string summary;
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<Element> anchors;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      std::vector<double> row(n, 1.0);
      row[i] = 0.0;
      anchors.emplace_back(Vector(row));
    }
    std::vector<Vector> basis;
    for (std::size_t i = 0; i + 1 < n; ++i) basis.push_back(Vector::unit(n, i));
    const auto W = Subspace::of_vectors(n, basis);
    const BAnchors b(NNorm::determinant(n), anchors);
    const BLinearFunctional T1(b, DeterminantForm{1.0}, W);
    const auto r = extend_determinant_form(T1, W);
    const std::string tag = "n=" + std::to_string(n) + ": ";
    v.require(r.restriction_residual <= 1e-12,
              tag + "residual " + fmt("%.3g", r.restriction_residual));
    v.require(std::abs(r.norm_original - 1.0) <= 1e-12,
              tag + "||T1|| = " + fmt("%.17g", r.norm_original));
    v.require(r.norm_extended_exact && std::abs(*r.norm_extended_exact - 1.0) <= 1e-12,
              tag + "||T|| off");
    v.require(r.preserved, tag + "not preserved");
    summary += tag + "residual " + fmt("%.1e", r.restriction_residual) + "; ";
  }
  if (v.pass) v.detail = summary + "||T1|| = ||T|| = 1";
  return v;
}

// --- 4: axiom suite ---------------------------------------------------------

Verdict axiom_suite() {
  Verdict v;
  const std::vector<double> scalars{-2.0, -1.0, 0.0, 0.5, 3.0};
  const std::vector<NNorm> norms{
      NNorm::determinant(3), NNorm::poly_coeff_product(3),
      NNorm::product_sum(NNorm::determinant(2), NNorm::poly_coeff_product(2)),
      NNorm::product_max(NNorm::determinant(3), NNorm::determinant(3))};
  std::string summary;
  for (const auto& norm : norms) {
    const auto samples = random_tuples(norm, 10000, kSeed);
    const auto r = check_axioms(norm, samples, scalars);
    v.require(r.ok(), to_string(norm.kind()) + ": " + std::to_string(r.violations.size()) +
                          " violations, first " +
                          (r.ok() ? "" : to_string(r.violations.front().axiom) + " " +
                                             r.violations.front().detail));
    summary += to_string(norm.kind()) + " " + std::to_string(r.samples_checked) + " ok; ";
  }
  if (v.pass) v.detail = summary;
  return v;
}

// --- 5: exact vs sampled norm ------------------------------------------------

Verdict norm_oracles() {
  Verdict v;
  double worst = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    auto rng = make_rng(kSeed, streams::kFixtures, 2000 + i);
    const std::size_t n = 2 + i % 2;
    const auto b = random_anchors(n, rng);
    const double c = gauss(rng);
    // alternate the two bounded representations: c det and c v as weights
    BLinearFunctional T = i % 4 < 2 ? BLinearFunctional(b, DeterminantForm{c}) : [&] {
      std::vector<double> w = b.cofactor();
      for (double& x : w) x *= c;
      return BLinearFunctional(b, WeightForm{w});
    }();
    const auto exact = exact_norm_determinant(T);
    const auto sampled = estimate_norm_sampling(T, 100000, derive_seed(kSeed, 5, i));
    const double rel = std::abs(sampled.lower - *exact.exact) / *exact.exact;
    worst = std::max(worst, rel);
    v.require(rel <= 1e-3, "functional " + std::to_string(i) + ": relative gap " + fmt("%.3g", rel));
  }
  double smallest_ratio = INFINITY;
  for (std::size_t i = 0; i < 10; ++i) {
    auto rng = make_rng(kSeed, streams::kFixtures, 3000 + i);
    const std::size_t n = 2 + i % 2;
    const auto b = random_anchors(n, rng);
    std::vector<double> w(n);
    for (double& x : w) x = gauss(rng);
    const BLinearFunctional T(b, WeightForm{w});
    const auto exact = exact_norm_determinant(T);
    v.require(exact.unbounded, "w " + std::to_string(i) + " not flagged unbounded by the certificate");
    const auto sampled = estimate_norm_sampling(T, 100000, derive_seed(kSeed, 5, 100 + i));
    smallest_ratio = std::min(smallest_ratio, sampled.lower);
    v.require(sampled.lower > 1e6, "w " + std::to_string(i) + ": sampled ratio only " +
                                       fmt("%.3g", sampled.lower));
  }
  if (v.pass) {
    v.detail = "max relative gap " + fmt("%.2e", worst) + " on 50 bounded; smallest ratio " +
               fmt("%.2e", smallest_ratio) + " on 10 unbounded";
  }
  return v;
}

// --- 6: one-step extension soundness ---------------------------------------

Verdict one_step_soundness() {
  Verdict v;
  double worst_excess = -INFINITY, worst_residual = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    auto rng = make_rng(kSeed, streams::kFixtures, 4000 + i);
    const std::size_t n = 2 + i % 2;
    const auto b = random_anchors(n, rng);
    const std::size_t dim_w = n == 2 ? 1 : 1 + (i / 2) % 2;
    const Subspace W(ElementSpace::vectors(n), random_vectors(dim_w, n, rng));
    // bounded on W: c v plus a part orthogonal to W
    std::vector<double> w = b.cofactor();
    const double c = gauss(rng);
    for (double& x : w) x *= c;
    std::vector<double> u(n);
    for (double& x : u) x = gauss(rng);
    {
      // project u off W through the normal equations
      const auto ls = linalg::least_squares(W.basis_coords(), u);
      const auto proj = linalg::combine(W.basis_coords(), ls.solution, n);
      for (std::size_t j = 0; j < n; ++j) w[j] += u[j] - proj[j];
    }
    const BLinearFunctional T_W(b, WeightForm{w}, W);
    const auto est = exact_norm_determinant(T_W);
    const std::string tag = "instance " + std::to_string(i) + ": ";
    v.require(!est.unbounded, tag + "T_W unexpectedly unbounded");
    if (est.unbounded) continue;
    const double N = *est.exact;
    const auto x0 = random_vectors(1, n, rng).front();
    const auto ext = validated_extension(T_W, W, x0, N, 2000, derive_seed(kSeed, 6, i));
    const auto& T0 = ext.result.extended;
    const auto& C = *T0.carrier();
    // fresh carrier samples, independent of the extension's own validation
    for (std::size_t s = 0; s < 1000; ++s) {
      auto srng = make_rng(kSeed, streams::kExtensionCheck, 100000 * (i + 1) + s);
      std::vector<double> coef(C.dim());
      for (double& x : coef) x = gauss(srng) * std::exp(3.0 * (2.0 * std::uniform_real_distribution<double>()(srng) - 1.0));
      const Element y = C.combine(coef);
      const double excess = std::abs(T0(y)) - N * b(y);
      worst_excess = std::max(worst_excess, excess);
      v.require(excess <= 1e-6, tag + "bound exceeded by " + fmt("%.3g", excess));
      const std::vector<double> wc(coef.begin(), coef.begin() + static_cast<long>(W.dim()));
      const Element x = W.combine(wc);
      const double res = std::abs(T0(x) - T_W(x));
      worst_residual = std::max(worst_residual, res);
      v.require(res <= 1e-9, tag + "restriction residual " + fmt("%.3g", res));
    }
  }
  if (v.pass) {
    v.detail = "max bound excess " + fmt("%.2e", worst_excess) + ", max residual on W " +
               fmt("%.2e", worst_residual) + " over 20 x 1000 samples";
  }
  return v;
}

// --- 7: dual identities -----------------------------------------------------

Verdict dual_identities() {
  Verdict v;
  double worst_rel = 0.0, worst_gap = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    auto rng = make_rng(kSeed, streams::kFixtures, 5000 + i);
    const std::size_t n = 2 + i % 2;
    const auto b = random_anchors(n, rng);
    const auto x = random_vectors(1, n, rng).front();
    std::vector<BLinearFunctional> pool{norming_functional(x, b).functional};
    for (int j = 0; j < 4; ++j) pool.emplace_back(b, DeterminantForm{gauss(rng)});
    const double via_dual = norm_via_dual_sup(x, pool).value;
    const double direct = eval_nnorm(NNorm::determinant(n), with_anchors(x, b));
    const double rel = std::abs(via_dual - direct) / std::max(direct, 1e-300);
    worst_rel = std::max(worst_rel, rel);
    v.require(rel <= 1e-12, "dual sup instance " + std::to_string(i) + ": " + fmt("%.3g", rel));
  }
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < 60; ++i) {
    auto rng = make_rng(kSeed, streams::kFixtures, 6000 + i);
    const std::size_t n = 2 + i % 2;
    const auto b = random_anchors(n, rng);
    std::vector<Element> basis;
    if (i % 3 == 0) {
      basis.assign(b.elements().begin(), b.elements().begin() + 1);  // inside ker v
    } else if (i % 3 == 1) {
      basis = random_vectors(1, n, rng);
    }
    const Subspace S(ElementSpace::vectors(n), basis);
    const auto x = random_vectors(1, n, rng).front();
    const auto r = distance_duality_check(x, S, b, 8, derive_seed(kSeed, 7, i));
    v.require(r.exact, "duality instance " + std::to_string(i) + " not exact");
    worst_gap = std::max(worst_gap, r.gap);
    if (r.lhs > 0.0) ++nonzero;
    v.require(r.gap <= 1e-9, "duality instance " + std::to_string(i) + ": gap " + fmt("%.3g", r.gap));
  }
  if (v.pass) {
    v.detail = "dual sup max relative error " + fmt("%.2e", worst_rel) +
               " on 100; duality max gap " + fmt("%.2e", worst_gap) + " on 60 (" +
               std::to_string(nonzero) + " with h > 0)";
  }
  return v;
}

// --- 8: property suites ------------------------------------------------------

FunctionalFamily scaled_family(const BAnchors& b, std::size_t count,
                               const std::function<double(std::size_t)>& c) {
  std::vector<BLinearFunctional> m;
  for (std::size_t k = 1; k <= count; ++k) m.emplace_back(b, DeterminantForm{c(k)});
  return FunctionalFamily(std::move(m));
}

Verdict property_suites() {
  Verdict v;
  std::size_t cases = 0;
  // Lipschitz with the exact norm
  for (std::size_t i = 0; i < 20; ++i) {
    auto rng = make_rng(kSeed, streams::kFixtures, 7000 + i);
    const std::size_t n = 2 + i % 2;
    const auto b = random_anchors(n, rng);
    const BLinearFunctional T(b, DeterminantForm{gauss(rng)});
    std::vector<std::pair<Element, Element>> pairs;
    for (int p = 0; p < 200; ++p) {
      auto xs = random_vectors(2, n, rng);
      pairs.emplace_back(xs[0], xs[1]);
    }
    const auto r = check_lipschitz(T, *exact_norm_determinant(T).exact, pairs);
    v.require(r.ok(), "Lipschitz functional " + std::to_string(i));
    ++cases;
  }
  // sequential and epsilon-delta continuity agree
  for (std::size_t i = 0; i < 10; ++i) {
    auto rng = make_rng(kSeed, streams::kFixtures, 8000 + i);
    const std::size_t n = 2 + i % 2;
    const auto b = random_anchors(n, rng);
    const auto x = random_vectors(1, n, rng).front();
    const bool bounded = i % 2 == 0;
    std::vector<double> w(n);
    for (double& c : w) c = gauss(rng);
    const BLinearFunctional T = bounded ? BLinearFunctional(b, DeterminantForm{gauss(rng)})
                                        : BLinearFunctional(b, WeightForm{w});
    SequenceSample seq;
    // bounded: shrinking generic perturbation; unbounded: growing steps along
    // an anchor, which the n-norm cannot see
    const auto d = random_vectors(1, n, rng).front();
    for (int k = 1; k <= 60; ++k) {
      seq.terms.push_back(bounded ? axpy(x, std::ldexp(1.0, -k), d)
                                  : axpy(x, static_cast<double>(k), b.elements()[0]));
    }
    const auto seqr = check_b_sequential_continuity(T, seq, x, 1e-6);
    const std::vector<double> eps{0.5, 0.1};
    const auto ed = check_epsilon_delta_continuity(T, x, eps, 200, derive_seed(kSeed, 8, i));
    v.require(seqr.property.ok() == ed.ok(),
              "continuity notions disagree on functional " + std::to_string(i));
    v.require(seqr.property.ok() == bounded,
              "continuity verdict wrong for functional " + std::to_string(i));
    ++cases;
  }
  // uniform bound implies pointwise bound
  for (std::size_t i = 0; i < 10; ++i) {
    auto rng = make_rng(kSeed, streams::kFixtures, 9000 + i);
    const auto b = random_anchors(3, rng);
    std::vector<BLinearFunctional> members;
    for (int k = 0; k < 20; ++k) {
      members.emplace_back(b, DeterminantForm{2.0 * std::sin(static_cast<double>(k) + gauss(rng))});
    }
    const auto points = random_vectors(20, 3, rng);
    const auto r = pointwise_bounds(FunctionalFamily(members), points);
    for (std::size_t p = 0; p < points.size(); ++p) {
      v.require(r.per_point_bounds[p] <= 2.0 * b(points[p]) + 1e-9,
                "pointwise bound exceeded, family " + std::to_string(i));
    }
    ++cases;
  }
  // net-propagated uniform convergence bounds probes of the net's neighbourhood
  for (std::size_t i = 0; i < 5; ++i) {
    auto rng = make_rng(kSeed, streams::kFixtures, 10000 + i);
    const auto b = random_anchors(2, rng);
    const BLinearFunctional limit(b, DeterminantForm{1.0});
    const auto family = scaled_family(b, 20, [](std::size_t k) { return 1.0 + 1.0 / k; });
    const auto centers = random_vectors(5, 2, rng);
    const EpsNet net{centers, 0.1};
    const auto r = uniform_convergence_on_net(family, limit, net, 3.0, 2000, kSeed);
    for (int p = 0; p < 200; ++p) {
      const auto dir = random_vectors(1, 2, rng).front();
      const double m = b(dir);
      if (m == 0.0) continue;
      const double t = std::uniform_real_distribution<double>()(rng);
      const Element s = axpy(centers[p % centers.size()], net.radius * t / m, dir);
      for (std::size_t k = 0; k < family.size(); ++k) {
        v.require(std::abs(family.members()[k](s) - limit(s)) <= r.propagated[k] + 1e-12,
                  "net bound exceeded, net " + std::to_string(i));
      }
    }
    ++cases;
  }
  // pointwise limits of Cauchy families are bounded linear functionals
  for (std::size_t i = 0; i < 5; ++i) {
    auto rng = make_rng(kSeed, streams::kFixtures, 11000 + i);
    const std::size_t n = 2 + i % 2;
    const auto b = random_anchors(n, rng);
    const double base = gauss(rng);
    const auto family = scaled_family(
        b, 60, [&](std::size_t k) { return base + std::ldexp(1.0, -static_cast<int>(k)); });
    const auto basis = ElementSpace::vectors(n).basis();
    const auto r = pointwise_limit_functional(family, basis, kFamilyCauchyTolerance, 1000,
                                              derive_seed(kSeed, 9, i));
    v.require(r.linearity.ok(), "limit functional " + std::to_string(i) + " not linear");
    v.require(r.bound_check.ok(), "limit functional " + std::to_string(i) + " exceeds its M-bound");
    ++cases;
  }
  // weak* conditions agree with direct convergence on the fixtures
  {
    const BAnchors b(NNorm::determinant(2), {Vector({0.0, 1.0})});
    const BLinearFunctional cand(b, DeterminantForm{1.0});
    const auto basis = ElementSpace::vectors(2).basis();
    const std::vector<Element> pts{Vector({3.0, 1.0}), Vector({-0.5, 2.0}), Vector({1.0, -4.0})};
    const std::vector<std::pair<std::string, std::function<double(std::size_t)>>> fixtures{
        {"geometric", [](std::size_t k) { return 1.0 + std::ldexp(1.0, -static_cast<int>(k)); }},
        {"constant", [](std::size_t) { return 1.0; }},
        {"alternating", [](std::size_t k) { return k % 2 ? -1.0 : 1.0; }},
        {"linear", [](std::size_t k) { return static_cast<double>(k); }}};
    for (const auto& [name, c] : fixtures) {
      const auto r = weakstar_check(scaled_family(b, 60, c), cand, basis, pts);
      v.require(r.agrees, "weak* fixture " + name + " disagrees");
      ++cases;
    }
  }
  if (v.pass) v.detail = std::to_string(cases) + " seeded cases across six suites, 0 violations";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
    double time_limit;
  };
  const std::vector<Criterion> criteria{
      {1, "partial-sum lower bounds k+1", ubp_ladder, 1.0},
      {2, "pointwise bound of the partial sums", ubp_pointwise, 0.0},
      {3, "determinant extension, worked example n=2,3,4", worked_example, 0.0},
      {4, "n-norm axioms on 10^4 tuples per kind", axiom_suite, 10.0},
      {5, "exact vs sampled functional norms", norm_oracles, 0.0},
      {6, "one-step extension soundness", one_step_soundness, 0.0},
      {7, "dual-sup identity and distance duality", dual_identities, 0.0},
      {8, "continuity / boundedness / weak* property suites", property_suites, 30.0},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      v.pass = false;
      v.detail += " [over the " + fmt("%.0f", c.time_limit) + " s limit]";
    }
    std::printf("criterion %d: %s  %s -- %s (%.3f s)\n", c.id, v.pass ? "PASS" : "FAIL", c.name,
                v.detail.c_str(), secs);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
