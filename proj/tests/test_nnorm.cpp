#include <gtest/gtest.h>

#include <cmath>

#include "nnorm/error.hpp"
#include "nnorm/nnorm.hpp"
#include "nnorm/seeding.hpp"
#include "oracles.hpp"

using namespace nnorm;

namespace {

VectorTuple random_vectors(std::size_t n, std::size_t dim, Rng& rng) {
  std::normal_distribution<double> g;
  VectorTuple t;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> c(dim);
    for (double& x : c) x = g(rng);
    t.emplace_back(Vector(std::move(c)));
  }
  return t;
}

std::vector<std::vector<double>> rows_of(const VectorTuple& t) {
  std::vector<std::vector<double>> m;
  for (const auto& e : t) {
    auto c = std::get<Vector>(e).coords();
    m.emplace_back(c.begin(), c.end());
  }
  return m;
}

const std::vector<double> kScalars{-2.0, -1.0, 0.0, 0.5, 3.0};

}  // namespace

TEST(NNorm, DeterminantAgreesWithLeibniz) {
  for (std::size_t n = 2; n <= 4; ++n) {
    auto norm = NNorm::determinant(n);
    for (std::size_t trial = 0; trial < 50; ++trial) {
      auto rng = make_rng(3, n, trial);
      auto t = random_vectors(n, n, rng);
      EXPECT_NEAR(eval_nnorm(norm, t), std::abs(oracle::leibniz_det(rows_of(t))), 1e-12);
    }
  }
}

TEST(NNorm, DeterminantOfStandardBasisIsOne) {
  auto norm = NNorm::determinant(3);
  VectorTuple t{Vector::unit(3, 0), Vector::unit(3, 1), Vector::unit(3, 2)};
  EXPECT_DOUBLE_EQ(eval_nnorm(norm, t), 1.0);
}

TEST(NNorm, ShapeErrorsNameOffendingIndex) {
  auto norm = NNorm::determinant(2);
  VectorTuple wrong_dim{Vector({1.0, 0.0, 0.0}), Vector({0.0, 1.0, 0.0})};
  EXPECT_THROW(eval_nnorm(norm, wrong_dim), ShapeError);
  VectorTuple wrong_len{Vector({1.0, 0.0})};
  EXPECT_THROW(eval_nnorm(norm, wrong_len), ShapeError);
  VectorTuple mixed{Vector({1.0, 0.0}), Polynomial({1.0})};
  try {
    eval_nnorm(norm, mixed);
    FAIL();
  } catch (const ShapeError& e) {
    ASSERT_TRUE(e.index().has_value());
    EXPECT_EQ(*e.index(), 1u);
  }
  EXPECT_THROW(NNorm::determinant(1), ShapeError);
}

TEST(NNorm, CoefficientProductHandValues) {
  auto norm = NNorm::poly_coeff_product(2);
  // 1 + 2t and 3t^2 are independent: max coefficients 2 and 3
  VectorTuple t{Polynomial({1.0, 2.0}), Polynomial({0.0, 0.0, 3.0})};
  EXPECT_DOUBLE_EQ(eval_nnorm(norm, t), 6.0);
  VectorTuple dep{Polynomial({1.0, 2.0}), Polynomial({-2.0, -4.0})};
  EXPECT_EQ(eval_nnorm(norm, dep), 0.0);
  VectorTuple zero{Polynomial({0.0}), Polynomial({1.0})};
  EXPECT_EQ(eval_nnorm(norm, zero), 0.0);
}

TEST(NNorm, DependenceIsJointForProductPairs) {
  // each side is dependent on its own, the pairs are not
  VectorTuple t{ProductPair{Vector({1.0, 0.0}), Vector({1.0, 0.0})},
                ProductPair{Vector({2.0, 0.0}), Vector({3.0, 0.0})}};
  EXPECT_FALSE(is_linearly_dependent(t).dependent);
  auto norm = NNorm::product_sum(NNorm::determinant(2), NNorm::determinant(2));
  EXPECT_EQ(eval_nnorm(norm, t), 0.0);
  auto report = check_axioms(norm, std::vector<VectorTuple>{t}, kScalars);
  EXPECT_GE(report.count(Axiom::N1), 1u);
}

TEST(NNorm, ProductNormsCombineComponents) {
  auto d = NNorm::determinant(2);
  VectorTuple t{ProductPair{Vector({2.0, 0.0}), Vector({1.0, 1.0})},
                ProductPair{Vector({0.0, 3.0}), Vector({0.0, 1.0})}};
  EXPECT_DOUBLE_EQ(eval_nnorm(NNorm::product_sum(d, d), t), 7.0);
  EXPECT_DOUBLE_EQ(eval_nnorm(NNorm::product_max(d, d), t), 6.0);
  EXPECT_THROW(NNorm::product_sum(NNorm::determinant(2), NNorm::determinant(3)), ShapeError);
}

TEST(NNorm, AxiomsHoldForDeterminantOnRandomTuples) {
  for (std::size_t n = 2; n <= 4; ++n) {
    std::vector<VectorTuple> samples;
    for (std::size_t s = 0; s < 200; ++s) {
      auto rng = make_rng(5, n, s);
      samples.push_back(random_vectors(n, n, rng));
    }
    auto report = check_axioms(NNorm::determinant(n), samples, kScalars);
    EXPECT_TRUE(report.ok()) << "n=" << n << " first: "
                             << (report.ok() ? "" : report.violations[0].detail);
    EXPECT_EQ(report.samples_checked, samples.size());
  }
}

TEST(NNorm, AxiomCheckerFlagsSignedDeterminant) {
  std::vector<VectorTuple> samples;
  for (std::size_t s = 0; s < 20; ++s) {
    auto rng = make_rng(6, 0, s);
    samples.push_back(random_vectors(2, 2, rng));
  }
  auto report = check_axioms(NNorm::signed_determinant(2), samples, kScalars);
  EXPECT_FALSE(report.ok());
  EXPECT_GT(report.count(Axiom::N2), 0u);
  EXPECT_GT(report.count(Axiom::N3), 0u);
}

TEST(NNorm, CoefficientProductTriangleFailsAcrossDependentBranch) {
  // x = 5 is dependent with the anchor 1, y = t is not; x + y = 5 + t is not.
  // ||x,1|| = 0, ||y,1|| = 1, ||x+y,1|| = 5.
  auto norm = NNorm::poly_coeff_product(2);
  std::vector<VectorTuple> samples{{Polynomial({5.0}), Polynomial({1.0})},
                                   {Polynomial({0.0, 1.0}), Polynomial({1.0})}};
  auto report = check_axioms(norm, samples, kScalars);
  ASSERT_EQ(report.count(Axiom::N4), 1u);
  EXPECT_DOUBLE_EQ(report.violations.back().observed, 5.0);
  EXPECT_DOUBLE_EQ(report.violations.back().expected, 1.0);
}

TEST(NNorm, AxiomCheckRejectsEmptyAndMalformedSamples) {
  auto norm = NNorm::determinant(2);
  EXPECT_THROW(check_axioms(norm, std::vector<VectorTuple>{}, kScalars), PreconditionError);
  std::vector<VectorTuple> bad{{Vector({1.0, 0.0}), Vector({0.0, 1.0})},
                               {Vector({1.0, 0.0})}};
  try {
    check_axioms(norm, bad, kScalars);
    FAIL();
  } catch (const ShapeError& e) {
    EXPECT_EQ(e.index().value_or(99), 1u);
  }
}

TEST(NNorm, BallMembership) {
  auto norm = NNorm::determinant(2);
  std::vector<Element> anchors{Vector({0.0, 1.0})};
  Element c = Vector({0.0, 0.0});
  EXPECT_TRUE(ball_contains(norm, anchors, c, 1.0, false, Vector({1.0, 5.0})));
  EXPECT_FALSE(ball_contains(norm, anchors, c, 1.0, true, Vector({1.0, 5.0})));
  EXPECT_TRUE(ball_contains(norm, anchors, c, 1.0, true, Vector({0.5, -7.0})));
  EXPECT_THROW(ball_contains(norm, anchors, c, 0.0, true, c), PreconditionError);
}

TEST(NNorm, AnchoredNormAndScalarAnchors) {
  AnchoredNorm a(NNorm::determinant(2), {Vector({0.0, 1.0})});
  EXPECT_DOUBLE_EQ(a(Vector({3.0, 9.0})), 3.0);
  auto s = AnchoredNorm::scalar_anchors({2.0, -1.5});
  EXPECT_EQ(s.norm().arity(), 3u);
  EXPECT_DOUBLE_EQ(s(Polynomial({1.0, -4.0})), 4.0 * 3.0);
  EXPECT_THROW(AnchoredNorm(NNorm::determinant(3), {Vector({0.0, 1.0, 0.0})}), ShapeError);
}
