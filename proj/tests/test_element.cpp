#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "nnorm/element.hpp"
#include "nnorm/error.hpp"
#include "nnorm/linalg.hpp"
#include "nnorm/sampling.hpp"
#include "nnorm/seeding.hpp"
#include "oracles.hpp"

using namespace nnorm;

TEST(Element, VectorRejectsEmptyAndNonFinite) {
  EXPECT_THROW(Vector(std::vector<double>{}), ShapeError);
  EXPECT_THROW(Vector({1.0, std::numeric_limits<double>::quiet_NaN()}), NonFiniteError);
  EXPECT_THROW(Vector({std::numeric_limits<double>::infinity()}), NonFiniteError);
}

TEST(Element, PolynomialDegreeTrimsTinyLeadingCoefficients) {
  EXPECT_EQ(Polynomial({1.0, 2.0, 0.0, 1e-13}).degree(), 1u);
  EXPECT_EQ(Polynomial(std::vector<double>{}).degree(), 0u);
  EXPECT_TRUE(Polynomial({0.0, 0.0}).is_zero());
  EXPECT_EQ(Polynomial::ones(3).coeffs().size(), 4u);
  EXPECT_DOUBLE_EQ(Polynomial({-4.0, 2.0}).max_abs_coeff(), 4.0);
}

TEST(Element, PolynomialAdditionPads) {
  Element s = add(Polynomial({1.0}), Polynomial({0.0, 0.0, 3.0}));
  EXPECT_EQ(std::get<Polynomial>(s), Polynomial({1.0, 0.0, 3.0}));
}

TEST(Element, MismatchedKindsAndDimensionsAreShapeErrors) {
  EXPECT_THROW(add(Vector({1.0, 2.0}), Vector({1.0})), ShapeError);
  EXPECT_THROW(add(Vector({1.0}), Polynomial({1.0})), ShapeError);
  VectorTuple t{Vector({1.0, 0.0}), Vector({1.0, 0.0, 0.0})};
  try {
    require_homogeneous(t);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    ASSERT_TRUE(e.index().has_value());
    EXPECT_EQ(*e.index(), 1u);
  }
}

TEST(Element, ProductPairArithmeticActsSidewise) {
  Element a = ProductPair{Vector({1.0, 2.0}), Polynomial({1.0})};
  Element b = ProductPair{Vector({0.5, -1.0}), Polynomial({0.0, 2.0})};
  Element c = axpy(a, 2.0, b);
  const auto& q = std::get<ProductPair>(c);
  EXPECT_EQ(std::get<Vector>(q.left), Vector({2.0, 0.0}));
  EXPECT_EQ(std::get<Polynomial>(q.right), Polynomial({1.0, 4.0}));
}

TEST(Element, EmbedRowsPadsPolynomialsAndConcatenatesPairs) {
  VectorTuple t{Polynomial({1.0}), Polynomial({0.0, 0.0, 2.0})};
  auto rows = embed_rows(t);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<double>{1.0, 0.0, 0.0}));
  VectorTuple p{ProductPair{Vector({1.0, 2.0}), Vector({3.0})},
                ProductPair{Vector({4.0, 5.0}), Vector({6.0})}};
  auto prow = embed_rows(p);
  EXPECT_EQ(prow[1], (std::vector<double>{4.0, 5.0, 6.0}));
}

TEST(Linalg, DeterminantMatchesLeibnizOnRandomMatrices) {
  for (std::size_t n = 1; n <= 5; ++n) {
    for (std::size_t trial = 0; trial < 40; ++trial) {
      auto rng = make_rng(7, n, trial);
      std::normal_distribution<double> g;
      linalg::Matrix m(n, linalg::Row(n));
      for (auto& r : m)
        for (double& x : r) x = g(rng);
      const double expect = oracle::leibniz_det(m);
      EXPECT_NEAR(linalg::determinant(m), expect, 1e-12 * (1.0 + std::abs(expect)));
    }
  }
}

TEST(Linalg, DeterminantOfSingularMatrixIsZero) {
  EXPECT_EQ(linalg::determinant({{1.0, 2.0}, {0.0, 0.0}}), 0.0);
  EXPECT_NEAR(linalg::determinant({{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}, {1.0, 0.0, 1.0}}), 0.0,
              1e-14);
}

TEST(Linalg, CofactorVectorReproducesDeterminantAsDotProduct) {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t trial = 0; trial < 25; ++trial) {
      auto rng = make_rng(11, n, trial);
      std::normal_distribution<double> g;
      std::vector<linalg::Row> anchors(n - 1, linalg::Row(n));
      for (auto& r : anchors)
        for (double& x : r) x = g(rng);
      auto v = linalg::cofactor_vector(anchors);
      auto expect = oracle::cofactor_by_units(anchors);
      ASSERT_EQ(v.size(), n);
      for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(v[j], expect[j], 1e-12);
      linalg::Row x(n);
      for (double& xi : x) xi = g(rng);
      linalg::Matrix m{x};
      m.insert(m.end(), anchors.begin(), anchors.end());
      EXPECT_NEAR(linalg::dot(v, x), oracle::leibniz_det(m), 1e-11);
    }
  }
}

TEST(Linalg, CofactorVectorIn3DIsCrossProduct) {
  auto v = linalg::cofactor_vector(std::vector<linalg::Row>{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
  EXPECT_EQ(v, (linalg::Row{0.0, 0.0, 1.0}));
}

TEST(Linalg, RankCountsIndependentRows) {
  EXPECT_EQ(linalg::rank({{1.0, 2.0}, {2.0, 4.0}}, 1e-9).rank, 1u);
  EXPECT_EQ(linalg::rank({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}, 1e-9).rank, 2u);
  EXPECT_EQ(linalg::rank({{0.0, 0.0}}, 1e-9).rank, 0u);
}

TEST(Linalg, LeastSquaresSolvesConsistentSystemExactly) {
  std::vector<linalg::Row> cols{{1.0, 0.0, 1.0}, {0.0, 1.0, 1.0}};
  linalg::Row target{2.0, 3.0, 5.0};
  auto r = linalg::least_squares(cols, target);
  EXPECT_NEAR(r.solution[0], 2.0, 1e-14);
  EXPECT_NEAR(r.solution[1], 3.0, 1e-14);
  EXPECT_NEAR(r.residual_norm, 0.0, 1e-13);
}

TEST(Linalg, LeastSquaresResidualMatchesNormalEquations) {
  // projection of (1,1,1) on span{(1,0,0),(0,1,0)} leaves residual 1
  std::vector<linalg::Row> cols{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
  auto r = linalg::least_squares(cols, linalg::Row{1.0, 1.0, 1.0});
  EXPECT_NEAR(r.residual_norm, 1.0, 1e-14);
  EXPECT_THROW(linalg::least_squares(std::vector<linalg::Row>{{1.0, 1.0}, {2.0, 2.0}},
                                     linalg::Row{1.0, 0.0}),
               PreconditionError);
}

TEST(Seeding, DerivedSeedsAreReproducibleAndDistinct) {
  EXPECT_EQ(derive_seed(42, 1, 0), derive_seed(42, 1, 0));
  EXPECT_NE(derive_seed(42, 1, 0), derive_seed(42, 1, 1));
  EXPECT_NE(derive_seed(42, 1, 0), derive_seed(42, 2, 0));
  EXPECT_NE(derive_seed(42, 1, 0), derive_seed(43, 1, 0));
  auto a = make_rng(42, 3, 9);
  auto b = make_rng(42, 3, 9);
  EXPECT_EQ(a(), b());
}

TEST(Sampling, CoordinateRoundTrip) {
  auto space = ElementSpace::product({false, 2}, {true, 3});
  EXPECT_EQ(space.coord_dim(), 5u);
  std::vector<double> c{1.0, 2.0, 3.0, 4.0, 5.0};
  Element e = space.from_coords(c);
  EXPECT_EQ(space.to_coords(e), c);
  EXPECT_EQ(space.basis().size(), 5u);
}

TEST(Sampling, PolynomialOutsideSliceIsRejected) {
  auto space = ElementSpace::polynomials(2);
  EXPECT_THROW(space.to_coords(Polynomial({0.0, 0.0, 1.0})), ShapeError);
  EXPECT_EQ(space.to_coords(Polynomial({5.0})), (std::vector<double>{5.0, 0.0}));
  EXPECT_FALSE(space.contains(Vector({1.0, 2.0})));
}

TEST(Sampling, CoordinateAscentFindsConcaveMaximum) {
  auto f = [](std::span<const double> x) {
    return -((x[0] - 1.5) * (x[0] - 1.5) + (x[1] + 0.25) * (x[1] + 0.25));
  };
  auto r = coordinate_ascent(f, {0.1, 0.1}, 60);
  EXPECT_NEAR(r.point[0], 1.5, 1e-8);
  EXPECT_NEAR(r.point[1], -0.25, 1e-8);
}
