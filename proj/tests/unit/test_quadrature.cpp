#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "softfem/error.hpp"
#include "softfem/quadrature.hpp"

using namespace softfem;

namespace {

// Exact integral of x^k over [-1, 1].
double monomial_integral(int k) { return k % 2 == 1 ? 0.0 : 2.0 / (k + 1); }

} // namespace

TEST(Quadrature, GaussLegendreIntegratesUpToDegree2nMinus1) {
  for (int n = 1; n <= 8; ++n) {
    const auto rule = gauss_legendre(n);
    ASSERT_EQ(rule.size(), static_cast<std::size_t>(n));
    EXPECT_EQ(rule.exactness_degree(), 2 * n - 1);
    for (int k = 0; k <= 2 * n - 1; ++k)
      EXPECT_NEAR(rule.integrate([k](double x) { return std::pow(x, k); }), monomial_integral(k), 1e-14)
          << "n=" << n << " k=" << k;
    // One degree higher is not integrated exactly.
    const int k = 2 * n;
    EXPECT_GT(std::abs(rule.integrate([k](double x) { return std::pow(x, k); }) - monomial_integral(k)), 1e-6);
  }
}

TEST(Quadrature, GaussLobattoIntegratesUpToDegree2nMinus3) {
  for (int n = 2; n <= 8; ++n) {
    const auto rule = gauss_lobatto(n);
    EXPECT_EQ(rule.exactness_degree(), 2 * n - 3);
    EXPECT_DOUBLE_EQ(rule.points.front(), -1.0);
    EXPECT_DOUBLE_EQ(rule.points.back(), 1.0);
    for (int k = 0; k <= 2 * n - 3; ++k)
      EXPECT_NEAR(rule.integrate([k](double x) { return std::pow(x, k); }), monomial_integral(k), 1e-14)
          << "n=" << n << " k=" << k;
  }
}

TEST(Quadrature, KnownSmallRules) {
  const auto gl2 = gauss_legendre(2);
  EXPECT_NEAR(gl2.points[0], -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(gl2.weights[1], 1.0, 1e-15);

  const auto lob3 = gauss_lobatto(3);
  EXPECT_NEAR(lob3.points[1], 0.0, 1e-15);
  EXPECT_NEAR(lob3.weights[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(lob3.weights[1], 4.0 / 3.0, 1e-15);

  const auto lob4 = gauss_lobatto(4);
  EXPECT_NEAR(lob4.points[2], 1.0 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(lob4.weights[1], 5.0 / 6.0, 1e-15);
}

TEST(Quadrature, PointsIncreasingAndSymmetric) {
  for (auto family : {QuadratureFamily::gauss_legendre, QuadratureFamily::gauss_lobatto}) {
    for (int n = 2; n <= 7; ++n) {
      const auto rule = make_rule(family, n);
      EXPECT_NEAR(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0), 2.0, 1e-14);
      for (int q = 0; q < n; ++q) {
        EXPECT_NEAR(rule.points[q], -rule.points[n - 1 - q], 1e-15);
        EXPECT_NEAR(rule.weights[q], rule.weights[n - 1 - q], 1e-15);
        EXPECT_GT(rule.weights[q], 0.0);
        if (q > 0) EXPECT_LT(rule.points[q - 1], rule.points[q]);
      }
    }
  }
}

TEST(Quadrature, RejectsTooFewPoints) {
  EXPECT_THROW(gauss_legendre(0), Error);
  EXPECT_THROW(gauss_lobatto(1), Error);
}
