#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "softfem/error.hpp"
#include "softfem/oracle.hpp"

using namespace softfem;

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

TEST(ExactSpectrum, OneDimensional) {
  const auto s = exact_spectrum_1d(5);
  ASSERT_EQ(s.size(), 5u);
  for (int j = 1; j <= 5; ++j) {
    EXPECT_EQ(s[j - 1].i, j);
    EXPECT_EQ(s[j - 1].dimension(), 1);
    EXPECT_DOUBLE_EQ(s[j - 1].lambda, j * j * kPi * kPi);
  }
  EXPECT_NEAR(s[1].value(0.125), std::sqrt(2.0) * std::sin(0.25 * kPi), 1e-15);
  EXPECT_NEAR(s[0].derivative(0.0), std::sqrt(2.0) * kPi, 1e-14);
}

TEST(ExactSpectrum, TwoDimensionalWithMultiplicity) {
  const auto s = exact_spectrum_2d(6);
  ASSERT_EQ(s.size(), 6u);
  const int expected[6][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {1, 3}, {3, 1}};
  for (int k = 0; k < 6; ++k) {
    EXPECT_EQ(s[k].i, expected[k][0]);
    EXPECT_EQ(s[k].j, expected[k][1]);
    EXPECT_DOUBLE_EQ(s[k].lambda, (expected[k][0] * expected[k][0] + expected[k][1] * expected[k][1]) * kPi * kPi);
  }
  EXPECT_NEAR(s[0].value(0.5, 0.5), 2.0, 1e-15);
}

TEST(AnalyticEigenvalue, GalerkinLimitCase) {
  const int n = 10;
  const double h = 0.1;
  for (int j = 1; j < n; ++j) {
    const double t = j * kPi * h;
    const double fem = 6.0 / (h * h) * (1.0 - std::cos(t)) / (2.0 + std::cos(t));
    EXPECT_NEAR(analytic_eigenvalue_gsfembq(j, n, {0.0, 0.0, 1.0}), fem, 1e-12 * fem);
  }
  // Lumped mass: 4 / h^2 sin^2(t / 2).
  const double t = 3 * kPi * h;
  EXPECT_NEAR(analytic_eigenvalue_gsfembq(3, n, {0.0, 0.0, 0.0}), 4.0 / (h * h) * std::pow(std::sin(t / 2), 2), 1e-10);
}

TEST(AnalyticEigenvalue, RejectsBadIndices) {
  try {
    analytic_eigenvalue_gsfembq(10, 10, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_index);
  }
  EXPECT_THROW(analytic_eigenvalue_gsfembq(0, 10, {}), Error);
  EXPECT_THROW(analytic_spectrum(1, {}), Error);
}

TEST(AnalyticEigenvector, Orthonormal) {
  const int n = 9;
  for (int j = 1; j < n; ++j)
    for (int k = 1; k < n; ++k) {
      const auto u = analytic_eigenvector(j, n), v = analytic_eigenvector(k, n);
      double dot = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
      EXPECT_NEAR(dot, j == k ? 1.0 : 0.0, 1e-14);
    }
}

TEST(Taylor, OptimalFamilyLeadingCoefficients) {
  // Galerkin linear: lambda h^2 / t^2 - 1 = t^2 / 12 + ...
  const auto fem = taylor_leading_coefficients({0.0, 0.0, 1.0});
  EXPECT_FALSE(fem.ill_conditioned);
  EXPECT_NEAR(fem.coefficient(2), 1.0 / 12, 1e-10);

  // Leading coefficient against a direct long-double evaluation at small t,
  // and below the constants of the error bounds.
  const int n = 200;
  const long double t = std::numbers::pi_v<long double> / n;
  auto sixth = [&](const ParameterTriple& prm) {
    const long double ratio = analytic_eigenvalue_gsfembq_ld(1, n, prm) / (std::numbers::pi_v<long double> * std::numbers::pi_v<long double>);
    return static_cast<double>((ratio - 1.0L) / std::pow(t, 6.0L));
  };
  const ParameterTriple gs_opt{1.0 / 12, 1.0 / 360, 1.0};
  const auto gs = taylor_leading_coefficients(gs_opt);
  EXPECT_NEAR(gs.coefficient(2), 0.0, 1e-12);
  EXPECT_NEAR(gs.coefficient(4), 0.0, 1e-10);
  EXPECT_NEAR(gs.coefficient(6), sixth(gs_opt), 1e-3 * std::abs(gs.coefficient(6)));
  EXPECT_NEAR(gs.coefficient(6), -1.0 / 6048, 1e-12);
  EXPECT_LT(std::abs(gs.coefficient(6)), 1.0 / 3024);

  const ParameterTriple sq_opt{1.0 / 20, 0.0, 0.8};
  const auto sq = taylor_leading_coefficients(sq_opt);
  EXPECT_NEAR(sq.coefficient(4), 0.0, 1e-10);
  EXPECT_NEAR(sq.coefficient(6), sixth(sq_opt), 1e-3 * std::abs(sq.coefficient(6)));
  EXPECT_LT(std::abs(sq.coefficient(6)), 1.0 / 1440);

  for (double alpha : {0.0, 0.3, 1.0}) {
    const auto c = taylor_leading_coefficients(optimal_params(alpha));
    EXPECT_NEAR(c.coefficient(2), 0.0, 1e-12) << alpha;
    EXPECT_NEAR(c.coefficient(4), 0.0, 1e-10) << alpha;
  }
  EXPECT_THROW((void)fem.coefficient(3), Error);
}

TEST(Taylor, OptimalParams) {
  const auto p = optimal_params(1.0);
  EXPECT_DOUBLE_EQ(p.eta_k, 1.0 / 12);
  EXPECT_DOUBLE_EQ(p.eta_m, 1.0 / 360);
  const auto q = optimal_params(0.0);
  EXPECT_DOUBLE_EQ(q.eta_k, -1.0 / 12);
  EXPECT_DOUBLE_EQ(q.eta_m, -4.0 / 360);
}

TEST(StiffnessRatio, RationalLimits) {
  EXPECT_EQ(stiffness_ratio_formula(RatioFormula::gsfem, 0.01).rho_inf, Rational(17, 10));
  EXPECT_EQ(stiffness_ratio_formula(RatioFormula::softfembq, 0.01).rho_inf, Rational(7, 4));
  EXPECT_EQ(stiffness_ratio_formula(RatioFormula::gsfembq, 0.01).rho_inf, Rational(257, 160));
  EXPECT_EQ(asymptotic_ratio(Rational(1, 12), Rational(1, 360), Rational(1)), Rational(17, 10));
  EXPECT_EQ(asymptotic_ratio(Rational(0), Rational(0), Rational(1)), Rational(1));
  EXPECT_THROW(asymptotic_ratio(Rational(1, 4), Rational(0), Rational(1)), Error);
}

TEST(StiffnessRatio, FormulaMatchesAnalyticSpectrum) {
  for (int n : {10, 50, 200}) {
    const double h = 1.0 / n;
    EXPECT_NEAR(stiffness_ratio_formula(RatioFormula::gsfem, h).rho,
                stiffness_ratio_analytic(n, {1.0 / 12, 1.0 / 360, 1.0}), 1e-10);
    const auto fam = optimal_params(0.25);
    EXPECT_NEAR(stiffness_ratio_formula(RatioFormula::gsfembq_family, h, Rational(1, 4)).rho,
                stiffness_ratio_analytic(n, fam), 1e-10);
  }
}

TEST(EtaMMax, LinearBisection) {
  // For eta_k = 1/12 the monotonicity limit exceeds the optimal 1/360.
  const double em = eta_m_max_linear(1.0 / 12);
  EXPECT_GT(em, 1.0 / 360);
  EXPECT_LT(em, 0.1);
  // Just below the limit lambda(t) is monotone, just above it is not.
  const int n = 2000;
  auto monotone = [&](double eta_m) {
    double prev = 0.0;
    for (int j = 1; j < n; ++j) {
      const double v = analytic_eigenvalue_gsfembq(j, n, {1.0 / 12, eta_m, 1.0});
      if (v < prev) return false;
      prev = v;
    }
    return true;
  };
  EXPECT_TRUE(monotone(em * (1 - 1e-6)));
  EXPECT_FALSE(monotone(em * 1.05));
}
