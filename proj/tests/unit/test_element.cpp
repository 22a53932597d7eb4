#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "softfem/element.hpp"
#include "softfem/error.hpp"
#include "softfem/quadrature.hpp"

using namespace softfem;

namespace {

std::vector<double> sample_points() {
  std::vector<double> xi;
  for (int k = 0; k <= 20; ++k) xi.push_back(-1.0 + 0.1 * k);
  return xi;
}

} // namespace

TEST(ReferenceElement, NodesAreLobattoPoints) {
  for (int p = 1; p <= ReferenceElement::kMaxDegree; ++p) {
    const ReferenceElement el(p);
    const auto lob = gauss_lobatto(p + 1);
    ASSERT_EQ(el.num_nodes(), p + 1);
    for (int i = 0; i <= p; ++i) EXPECT_NEAR(el.nodes()[i], lob.points[i], 1e-15);
  }
}

TEST(ReferenceElement, KroneckerPropertyAtNodes) {
  for (int p = 1; p <= 4; ++p) {
    const ReferenceElement el(p);
    const auto t = el.eval_basis(el.nodes());
    for (int i = 0; i <= p; ++i)
      for (int k = 0; k <= p; ++k) EXPECT_NEAR(t(i, k), i == k ? 1.0 : 0.0, 1e-14);
  }
}

TEST(ReferenceElement, PartitionOfUnityAndZeroDerivativeSum) {
  const auto xi = sample_points();
  for (int p = 1; p <= 4; ++p) {
    const ReferenceElement el(p);
    const auto v = el.eval_basis(xi);
    const auto d = el.eval_basis_deriv(xi);
    for (int k = 0; k < static_cast<int>(xi.size()); ++k) {
      double sv = 0.0, sd = 0.0;
      for (int i = 0; i <= p; ++i) sv += v(i, k), sd += d(i, k);
      EXPECT_NEAR(sv, 1.0, 1e-13);
      EXPECT_NEAR(sd, 0.0, 1e-12);
    }
  }
}

TEST(ReferenceElement, ReproducesPolynomialsOfItsDegree) {
  // Interpolating x^p at the nodes must reproduce x^p and p x^(p-1) exactly.
  const auto xi = sample_points();
  for (int p = 1; p <= 4; ++p) {
    const ReferenceElement el(p);
    const auto v = el.eval_basis(xi);
    const auto d = el.eval_basis_deriv(xi);
    for (int k = 0; k < static_cast<int>(xi.size()); ++k) {
      double u = 0.0, du = 0.0;
      for (int i = 0; i <= p; ++i) {
        const double c = std::pow(el.nodes()[i], p);
        u += c * v(i, k);
        du += c * d(i, k);
      }
      EXPECT_NEAR(u, std::pow(xi[k], p), 1e-13);
      EXPECT_NEAR(du, p * std::pow(xi[k], p - 1), 1e-12);
    }
  }
}

TEST(ReferenceElement, DerivativeMatchesCentralDifference) {
  const double step = 1e-6;
  const std::vector<double> xi{-0.73, 0.05, 0.61};
  for (int p = 1; p <= 4; ++p) {
    const ReferenceElement el(p);
    const auto d = el.eval_basis_deriv(xi);
    for (std::size_t k = 0; k < xi.size(); ++k) {
      const std::vector<double> pm{xi[k] - step, xi[k] + step};
      const auto v = el.eval_basis(pm);
      for (int i = 0; i <= p; ++i) EXPECT_NEAR(d(i, static_cast<int>(k)), (v(i, 1) - v(i, 0)) / (2 * step), 1e-7);
    }
  }
}

TEST(ReferenceElement, LobattoMassIsDiagonal) {
  for (int p = 1; p <= 4; ++p) {
    const ReferenceElement el(p);
    const auto rule = gauss_lobatto(p + 1);
    const auto v = el.eval_basis(rule.points);
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= p; ++j) {
        double m = 0.0;
        for (int q = 0; q <= p; ++q) m += rule.weights[q] * v(i, q) * v(j, q);
        if (i != j) EXPECT_NEAR(m, 0.0, 1e-15);
        else EXPECT_NEAR(m, rule.weights[i], 1e-15);
      }
  }
}

TEST(ReferenceElement, RejectsUnsupportedDegree) {
  try {
    ReferenceElement el(5);
    FAIL() << "degree 5 accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unsupported_degree);
  }
  EXPECT_THROW(ReferenceElement(0), Error);
}
