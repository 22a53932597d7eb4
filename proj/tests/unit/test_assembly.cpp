#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "softfem/assembly.hpp"
#include "softfem/element.hpp"
#include "softfem/error.hpp"
#include "softfem/quadrature.hpp"

#include "polynomial.hpp"

using namespace softfem;
using softfem::test::Poly;

namespace {

// Global nodal values of f at the interior dofs of a uniform degree-p mesh.
std::vector<double> interpolate(const Mesh1D& mesh, int p, const auto& f) {
  const auto map = dof_map(mesh, p);
  const ReferenceElement el(p);
  std::vector<double> u(map.num_dofs, 0.0);
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int i = 0; i <= p; ++i) {
      const auto g = map(e, i);
      if (g == kEliminated) continue;
      const double x = mesh.left(e) + 0.5 * (el.nodes()[i] + 1.0) * mesh.size(e);
      u[g] = f(x);
    }
  return u;
}

double bilinear(const SymmetricMatrix& m, const std::vector<double>& u, const std::vector<double>& v) {
  const auto mv = m.multiply(v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * mv[i];
  return s;
}

// u = x (1 - x) times a factor that keeps the degree at p.
Poly test_polynomial(int p, double shift) {
  Poly u{{0.0, 1.0, -1.0}};
  for (int k = 2; k < p; ++k) u = u * Poly{{-shift - 0.1 * k, 1.0}};
  return u;
}

} // namespace

TEST(SymmetricMatrix, BandStorageAndProducts) {
  SymmetricMatrix m(4, 1);
  m.add(0, 0, 2.0);
  m.add(1, 0, -1.0);
  m.add(1, 1, 2.0);
  m.set(2, 1, -1.0);
  m.add(2, 2, 2.0);
  m.add(3, 2, -1.0);
  m.add(3, 3, 2.0);
  EXPECT_DOUBLE_EQ(m(0, 1), -1.0);
  EXPECT_DOUBLE_EQ(m(0, 3), 0.0);
  try {
    m.add(3, 0, 1.0);
    FAIL() << "entry outside the band accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const auto y = m.multiply(x);
  const std::vector<double> expected{0.0, 0.0, 0.0, 5.0};
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(y[i], expected[i]);
  EXPECT_DOUBLE_EQ(m.quadratic_form(x), 20.0);
  EXPECT_DOUBLE_EQ(m.trace(), 8.0);
  EXPECT_FALSE(m.is_diagonal());

  const auto dense = m.to_dense();
  EXPECT_DOUBLE_EQ(dense[1 * 4 + 2], -1.0);
  EXPECT_DOUBLE_EQ(dense[2 * 4 + 1], -1.0);

  const auto sum = m.plus(SymmetricMatrix::dense(4).scaled(0.0), 3.0);
  EXPECT_EQ(sum.half_bandwidth(), 3u);
  EXPECT_DOUBLE_EQ(sum(3, 2), -1.0);
}

TEST(SymmetricMatrix, CoordinateRoundTrip) {
  SymmetricMatrix m(3, 2);
  m.add(0, 0, 1.5);
  m.add(2, 0, -0.25);
  m.add(2, 2, 1e-300);
  std::stringstream ss;
  m.write_coordinate(ss);
  const auto r = SymmetricMatrix::read_coordinate(ss);
  ASSERT_EQ(r.order(), 3u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(r(i, j), m(i, j));
}

TEST(Assembly1D, LinearElementsMatchClassicalStencils) {
  const int n = 6;
  const double h = 1.0 / n;
  const auto mesh = Mesh1D::uniform(0.0, 1.0, n);
  const auto k = assemble_stiffness(mesh, 1, DiffusionField::constant(1.0));
  const auto mg = assemble_mass(mesh, 1, QuadratureFamily::gauss_legendre);
  const auto ml = assemble_mass(mesh, 1, QuadratureFamily::gauss_lobatto);
  ASSERT_EQ(k.order(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(k(i, i), 2.0 / h, 1e-12);
    EXPECT_NEAR(mg(i, i), 4.0 * h / 6.0, 1e-15);
    EXPECT_NEAR(ml(i, i), h, 1e-15);
    if (i + 1 < 5) {
      EXPECT_NEAR(k(i + 1, i), -1.0 / h, 1e-12);
      EXPECT_NEAR(mg(i + 1, i), h / 6.0, 1e-15);
    }
  }
  EXPECT_TRUE(ml.is_diagonal());
}

TEST(Assembly1D, PolynomialIntegrationOracle) {
  // Interpolation is exact for global polynomials of degree p, so the
  // discrete forms must equal exact integrals.
  const auto mesh = Mesh1D::from_boundaries({0.0, 0.15, 0.4, 0.55, 0.8, 1.0});
  for (int p = 2; p <= 4; ++p) {
    const Poly u = test_polynomial(p, 0.2);
    const Poly v = test_polynomial(p, 0.6);
    const auto uh = interpolate(mesh, p, u);
    const auto vh = interpolate(mesh, p, v);
    const auto k = assemble_stiffness(mesh, p, DiffusionField::constant(1.0));
    const auto m = assemble_mass(mesh, p, QuadratureFamily::gauss_legendre);
    EXPECT_NEAR(bilinear(k, uh, vh), (u.derivative() * v.derivative()).integral(0.0, 1.0), 1e-12) << "p=" << p;
    EXPECT_NEAR(bilinear(m, uh, vh), (u * v).integral(0.0, 1.0), 1e-14) << "p=" << p;
    // Smooth global functions have no derivative jumps.
    for (int power : {1, 3}) {
      const auto s = assemble_penalty(mesh, p, DiffusionField::constant(1.0), power);
      EXPECT_NEAR(s.quadratic_form(uh), 0.0, 1e-10) << "p=" << p << " power=" << power;
    }
  }
}

TEST(Assembly1D, ConstantCoefficientScalesStiffness) {
  const auto mesh = Mesh1D::uniform(0.0, 1.0, 5);
  const auto k1 = assemble_stiffness(mesh, 3, DiffusionField::constant(1.0));
  const auto k3 = assemble_stiffness(mesh, 3, DiffusionField::constant(3.0));
  for (std::size_t i = 0; i < k1.order(); ++i)
    for (std::size_t j = 0; j <= i; ++j) EXPECT_NEAR(k3(i, j), 3.0 * k1(i, j), 1e-12);
}

TEST(Assembly1D, VariableCoefficientStiffness) {
  // int exp(x - x^2) u'(x)^2 dx against a composite 20-point Gauss rule.
  const auto mesh = Mesh1D::uniform(0.0, 1.0, 4);
  const auto kappa = DiffusionField::exp_x_minus_x2();
  const Poly u{{0.0, 1.0, -1.0}};
  const Poly du = u.derivative();
  const auto rule = gauss_legendre(20);
  double exact = 0.0;
  for (int e = 0; e < 10; ++e)
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double x = (e + 0.5 * (rule.points[q] + 1.0)) / 10.0;
      exact += 0.05 * rule.weights[q] * kappa(x) * du(x) * du(x);
    }
  const auto uh = interpolate(mesh, 2, u);
  const auto k = assemble_stiffness(mesh, 2, kappa, 12);
  EXPECT_NEAR(k.quadratic_form(uh), exact, 1e-12);
}

TEST(Assembly1D, LumpedMassRowSums) {
  const auto mesh = Mesh1D::uniform(0.0, 1.0, 7);
  const double h = 1.0 / 7;
  for (int p = 1; p <= 4; ++p) {
    const auto ml = assemble_mass(mesh, p, QuadratureFamily::gauss_lobatto);
    EXPECT_TRUE(ml.is_diagonal()) << "p=" << p;
    // Total mass 1 minus the two eliminated endpoint weights.
    const double endpoint = h * 0.5 * 2.0 / (p * (p + 1));
    EXPECT_NEAR(ml.trace(), 1.0 - 2.0 * endpoint, 1e-14) << "p=" << p;
  }
}

TEST(Assembly1D, PenaltyLinearStencil) {
  // Hat function derivative jumps: -2/h at its own vertex, +1/h at the neighbours.
  const int n = 8;
  const double h = 1.0 / n;
  const auto mesh = Mesh1D::uniform(0.0, 1.0, n);
  for (int power : {1, 3}) {
    const double w = std::pow(h, power);
    const auto s = assemble_penalty(mesh, 1, DiffusionField::constant(2.0), power);
    EXPECT_NEAR(s(0, 0), 2.0 * w * 5.0 / (h * h), 1e-9);
    EXPECT_NEAR(s(3, 3), 2.0 * w * 6.0 / (h * h), 1e-9);
    EXPECT_NEAR(s(3, 2), 2.0 * w * -4.0 / (h * h), 1e-9);
    EXPECT_NEAR(s(3, 1), 2.0 * w * 1.0 / (h * h), 1e-9);
  }
}

TEST(Assembly1D, PenaltyMeasuresKinkJump) {
  // min(x, 1 - x) has a single derivative jump of -2 at x = 1/2.
  const auto mesh = Mesh1D::uniform(0.0, 1.0, 6);
  for (int p = 1; p <= 4; ++p) {
    const auto uh = interpolate(mesh, p, [](double x) { return std::min(x, 1.0 - x); });
    for (int power : {1, 3}) {
      const auto s = assemble_penalty(mesh, p, DiffusionField::constant(1.0), power);
      EXPECT_NEAR(s.quadratic_form(uh), 4.0 * std::pow(1.0 / 6.0, power), 1e-11) << "p=" << p;
    }
  }
}

TEST(Assembly1D, SystemCombinesComponents) {
  const auto mesh = Mesh1D::uniform(0.0, 1.0, 5);
  const int p = 2;
  const auto cfg = MethodConfig::gsfembq(p, 0.05, 0.002, 0.3);
  const auto sys = build_system(mesh, cfg);
  const auto kappa = DiffusionField::constant(1.0);
  const auto k = assemble_stiffness(mesh, p, kappa);
  const auto s1 = assemble_penalty(mesh, p, kappa, 1);
  const auto s3 = assemble_penalty(mesh, p, kappa, 3);
  const auto mg = assemble_mass(mesh, p, QuadratureFamily::gauss_legendre);
  const auto ml = assemble_mass(mesh, p, QuadratureFamily::gauss_lobatto);
  for (std::size_t i = 0; i < k.order(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      EXPECT_NEAR(sys.a(i, j), k(i, j) - 0.05 * s1(i, j), 1e-12);
      EXPECT_NEAR(sys.b(i, j), 0.3 * mg(i, j) + 0.7 * ml(i, j) + 0.002 * s3(i, j), 1e-15);
    }
}

TEST(Assembly1D, RejectsContradictoryParameters) {
  auto cfg = MethodConfig::fem(1);
  cfg.eta_k = 0.1;
  try {
    build_system(Mesh1D::uniform(0.0, 1.0, 4), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::config_error);
  }
}

TEST(Assembly2D, KroneckerMatchesDirect) {
  for (int p = 1; p <= 3; ++p) {
    const auto mesh = TensorMesh2D::uniform(4, 3);
    const auto cfg = MethodConfig::gsfembq(p, 0.04, 0.001, 0.6);
    const auto direct = build_system_2d(mesh, cfg, Assembly2DPath::direct);
    const auto kr = build_system_2d(mesh, cfg, Assembly2DPath::kronecker);
    ASSERT_EQ(direct.a.order(), kr.a.order());
    const auto da = direct.a.to_dense(), ka = kr.a.to_dense();
    const auto db = direct.b.to_dense(), kb = kr.b.to_dense();
    for (std::size_t i = 0; i < da.size(); ++i) {
      EXPECT_NEAR(da[i], ka[i], 1e-12 * direct.a.frobenius_norm()) << "p=" << p;
      EXPECT_NEAR(db[i], kb[i], 1e-12 * direct.b.frobenius_norm()) << "p=" << p;
    }
  }
}

TEST(Assembly2D, StiffnessIsTensorSum) {
  const int p = 2;
  const auto mesh = TensorMesh2D::uniform(3, 5);
  const auto kappa = DiffusionField::constant(1.0);
  const auto k2 = assemble_stiffness_2d(mesh, p, kappa);
  const auto kx = assemble_stiffness(mesh.x, p, kappa), ky = assemble_stiffness(mesh.y, p, kappa);
  const auto mx = assemble_mass(mesh.x, p, QuadratureFamily::gauss_legendre);
  const auto my = assemble_mass(mesh.y, p, QuadratureFamily::gauss_legendre);
  const auto expected = kron(my, kx).plus(kron(ky, mx), 1.0);
  const auto a = k2.to_dense(), b = expected.to_dense();
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(Assembly2D, ParallelAssemblyMatchesSerial) {
  const auto mesh = TensorMesh2D::uniform(6, 5);
  const auto kappa = DiffusionField::exp_x_minus_x2();
  for (int p = 1; p <= 3; ++p) {
    const auto s = assemble_stiffness_2d(mesh, p, kappa, 0, kernels::Execution::serial);
    const auto o = assemble_stiffness_2d(mesh, p, kappa, 0, kernels::Execution::parallel);
    EXPECT_EQ(s.to_dense(), o.to_dense()) << "p=" << p;
    const auto ms = assemble_mass_2d(mesh, p, QuadratureFamily::gauss_legendre, kernels::Execution::serial);
    const auto mo = assemble_mass_2d(mesh, p, QuadratureFamily::gauss_legendre, kernels::Execution::parallel);
    EXPECT_EQ(ms.to_dense(), mo.to_dense()) << "p=" << p;
  }
}

TEST(Assembly2D, KroneckerPathNeedsConstantKappa) {
  auto cfg = MethodConfig::fem(1);
  cfg.kappa = DiffusionField::exp_x_minus_x2();
  EXPECT_THROW(build_system_2d(TensorMesh2D::uniform(3, 3), cfg, Assembly2DPath::kronecker), Error);
}
