#pragma once

#include <array>
#include <vector>

#include <boost/rational.hpp>

#include "softfem/method.hpp"

namespace softfem {

using Rational = boost::rational<long long>;

/// Dirichlet-Laplace eigenpair on the unit interval (j == 0) or unit square.
struct ExactEigenpair {
  int i = 1;
  int j = 0;
  double lambda = 0.0;

  [[nodiscard]] int dimension() const noexcept { return j == 0 ? 1 : 2; }
  /// L2-normalized eigenfunction: sqrt(2) sin(i pi x), or 2 sin(i pi x) sin(j pi y).
  [[nodiscard]] double value(double x, double y = 0.0) const;
  [[nodiscard]] double derivative(double x) const;
};

std::vector<ExactEigenpair> exact_spectrum_1d(int count);
/// Ascending with multiplicity; ties ordered by (i, j).
std::vector<ExactEigenpair> exact_spectrum_2d(int count);

/// Discrete eigenvalue j (1-based) of the linear method on N uniform
/// elements of the unit interval, with parameters (eta_k, eta_m, alpha).
double analytic_eigenvalue_gsfembq(int j, int n_elements, const ParameterTriple& params);
long double analytic_eigenvalue_gsfembq_ld(int j, int n_elements, const ParameterTriple& params);
/// All N - 1 values in index order (not sorted).
std::vector<double> analytic_spectrum(int n_elements, const ParameterTriple& params);
/// Unit Euclidean norm vector with entries sin(k j pi / N), k = 1..N-1.
std::vector<double> analytic_eigenvector(int j, int n_elements);

enum class RatioFormula { gsfem, softfembq, gsfembq, gsfembq_family };

struct StiffnessRatio {
  double rho = 0.0;
  Rational rho_inf;
};

/// sigma(FEM) / sigma(method) for the linear optimal parameters of each
/// method. `alpha` selects the member of the GSFEMBQ family and is ignored otherwise.
StiffnessRatio stiffness_ratio_formula(RatioFormula which, double h, const Rational& alpha = Rational(0));
/// Same quantity from the analytic eigenvalues (h = 1/N): extreme eigenvalues
/// of FEM over extreme eigenvalues of the method.
double stiffness_ratio_analytic(int n_elements, const ParameterTriple& params);
/// lim_{h->0} lambda_max(FEM) / lambda_max(method) = (3 - 2 alpha + 48 eta_m) / (1 - 4 eta_k).
Rational asymptotic_ratio(const Rational& eta_k, const Rational& eta_m, const Rational& alpha);

/// lambda(t) / (j pi)^2 h^2 - 1 = c2 t^2 + c4 t^4 + ... + c10 t^10 near t = 0.
struct TaylorCoefficients {
  std::array<double, 5> c{};
  double fit_residual = 0.0;
  bool ill_conditioned = false;

  /// order in {2, 4, 6, 8, 10}.
  [[nodiscard]] double coefficient(int order) const;
};

/// Least-squares fit of degree 5 in t^2 on t = pi 2^-k, k = 6..12, in
/// 50-digit arithmetic.
TaylorCoefficients taylor_leading_coefficients(const ParameterTriple& params);

/// eta_k = (2 alpha - 1) / 12, eta_m = (5 alpha - 4) / 360.
ParameterTriple optimal_params(double alpha);

/// Largest eta_m for which the linear closed-form eigenvalue lambda(t) is
/// non-decreasing on (0, pi), found by bisection.
double eta_m_max_linear(double eta_k, double alpha = 1.0);

/// Largest eta_m (GSFEM, degree p, N uniform elements) for which the sorted
/// eigenvectors have non-decreasing energy x^T A x / x^T M_G x.
/// Bisection on [0, upper] with direct solves.
double eta_m_max_numeric(int p, int n_elements, double eta_k, double upper, int iterations = 30);

} // namespace softfem
