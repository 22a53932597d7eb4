#include "softfem/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "softfem/assembly.hpp"
#include "softfem/eigensolve.hpp"
#include "softfem/error.hpp"

namespace softfem {

namespace {

constexpr double kPi = std::numbers::pi;

template <class T>
T linear_lambda_h2(T t, const ParameterTriple& prm) {
  using std::cos;
  using std::sin;
  const T ek = prm.eta_k, em = prm.eta_m, al = prm.alpha;
  const T s = sin(t / 2);
  const T num = 12 * (1 - 2 * ek + 2 * ek * cos(t)) * s * s;
  const T den = 3 + 18 * em - al + (al - 24 * em) * cos(t) + 6 * em * cos(2 * t);
  return num / den;
}

// Gaussian elimination with partial pivoting on a small dense system.
template <class T>
std::vector<T> solve_small(std::vector<std::vector<T>> m, std::vector<T> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (abs(m[r][k]) > abs(m[piv][k])) piv = r;
    std::swap(m[k], m[piv]);
    std::swap(rhs[k], rhs[piv]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const T f = m[r][k] / m[k][k];
      for (std::size_t c = k; c < n; ++c) m[r][c] -= f * m[k][c];
      rhs[r] -= f * rhs[k];
    }
  }
  std::vector<T> x(n);
  for (std::size_t i = n; i-- > 0;) {
    T s = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m[i][c] * x[c];
    x[i] = s / m[i][i];
  }
  return x;
}

bool linear_monotone(double eta_k, double eta_m, double alpha) {
  constexpr int samples = 20000;
  const ParameterTriple prm{eta_k, eta_m, alpha};
  long double prev = 0.0L;
  for (int k = 1; k <= samples; ++k) {
    const long double t = std::numbers::pi_v<long double> * k / samples;
    const long double v = linear_lambda_h2<long double>(t, prm);
    if (!std::isfinite(static_cast<double>(v)) || v < prev) return false;
    prev = v;
  }
  return true;
}

} // namespace

double ExactEigenpair::value(double x, double y) const {
  if (j == 0) return std::numbers::sqrt2 * std::sin(i * kPi * x);
  return 2.0 * std::sin(i * kPi * x) * std::sin(j * kPi * y);
}

double ExactEigenpair::derivative(double x) const {
  SOFTFEM_THROW_IF(j != 0, invalid_argument, "derivative: 1D eigenpairs only");
  return std::numbers::sqrt2 * i * kPi * std::cos(i * kPi * x);
}

std::vector<ExactEigenpair> exact_spectrum_1d(int count) {
  SOFTFEM_THROW_IF(count < 1, invalid_argument, "exact_spectrum_1d: count must be positive");
  std::vector<ExactEigenpair> out;
  out.reserve(count);
  for (int i = 1; i <= count; ++i) out.push_back({i, 0, double(i) * i * kPi * kPi});
  return out;
}

std::vector<ExactEigenpair> exact_spectrum_2d(int count) {
  SOFTFEM_THROW_IF(count < 1, invalid_argument, "exact_spectrum_2d: count must be positive");
  const int bound = static_cast<int>(std::ceil(std::sqrt(double(count)))) + 2;
  std::vector<ExactEigenpair> out;
  for (int i = 1; i <= bound; ++i)
    for (int j = 1; j <= bound; ++j) out.push_back({i, j, double(i * i + j * j) * kPi * kPi});
  std::stable_sort(out.begin(), out.end(), [](const ExactEigenpair& a, const ExactEigenpair& b) {
    return a.i * a.i + a.j * a.j < b.i * b.i + b.j * b.j;
  });
  out.resize(count);
  return out;
}

long double analytic_eigenvalue_gsfembq_ld(int j, int n_elements, const ParameterTriple& params) {
  SOFTFEM_THROW_IF(n_elements < 2, too_few_elements, "analytic eigenvalue: N must be at least 2");
  SOFTFEM_THROW_IF(j < 1 || j > n_elements - 1, invalid_index,
                   "analytic eigenvalue: index " + std::to_string(j) + " outside 1.." +
                       std::to_string(n_elements - 1));
  const long double h = 1.0L / n_elements;
  const long double t = j * std::numbers::pi_v<long double> * h;
  return linear_lambda_h2<long double>(t, params) / (h * h);
}

double analytic_eigenvalue_gsfembq(int j, int n_elements, const ParameterTriple& params) {
  return static_cast<double>(analytic_eigenvalue_gsfembq_ld(j, n_elements, params));
}

std::vector<double> analytic_spectrum(int n_elements, const ParameterTriple& params) {
  SOFTFEM_THROW_IF(n_elements < 2, too_few_elements, "analytic spectrum: N must be at least 2");
  std::vector<double> out;
  out.reserve(n_elements - 1);
  for (int j = 1; j < n_elements; ++j) out.push_back(analytic_eigenvalue_gsfembq(j, n_elements, params));
  return out;
}

std::vector<double> analytic_eigenvector(int j, int n_elements) {
  SOFTFEM_THROW_IF(j < 1 || j > n_elements - 1, invalid_index, "analytic eigenvector: index out of range");
  std::vector<double> v(n_elements - 1);
  double norm = 0.0;
  for (int k = 1; k < n_elements; ++k) {
    v[k - 1] = std::sin(k * j * kPi / n_elements);
    norm += v[k - 1] * v[k - 1];
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

Rational asymptotic_ratio(const Rational& eta_k, const Rational& eta_m, const Rational& alpha) {
  // Mixed integer/rational comparisons recurse forever in Boost 1.74 under C++20.
  const Rational den = 1 - 4 * eta_k;
  SOFTFEM_THROW_IF(den.numerator() == 0, invalid_argument, "asymptotic_ratio: eta_k = 1/4 is degenerate");
  return (3 - 2 * alpha + 48 * eta_m) / den;
}

StiffnessRatio stiffness_ratio_formula(RatioFormula which, double h, const Rational& alpha) {
  SOFTFEM_THROW_IF(!(h > 0.0 && h < 1.0), invalid_argument, "stiffness_ratio_formula: h outside (0, 1)");
  const double c = std::cos(kPi * h);
  const double c2 = std::cos(2.0 * kPi * h);
  const double base = (2.0 + c) / (2.0 - c);
  StiffnessRatio out;
  switch (which) {
  case RatioFormula::gsfem:
    out.rho = (5.0 + c) / (5.0 - c) * base * (123.0 - 56.0 * c + c2) / (123.0 + 56.0 * c + c2);
    out.rho_inf = asymptotic_ratio(Rational(1, 12), Rational(1, 360), Rational(1));
    break;
  case RatioFormula::softfembq:
    out.rho = (9.0 + c) / (9.0 - c) * base * (11.0 - 4.0 * c) / (11.0 + 4.0 * c);
    out.rho_inf = asymptotic_ratio(Rational(1, 20), Rational(0), Rational(4, 5));
    break;
  case RatioFormula::gsfembq:
    out.rho = base * (95.0 + 31.0 * c) / (95.0 - 31.0 * c) * (1179.0 - 688.0 * c + 23.0 * c2) /
              (1179.0 + 688.0 * c + 23.0 * c2);
    out.rho_inf = asymptotic_ratio(Rational(31, 252), Rational(23, 3780), Rational(26, 21));
    break;
  case RatioFormula::gsfembq_family: {
    const Rational ek = (2 * alpha - 1) / 12, em = (5 * alpha - 4) / 360;
    const ParameterTriple prm{boost::rational_cast<double>(ek), boost::rational_cast<double>(em),
                              boost::rational_cast<double>(alpha)};
    const double t_lo = kPi * h, t_hi = kPi - kPi * h;
    const ParameterTriple fem{};
    out.rho = (linear_lambda_h2(t_hi, fem) / linear_lambda_h2(t_lo, fem)) /
              (linear_lambda_h2(t_hi, prm) / linear_lambda_h2(t_lo, prm));
    out.rho_inf = asymptotic_ratio(ek, em, alpha);
    break;
  }
  }
  return out;
}

double stiffness_ratio_analytic(int n_elements, const ParameterTriple& params) {
  const auto fem = analytic_spectrum(n_elements, {});
  const auto m = analytic_spectrum(n_elements, params);
  const auto [fmin, fmax] = std::minmax_element(fem.begin(), fem.end());
  const auto [mmin, mmax] = std::minmax_element(m.begin(), m.end());
  return (*fmax / *fmin) / (*mmax / *mmin);
}

double TaylorCoefficients::coefficient(int order) const {
  SOFTFEM_THROW_IF(order < 2 || order > 10 || order % 2 != 0, invalid_argument,
                   "Taylor coefficient order must be one of 2, 4, 6, 8, 10");
  return c[order / 2 - 1];
}

TaylorCoefficients taylor_leading_coefficients(const ParameterTriple& params) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  constexpr int k_first = 6, k_last = 12, terms = 5;
  const Real pi = boost::math::constants::pi<Real>();
  const Real t0 = pi / Real(1 << k_first);

  std::vector<Real> s, y;
  for (int k = k_first; k <= k_last; ++k) {
    const Real t = pi / Real(1 << k);
    const Real ratio = linear_lambda_h2<Real>(t, params) / (t * t);
    s.push_back((t / t0) * (t / t0));
    y.push_back(ratio - 1);
  }
  // Normal equations in the scaled variable s = (t / t0)^2.
  std::vector<std::vector<Real>> m(terms, std::vector<Real>(terms, Real(0)));
  std::vector<Real> rhs(terms, Real(0));
  for (std::size_t q = 0; q < s.size(); ++q) {
    std::array<Real, terms> col;
    Real p = s[q];
    for (int a = 0; a < terms; ++a, p *= s[q]) col[a] = p;
    for (int a = 0; a < terms; ++a) {
      rhs[a] += col[a] * y[q];
      for (int b = 0; b < terms; ++b) m[a][b] += col[a] * col[b];
    }
  }
  const auto b = solve_small(m, rhs);

  TaylorCoefficients out;
  Real scale = t0 * t0;
  for (int a = 0; a < terms; ++a, scale *= t0 * t0) out.c[a] = static_cast<double>(b[a] / scale);

  Real max_res = 0, max_data = 0;
  for (std::size_t q = 0; q < s.size(); ++q) {
    Real fit = 0, p = s[q];
    for (int a = 0; a < terms; ++a, p *= s[q]) fit += b[a] * p;
    max_res = std::max(max_res, Real(abs(fit - y[q])));
    max_data = std::max(max_data, Real(abs(y[q])));
  }
  out.fit_residual = max_data > 0 ? static_cast<double>(max_res / max_data) : 0.0;
  out.ill_conditioned = out.fit_residual > 1e-6;
  return out;
}

ParameterTriple optimal_params(double alpha) {
  return {(2.0 * alpha - 1.0) / 12.0, (5.0 * alpha - 4.0) / 360.0, alpha};
}

double eta_m_max_linear(double eta_k, double alpha) {
  SOFTFEM_THROW_IF(!linear_monotone(eta_k, 0.0, alpha), invalid_argument,
                   "eta_m_max_linear: not monotone even without mass softness");
  double lo = 0.0, hi = 1.0;
  if (linear_monotone(eta_k, hi, alpha)) return hi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (linear_monotone(eta_k, mid, alpha) ? lo : hi) = mid;
  }
  return lo;
}

double eta_m_max_numeric(int p, int n_elements, double eta_k, double upper, int iterations) {
  const Mesh1D mesh = Mesh1D::uniform(0.0, 1.0, n_elements);
  const SymmetricMatrix mg = assemble_mass(mesh, p, QuadratureFamily::gauss_legendre);

  auto energy_increasing = [&](double eta_m) {
    const SymmetricSystem sys = build_system(mesh, MethodConfig::gsfem(p, eta_k, eta_m));
    const Spectrum sp = solve_gevp(sys);
    double prev = 0.0;
    for (std::size_t j = 0; j < sp.size(); ++j) {
      const auto x = sp.vector(j);
      const double e = sys.a.quadratic_form(x) / mg.quadratic_form(x);
      if (e < prev * (1.0 - 1e-10)) return false;
      prev = e;
    }
    return true;
  };

  SOFTFEM_THROW_IF(!energy_increasing(0.0), numerical_failure,
                   "eta_m_max_numeric: energies not ordered without mass softness");
  double lo = 0.0, hi = upper;
  if (energy_increasing(hi)) return hi;
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    (energy_increasing(mid) ? lo : hi) = mid;
  }
  return lo;
}

} // namespace softfem
