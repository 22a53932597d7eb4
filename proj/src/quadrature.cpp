#include "softfem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "softfem/error.hpp"

namespace softfem {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::unsupported_degree: return "unsupported-degree";
    case ErrorCode::too_few_elements: return "too-few-elements";
    case ErrorCode::invalid_index: return "invalid-index";
    case ErrorCode::not_positive_definite: return "not-positive-definite";
    case ErrorCode::numerical_failure: return "numerical-failure";
    case ErrorCode::indefinite_system: return "indefinite-system";
    case ErrorCode::config_error: return "config-error";
    case ErrorCode::missing_reference: return "missing-reference";
  }
  return "unknown";
}

namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIter = 100;

struct LegendreValue {
  double p;   // P_n(x)
  double pm1; // P_{n-1}(x)
};

LegendreValue legendre(int n, double x) {
  double pm1 = 1.0;
  double p = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * x * p - k * pm1) / (k + 1.0);
    pm1 = p;
    p = next;
  }
  return {p, pm1};
}

// Fill the mirrored half so that the rule is exactly symmetric about 0.
void mirror(std::vector<double>& pts, std::vector<double>& wts) {
  const std::size_t n = pts.size();
  for (std::size_t k = 0; k < n / 2; ++k) {
    pts[n - 1 - k] = -pts[k];
    wts[n - 1 - k] = wts[k];
  }
  if (n % 2 == 1) pts[n / 2] = 0.0;
}

} // namespace

int QuadratureRule::exactness_degree() const noexcept {
  const int n = static_cast<int>(points.size());
  return family == QuadratureFamily::gauss_legendre ? 2 * n - 1 : 2 * n - 3;
}

QuadratureRule gauss_legendre(int n) {
  SOFTFEM_THROW_IF(n < 1, invalid_argument,
                   "gauss_legendre: need n >= 1, got " + std::to_string(n));
  std::vector<double> pts(n), wts(n);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    // Chebyshev-type guess for the k-th root counted from the left.
    double x = -std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      const auto [p, pm1] = legendre(n, x);
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= kNewtonTol) break;
    }
    const auto [p, pm1] = legendre(n, x);
    dp = n * (x * p - pm1) / (x * x - 1.0);
    pts[k] = x;
    wts[k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  mirror(pts, wts);
  if (n % 2 == 1) {
    const auto [p, pm1] = legendre(n, 0.0);
    const double dp = n * (0.0 * p - pm1) / (0.0 - 1.0);
    wts[n / 2] = 2.0 / (dp * dp);
  }
  return {QuadratureFamily::gauss_legendre, std::move(pts), std::move(wts)};
}

QuadratureRule gauss_lobatto(int n) {
  SOFTFEM_THROW_IF(n < 2, invalid_argument,
                   "gauss_lobatto: need n >= 2, got " + std::to_string(n));
  const int deg = n - 1; // interior nodes are the roots of P'_deg
  std::vector<double> pts(n), wts(n);
  const double end_weight = 2.0 / (deg * (deg + 1.0));
  pts[0] = -1.0;
  wts[0] = end_weight;
  for (int k = 1; k < (n + 1) / 2; ++k) {
    double x = -std::cos(std::numbers::pi * k / deg);
    for (int it = 0; it < kNewtonMaxIter; ++it) {
      const auto [p, pm1] = legendre(deg, x);
      const double dp = deg * (x * p - pm1) / (x * x - 1.0);
      const double d2p = (2.0 * x * dp - deg * (deg + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / d2p;
      x -= dx;
      if (std::abs(dx) <= kNewtonTol) break;
    }
    const double p = legendre(deg, x).p;
    pts[k] = x;
    wts[k] = end_weight / (p * p);
  }
  mirror(pts, wts);
  if (n % 2 == 1) {
    const double p = legendre(deg, 0.0).p;
    wts[n / 2] = end_weight / (p * p);
  }
  return {QuadratureFamily::gauss_lobatto, std::move(pts), std::move(wts)};
}

QuadratureRule make_rule(QuadratureFamily family, int n) {
  return family == QuadratureFamily::gauss_legendre ? gauss_legendre(n) : gauss_lobatto(n);
}

} // namespace softfem
