#pragma once

#include <cstddef>
#include <vector>

namespace softfem {

enum class QuadratureFamily { gauss_legendre, gauss_lobatto };

/// Rule on the reference interval [-1, 1]. Points are strictly increasing.
struct QuadratureRule {
  QuadratureFamily family;
  std::vector<double> points;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return points.size(); }

  /// Highest monomial degree integrated exactly.
  [[nodiscard]] int exactness_degree() const noexcept;

  /// Sum of weights[q] * f(points[q]).
  template <class F>
  [[nodiscard]] double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t q = 0; q < points.size(); ++q) sum += weights[q] * f(points[q]);
    return sum;
  }
};

/// n-point Gauss-Legendre rule, n >= 1.
QuadratureRule gauss_legendre(int n);

/// n-point Gauss-Lobatto rule (both endpoints included), n >= 2.
QuadratureRule gauss_lobatto(int n);

QuadratureRule make_rule(QuadratureFamily family, int n);

} // namespace softfem
