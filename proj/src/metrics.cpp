#include "softfem/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "softfem/assembly.hpp"
#include "softfem/element.hpp"
#include "softfem/error.hpp"
#include "softfem/quadrature.hpp"

namespace softfem {

std::vector<double> eigenvalue_errors(std::span<const double> computed, std::span<const double> exact) {
  const std::size_t n = std::min(computed.size(), exact.size());
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    SOFTFEM_THROW_IF(exact[j] == 0.0, invalid_argument, "eigenvalue_errors: zero reference eigenvalue");
    out[j] = (computed[j] - exact[j]) / exact[j];
  }
  return out;
}

std::vector<double> eigenvalue_errors(std::span<const double> computed, const std::vector<ExactEigenpair>& exact) {
  std::vector<double> values;
  values.reserve(exact.size());
  for (const auto& e : exact) values.push_back(e.lambda);
  return eigenvalue_errors(computed, values);
}

EigenfunctionErrors eigenfunction_errors(const Spectrum& spectrum, const std::vector<ExactEigenpair>& exact,
                                         const Mesh1D& mesh, int p, std::size_t count) {
  SOFTFEM_THROW_IF(!spectrum.has_vectors(), invalid_argument, "eigenfunction_errors: spectrum has no vectors");
  const DofMap map = dof_map(mesh, p);
  SOFTFEM_THROW_IF(map.num_dofs != spectrum.vectors.n, invalid_argument,
                   "eigenfunction_errors: spectrum does not match the mesh and degree");
  std::size_t n = std::min(spectrum.size(), exact.size());
  if (count != 0) n = std::min(n, count);

  const ReferenceElement el(p);
  const QuadratureRule rule = gauss_legendre(p + 3);
  const BasisTable phi = el.eval_basis(rule.points);
  const BasisTable dphi = el.eval_basis_deriv(rule.points);
  const SymmetricMatrix mass = assemble_mass(mesh, p, QuadratureFamily::gauss_legendre);
  const auto& lam = spectrum.eigenvalues;

  EigenfunctionErrors out;
  out.l2.resize(n);
  out.h1.resize(n);
  std::vector<double> uh(rule.size()), duh(rule.size());
  for (std::size_t j = 0; j < n; ++j) {
    const double gap_tol = 1e-8 * std::abs(lam[j]);
    const bool multiple = (j > 0 && std::abs(lam[j] - lam[j - 1]) < gap_tol) ||
                          (j + 1 < lam.size() && std::abs(lam[j + 1] - lam[j]) < gap_tol);
    if (multiple) continue;

    const auto x = spectrum.vector(j);
    const double norm = std::sqrt(mass.quadratic_form(x));
    const ExactEigenpair& u = exact[j];

    // First pass: sign alignment; second pass: errors.
    double inner = 0.0, l2 = 0.0, h1 = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      const double sign = inner < 0.0 ? -1.0 : 1.0;
      for (int e = 0; e < mesh.num_elements(); ++e) {
        const double h = mesh.size(e), xl = mesh.left(e);
        std::fill(uh.begin(), uh.end(), 0.0);
        std::fill(duh.begin(), duh.end(), 0.0);
        for (int a = 0; a <= p; ++a) {
          const auto g = map(e, a);
          if (g == kEliminated) continue;
          const double c = sign * x[g] / norm;
          for (std::size_t q = 0; q < rule.size(); ++q) {
            uh[q] += c * phi(a, int(q));
            duh[q] += c * dphi(a, int(q)) * 2.0 / h;
          }
        }
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const double xq = xl + 0.5 * h * (rule.points[q] + 1.0);
          const double w = rule.weights[q] * 0.5 * h;
          if (pass == 0) {
            inner += w * uh[q] * u.value(xq);
          } else {
            const double d0 = u.value(xq) - uh[q], d1 = u.derivative(xq) - duh[q];
            l2 += w * d0 * d0;
            h1 += w * d1 * d1;
          }
        }
      }
    }
    out.l2[j] = std::sqrt(l2);
    out.h1[j] = std::sqrt(h1) / u.lambda;
  }
  return out;
}

StiffnessReport condition_number(std::span<const double> eigenvalues) {
  SOFTFEM_THROW_IF(eigenvalues.empty(), invalid_argument, "condition_number: empty spectrum");
  const auto [lo, hi] = std::minmax_element(eigenvalues.begin(), eigenvalues.end());
  SOFTFEM_THROW_IF(!(*lo > 0.0), indefinite_system,
                   "condition_number: smallest eigenvalue " + std::to_string(*lo) + " is not positive");
  return {*lo, *hi, *hi / *lo};
}

ReductionRatio reduction_ratios(const StiffnessReport& base, const StiffnessReport& other) {
  const double rho = base.sigma / other.sigma;
  return {rho, 100.0 * (1.0 - 1.0 / rho)};
}

OrderFit fit_order(std::span<const double> h, std::span<const double> errors, double floor) {
  SOFTFEM_THROW_IF(h.size() != errors.size(), invalid_argument, "fit_order: size mismatch");
  OrderFit out;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    SOFTFEM_THROW_IF(!(h[i] > 0.0), invalid_argument, "fit_order: mesh sizes must be positive");
    if (std::abs(errors[i]) <= floor) {
      ++out.points_dropped;
      continue;
    }
    SOFTFEM_THROW_IF(!(errors[i] > 0.0), invalid_argument, "fit_order: errors must be positive");
    const double x = std::log(h[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++out.points_used;
  }
  SOFTFEM_THROW_IF(out.points_used < 3, invalid_argument, "fit_order: fewer than three usable points");
  const double n = double(out.points_used);
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

} // namespace softfem
