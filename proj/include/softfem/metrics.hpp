#pragma once

#include <optional>
#include <span>
#include <vector>

#include "softfem/eigensolve.hpp"
#include "softfem/mesh.hpp"
#include "softfem/oracle.hpp"

namespace softfem {

/// Signed (computed - exact) / exact over the common prefix of both lists.
std::vector<double> eigenvalue_errors(std::span<const double> computed, std::span<const double> exact);
std::vector<double> eigenvalue_errors(std::span<const double> computed, const std::vector<ExactEigenpair>& exact);

/// Per-index eigenfunction errors; std::nullopt marks a skipped multiple eigenvalue.
struct EigenfunctionErrors {
  std::vector<std::optional<double>> l2;
  /// |u - u_h|_{H1} divided by the exact eigenvalue.
  std::vector<std::optional<double>> h1;
};

/// Expands each eigenvector in the nodal basis, normalizes it in L2 with the
/// consistent mass, aligns its sign with the exact eigenfunction and
/// integrates the errors with a (p + 3)-point Gauss-Legendre rule per element.
/// `count` limits the number of indices (0 means all available).
EigenfunctionErrors eigenfunction_errors(const Spectrum& spectrum, const std::vector<ExactEigenpair>& exact,
                                         const Mesh1D& mesh, int p, std::size_t count = 0);

struct StiffnessReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double sigma = 0.0;
};

/// sigma = lambda_max / lambda_min; throws indefinite_system when lambda_min <= 0.
StiffnessReport condition_number(std::span<const double> eigenvalues);

struct ReductionRatio {
  double rho = 1.0;
  /// Percentage 100 (1 - 1 / rho).
  double percent = 0.0;
};

ReductionRatio reduction_ratios(const StiffnessReport& base, const StiffnessReport& other);

struct OrderFit {
  double slope = 0.0;
  std::size_t points_used = 0;
  /// Entries dropped because they sat at the rounding floor.
  std::size_t points_dropped = 0;
};

/// Least-squares slope of log(error) against log(h). Errors at or below
/// `floor` are dropped; other non-positive errors are invalid. At least three
/// points must remain.
OrderFit fit_order(std::span<const double> h, std::span<const double> errors, double floor = 1e-13);

} // namespace softfem
