#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "softfem/assembly.hpp"
#include "softfem/kernels.hpp"

namespace softfem {

struct SolveOptions {
  bool want_vectors = true;
  kernels::Execution exec = kernels::Execution::serial;
};

struct SolverDiagnostics {
  bool cholesky_ok = false;
  /// max_j ||A x_j - l_j B x_j|| / (||A||_F + |l_j| ||B||_F); NaN without vectors.
  double max_residual = std::numeric_limits<double>::quiet_NaN();
  /// max |X^T B X - I|; NaN without vectors.
  double orthonormality_error = std::numeric_limits<double>::quiet_NaN();
  /// |sum l_j - trace(L^-1 A L^-T)| / sum |l_j|.
  double trace_error = 0.0;
};

/// Ascending eigenvalues; row j of `vectors` is the B-orthonormal eigenvector j.
struct Spectrum {
  std::vector<double> eigenvalues;
  kernels::DenseMatrix vectors;
  SolverDiagnostics diagnostics;

  [[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }
  [[nodiscard]] bool has_vectors() const noexcept { return vectors.n != 0; }
  [[nodiscard]] std::span<const double> vector(std::size_t j) const {
    return {vectors.row(j), vectors.n};
  }
};

/// All eigenpairs of A x = lambda B x: band Cholesky of B, reduction to
/// standard form, Householder tridiagonalization, implicit QL and back
/// transformation. Eigenvector signs are canonical (largest entry positive).
Spectrum solve_gevp(const SymmetricSystem& system, const SolveOptions& options = {});
Spectrum solve_gevp(const SymmetricMatrix& a, const SymmetricMatrix& b, const SolveOptions& options = {},
                    const std::string& label = "system");

/// Sharpens the lowest `count` eigenvalues of an eigenvalue-only solve by
/// shifted inverse iteration on the banded pencil followed by a Rayleigh
/// quotient. The dense reduction bounds the absolute error by about
/// eps * lambda_max; this removes that floor for the low end of the spectrum.
/// Values whose refinement does not settle near the input are kept as is.
std::vector<double> refine_lowest_eigenvalues(const SymmetricMatrix& a, const SymmetricMatrix& b,
                                              std::span<const double> approx, std::size_t count);

/// Smallest eigenvalue. When A is positive definite this is inverse
/// iteration without shift (no dense reduction); otherwise the full solve
/// followed by refinement.
double lowest_eigenvalue(const SymmetricMatrix& a, const SymmetricMatrix& b);

double rayleigh_residuals(const SymmetricMatrix& a, const SymmetricMatrix& b, const Spectrum& spectrum);
inline double rayleigh_residuals(const SymmetricSystem& s, const Spectrum& spectrum) {
  return rayleigh_residuals(s.a, s.b, spectrum);
}
double b_orthonormality_error(const SymmetricMatrix& b, const Spectrum& spectrum);

} // namespace softfem
