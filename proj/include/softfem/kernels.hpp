#pragma once

// Dense kernels behind the generalized eigensolver.
//
// Every O(n^3) kernel comes in two flavours with identical contracts:
// `serial` is the reference implementation the tests compare against and
// `omp` distributes the same arithmetic over OpenMP threads. The `omp`
// variants assign each output entry to exactly one thread, so results are
// bitwise reproducible for a fixed thread count.

#include <cstddef>
#include <vector>

#include "softfem/symmetric_matrix.hpp"

namespace softfem::kernels {

enum class Execution { serial, parallel };

/// Row-major n x n matrix.
struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t order) : n(order), a(order * order, 0.0) {}
  DenseMatrix(std::size_t order, std::vector<double> values) : n(order), a(std::move(values)) {}

  double* row(std::size_t i) { return a.data() + i * n; }
  [[nodiscard]] const double* row(std::size_t i) const { return a.data() + i * n; }
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// Lower-triangular band factor L with L(i, i - d) stored for d = 0..bw.
struct BandedLower {
  std::size_t n = 0;
  std::size_t bw = 0;
  std::vector<double> data;

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
    return i - j > bw ? 0.0 : data[i * (bw + 1) + (i - j)];
  }
};

/// Band Cholesky B = L L^T. Returns the first row with a non-positive pivot,
/// or -1 on success.
long cholesky_banded(const SymmetricMatrix& b, BandedLower& l);

/// Tridiagonal T: diag[0..n), off[k] couples k and k+1, off[n-1] = 0.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

/// Implicit-shift QL with Wilkinson shifts on T. Eigenvalues overwrite diag.
/// If `zt` is non-null its rows are rotated alongside (row r = vector r).
/// Returns false when more than 50 n sweeps were needed in total.
bool ql_implicit(Tridiagonal& t, DenseMatrix* zt);

namespace serial {

/// a <- L^{-1} a L^{-T}, a symmetric and dense on entry and exit.
void reduce_to_standard(const BandedLower& l, DenseMatrix& a);

/// Householder reduction of the symmetric matrix a (lower triangle used).
/// The reflectors are left in the strict lower part of a together with
/// their scalings in `betas`.
Tridiagonal tridiagonalize(DenseMatrix& a, std::vector<double>& betas);

/// Q^T of the Householder reduction, built from the reflectors left in a.
DenseMatrix accumulate_qt(const DenseMatrix& reflectors, const std::vector<double>& betas);

/// Each row y of `rows` is replaced by L^{-T} y.
void back_transform(const BandedLower& l, DenseMatrix& rows);

} // namespace serial

namespace omp {

void reduce_to_standard(const BandedLower& l, DenseMatrix& a);
Tridiagonal tridiagonalize(DenseMatrix& a, std::vector<double>& betas);
DenseMatrix accumulate_qt(const DenseMatrix& reflectors, const std::vector<double>& betas);
void back_transform(const BandedLower& l, DenseMatrix& rows);

} // namespace omp

} // namespace softfem::kernels
