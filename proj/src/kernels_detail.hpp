#pragma once

// Row-level primitives shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "softfem/kernels.hpp"

namespace softfem::kernels::detail {

/// row_i <- (row_i - sum_k L(i,k) row_k) / L(i,i) on columns [c0, c1).
inline void forward_row(const BandedLower& l, DenseMatrix& a, std::size_t i, std::size_t c0, std::size_t c1) {
  const double* li = l.data.data() + i * (l.bw + 1);
  double* ri = a.row(i);
  const std::size_t dmax = std::min(l.bw, i);
  for (std::size_t d = dmax; d >= 1; --d) {
    const double f = li[d];
    if (f == 0.0) continue;
    const double* rk = a.row(i - d);
    for (std::size_t c = c0; c < c1; ++c) ri[c] -= f * rk[c];
  }
  const double inv = 1.0 / li[0];
  for (std::size_t c = c0; c < c1; ++c) ri[c] *= inv;
}

inline void transpose_in_place(DenseMatrix& a) {
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < i; ++j) std::swap(a(i, j), a(j, i));
}

inline void symmetrize(DenseMatrix& a) {
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
}

/// Solve L^T x = y in place for one row vector y.
inline void backward_solve(const BandedLower& l, double* y) {
  const std::size_t n = l.n;
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    const std::size_t kmax = std::min(n - 1, ii + l.bw);
    for (std::size_t k = ii + 1; k <= kmax; ++k) s -= l.data[k * (l.bw + 1) + (k - ii)] * y[k];
    y[ii] = s / l.data[ii * (l.bw + 1)];
  }
}

/// Householder vector for x = a(k+1.., k). Writes v into the same slots and
/// returns beta; `alpha` receives the new subdiagonal entry.
inline double householder(DenseMatrix& a, std::size_t k, double& alpha) {
  const std::size_t n = a.n;
  const double x0 = a(k + 1, k);
  double sigma = 0.0;
  for (std::size_t i = k + 2; i < n; ++i) sigma += a(i, k) * a(i, k);
  if (sigma == 0.0) {
    alpha = x0;
    a(k + 1, k) = 0.0;
    return 0.0;
  }
  const double mu = std::sqrt(x0 * x0 + sigma);
  alpha = x0 <= 0.0 ? mu : -mu;
  const double v0 = x0 - alpha;
  a(k + 1, k) = v0;
  return 2.0 / (v0 * v0 + sigma);
}

/// Lower-triangle symmetric product contribution of rows [r0, r1) of the
/// trailing block starting at `off`: y += A v restricted to those rows.
/// `y` has length n - off and `v` likewise.
inline void sym_matvec_rows(const DenseMatrix& a, std::size_t off, const double* v, double* y,
                            std::size_t r0, std::size_t r1) {
  for (std::size_t r = r0; r < r1; ++r) {
    const double* row = a.row(off + r) + off;
    const double vr = v[r];
    double s = 0.0;
    for (std::size_t c = 0; c < r; ++c) {
      s += row[c] * v[c];
      y[c] += row[c] * vr;
    }
    y[r] += s + row[r] * vr;
  }
}

/// A22 -= v w^T + w v^T on rows [r0, r1) of the lower triangle.
inline void rank2_rows(DenseMatrix& a, std::size_t off, const double* v, const double* w, std::size_t r0,
                       std::size_t r1) {
  for (std::size_t r = r0; r < r1; ++r) {
    double* row = a.row(off + r) + off;
    const double vr = v[r];
    const double wr = w[r];
    for (std::size_t c = 0; c <= r; ++c) row[c] -= vr * w[c] + wr * v[c];
  }
}

inline void finish_tridiagonal(const DenseMatrix& a, Tridiagonal& t) {
  const std::size_t n = a.n;
  if (n >= 2) {
    t.diag[n - 2] = a(n - 2, n - 2);
    t.off[n - 2] = a(n - 1, n - 2);
  }
  if (n >= 1) t.diag[n - 1] = a(n - 1, n - 1);
}

} // namespace softfem::kernels::detail
