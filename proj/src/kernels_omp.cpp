#include <omp.h>

#include <algorithm>
#include <vector>

#include "kernels_detail.hpp"
#include "softfem/kernels.hpp"

namespace softfem::kernels::omp {

namespace {

struct Range {
  std::size_t lo, hi;
};

Range split(std::size_t count, int parts, int index) {
  const std::size_t chunk = count / parts;
  const std::size_t rem = count % parts;
  const std::size_t lo = index * chunk + std::min<std::size_t>(index, rem);
  return {lo, lo + chunk + (static_cast<std::size_t>(index) < rem ? 1 : 0)};
}

// Row split of a lower triangle of order m into `parts` pieces of similar area.
Range split_triangle(std::size_t m, int parts, int index) {
  auto boundary = [&](int k) -> std::size_t {
    if (k >= parts) return m;
    const double frac = static_cast<double>(k) / parts;
    return static_cast<std::size_t>(static_cast<double>(m) * std::sqrt(frac));
  };
  return {boundary(index), boundary(index + 1)};
}

} // namespace

void reduce_to_standard(const BandedLower& l, DenseMatrix& a) {
  for (int pass = 0; pass < 2; ++pass) {
#pragma omp parallel
    {
      const auto [c0, c1] = split(a.n, omp_get_num_threads(), omp_get_thread_num());
      for (std::size_t i = 0; i < a.n; ++i) detail::forward_row(l, a, i, c0, c1);
    }
    detail::transpose_in_place(a);
  }
  detail::symmetrize(a);
}

Tridiagonal tridiagonalize(DenseMatrix& a, std::vector<double>& betas) {
  const std::size_t n = a.n;
  Tridiagonal t{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  betas.assign(n, 0.0);
  std::vector<double> v(n), y(n);
  const int nthreads = omp_get_max_threads();
  std::vector<std::vector<double>> partial(nthreads, std::vector<double>(n));
  for (std::size_t k = 0; k + 2 < n; ++k) {
    t.diag[k] = a(k, k);
    double alpha = 0.0;
    const double beta = detail::householder(a, k, alpha);
    t.off[k] = alpha;
    betas[k] = beta;
    if (beta == 0.0) continue;
    const std::size_t off = k + 1;
    const std::size_t m = n - off;
    for (std::size_t i = 0; i < m; ++i) v[i] = a(off + i, k);
#pragma omp parallel num_threads(nthreads)
    {
      const int tid = omp_get_thread_num();
      const int nt = omp_get_num_threads();
      double* yp = partial[tid].data();
      std::fill(yp, yp + m, 0.0);
      const auto [r0, r1] = split_triangle(m, nt, tid);
      detail::sym_matvec_rows(a, off, v.data(), yp, r0, r1);
#pragma omp barrier
      // Fixed-order reduction of the partial products.
      const auto [c0, c1] = split(m, nt, tid);
      for (std::size_t c = c0; c < c1; ++c) {
        double s = 0.0;
        for (int p = 0; p < nt; ++p) s += partial[p][c];
        y[c] = s * beta;
      }
    }
    double vp = 0.0;
    for (std::size_t i = 0; i < m; ++i) vp += y[i] * v[i];
    const double half = 0.5 * beta * vp;
    for (std::size_t i = 0; i < m; ++i) y[i] -= half * v[i];
#pragma omp parallel num_threads(nthreads)
    {
      const auto [r0, r1] = split_triangle(m, omp_get_num_threads(), omp_get_thread_num());
      detail::rank2_rows(a, off, v.data(), y.data(), r0, r1);
    }
  }
  detail::finish_tridiagonal(a, t);
  return t;
}

DenseMatrix accumulate_qt(const DenseMatrix& reflectors, const std::vector<double>& betas) {
  const std::size_t n = reflectors.n;
  DenseMatrix q(n);
  for (std::size_t i = 0; i < n; ++i) q(i, i) = 1.0;
  std::vector<double> v(n);
  for (std::size_t k = n >= 3 ? n - 2 : 0; k-- > 0;) {
    const double beta = betas[k];
    if (beta == 0.0) continue;
    const std::size_t off = k + 1;
    const std::size_t m = n - off;
    for (std::size_t i = 0; i < m; ++i) v[i] = reflectors(off + i, k);
#pragma omp parallel for schedule(static)
    for (std::size_t r = off; r < n; ++r) {
      double* row = q.row(r) + off;
      double s = 0.0;
      for (std::size_t c = 0; c < m; ++c) s += row[c] * v[c];
      s *= beta;
      for (std::size_t c = 0; c < m; ++c) row[c] -= s * v[c];
    }
  }
  return q;
}

void back_transform(const BandedLower& l, DenseMatrix& rows) {
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < rows.n; ++r) detail::backward_solve(l, rows.row(r));
}

} // namespace softfem::kernels::omp
