#include <algorithm>
#include <cmath>
#include <vector>

#include "kernels_detail.hpp"
#include "softfem/kernels.hpp"

namespace softfem::kernels {

long cholesky_banded(const SymmetricMatrix& b, BandedLower& l) {
  const std::size_t n = b.order();
  const std::size_t bw = b.half_bandwidth();
  l.n = n;
  l.bw = bw;
  l.data.assign(n * (bw + 1), 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return l.data[i * (bw + 1) + (i - j)]; };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j0 = i > bw ? i - bw : 0;
    for (std::size_t j = j0; j <= i; ++j) {
      double s = b(i, j);
      for (std::size_t k = j0; k < j; ++k) s -= at(i, k) * at(j, k);
      if (j == i) {
        if (!(s > 0.0) || !std::isfinite(s)) return static_cast<long>(i);
        at(i, i) = std::sqrt(s);
      } else {
        at(i, j) = s / at(j, j);
      }
    }
  }
  return -1;
}

bool ql_implicit(Tridiagonal& t, DenseMatrix* zt) {
  auto& d = t.diag;
  auto& e = t.off;
  const std::size_t n = d.size();
  if (n == 0) return true;
  e[n - 1] = 0.0;
  constexpr double eps = 2.2e-16;
  const std::size_t max_sweeps = 50 * n;
  std::size_t sweeps = 0;
  for (std::size_t l = 0; l < n; ++l) {
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m)
        if (std::abs(e[m]) <= eps * (std::abs(d[m]) + std::abs(d[m + 1]))) break;
      if (m == l) break;
      if (++sweeps > max_sweeps) return false;
      // Wilkinson shift from the leading 2x2 block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double bb = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * bb;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - bb;
        if (zt != nullptr) {
          double* zi = zt->row(i);
          double* zj = zt->row(i + 1);
          for (std::size_t k = 0; k < zt->n; ++k) {
            const double fz = zj[k];
            zj[k] = s * zi[k] + c * fz;
            zi[k] = c * zi[k] - s * fz;
          }
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  return true;
}

namespace serial {

void reduce_to_standard(const BandedLower& l, DenseMatrix& a) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < a.n; ++i) detail::forward_row(l, a, i, 0, a.n);
    detail::transpose_in_place(a);
  }
  detail::symmetrize(a);
}

Tridiagonal tridiagonalize(DenseMatrix& a, std::vector<double>& betas) {
  const std::size_t n = a.n;
  Tridiagonal t{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  betas.assign(n, 0.0);
  std::vector<double> v(n), y(n);
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
    std::fill(y.begin(), y.begin() + m, 0.0);
    detail::sym_matvec_rows(a, off, v.data(), y.data(), 0, m);
    double vp = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      y[i] *= beta;
      vp += y[i] * v[i];
    }
    const double half = 0.5 * beta * vp;
    for (std::size_t i = 0; i < m; ++i) y[i] -= half * v[i];
    detail::rank2_rows(a, off, v.data(), y.data(), 0, m);
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
  for (std::size_t r = 0; r < rows.n; ++r) detail::backward_solve(l, rows.row(r));
}

} // namespace serial
} // namespace softfem::kernels
