#include "softfem/eigensolve.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "softfem/error.hpp"

namespace softfem {

using kernels::DenseMatrix;
using kernels::Execution;

Spectrum solve_gevp(const SymmetricSystem& system, const SolveOptions& options) {
  return solve_gevp(system.a, system.b, options, system.description);
}

Spectrum solve_gevp(const SymmetricMatrix& a, const SymmetricMatrix& b, const SolveOptions& options,
                    const std::string& label) {
  SOFTFEM_THROW_IF(a.order() != b.order(), invalid_argument, "solve_gevp: order mismatch");
  const std::size_t n = a.order();
  const bool par = options.exec == Execution::parallel;
  Spectrum out;

  kernels::BandedLower l;
  const long bad = kernels::cholesky_banded(b, l);
  SOFTFEM_THROW_IF(bad >= 0, not_positive_definite,
                   "mass matrix not positive definite (pivot " + std::to_string(bad) + ") for " + label);
  out.diagnostics.cholesky_ok = true;

  DenseMatrix c(n, a.to_dense());
  if (par) kernels::omp::reduce_to_standard(l, c);
  else kernels::serial::reduce_to_standard(l, c);
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += c(i, i);

  std::vector<double> betas;
  auto t = par ? kernels::omp::tridiagonalize(c, betas) : kernels::serial::tridiagonalize(c, betas);
  DenseMatrix zt;
  if (options.want_vectors) {
    zt = par ? kernels::omp::accumulate_qt(c, betas) : kernels::serial::accumulate_qt(c, betas);
  }
  c = DenseMatrix();
  SOFTFEM_THROW_IF(!kernels::ql_implicit(t, options.want_vectors ? &zt : nullptr), numerical_failure,
                   "QL iteration did not converge for " + label);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return t.diag[i] < t.diag[j]; });
  out.eigenvalues.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.eigenvalues[j] = t.diag[order[j]];

  double abs_sum = 0.0;
  for (double v : out.eigenvalues) abs_sum += std::abs(v);
  const double sum = std::accumulate(out.eigenvalues.begin(), out.eigenvalues.end(), 0.0);
  out.diagnostics.trace_error = abs_sum > 0.0 ? std::abs(sum - trace) / abs_sum : 0.0;

  if (options.want_vectors) {
    if (par) kernels::omp::back_transform(l, zt);
    else kernels::serial::back_transform(l, zt);
    DenseMatrix sorted(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double* src = zt.row(order[j]);
      std::size_t imax = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (std::abs(src[i]) > std::abs(src[imax])) imax = i;
      const double sign = src[imax] < 0.0 ? -1.0 : 1.0;
      double* dst = sorted.row(j);
      for (std::size_t i = 0; i < n; ++i) dst[i] = sign * src[i];
    }
    out.vectors = std::move(sorted);
    out.diagnostics.max_residual = rayleigh_residuals(a, b, out);
    out.diagnostics.orthonormality_error = b_orthonormality_error(b, out);
  }
  return out;
}

double rayleigh_residuals(const SymmetricMatrix& a, const SymmetricMatrix& b, const Spectrum& spectrum) {
  SOFTFEM_THROW_IF(!spectrum.has_vectors(), invalid_argument, "rayleigh_residuals: spectrum has no vectors");
  SOFTFEM_THROW_IF(spectrum.vectors.n != a.order(), invalid_argument, "rayleigh_residuals: size mismatch");
  const std::size_t n = a.order();
  const double na = a.frobenius_norm();
  const double nb = b.frobenius_norm();
  std::vector<double> ax(n), bx(n);
  double worst = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    const auto x = spectrum.vector(j);
    const double lam = spectrum.eigenvalues[j];
    a.multiply(x, ax);
    b.multiply(x, bx);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r += (ax[i] - lam * bx[i]) * (ax[i] - lam * bx[i]);
    worst = std::max(worst, std::sqrt(r) / (na + std::abs(lam) * nb));
  }
  return worst;
}

double b_orthonormality_error(const SymmetricMatrix& b, const Spectrum& spectrum) {
  const std::size_t n = spectrum.vectors.n;
  const std::size_t m = spectrum.size();
  DenseMatrix bx(m == n ? n : 0);
  if (m != n) return std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j < m; ++j) b.multiply(spectrum.vector(j), std::span<double>(bx.row(j), n));
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* xi = spectrum.vectors.row(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const double* bj = bx.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += xi[k] * bj[k];
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

} // namespace softfem

namespace softfem {

namespace {

// LU with partial pivoting of a band matrix with half-bandwidth bw
// (row interchanges only touch the not-yet-eliminated columns).
class BandLU {
public:
  BandLU(const SymmetricMatrix& a, const SymmetricMatrix& b, double shift)
      : n_(a.order()), kl_(std::max(a.half_bandwidth(), b.half_bandwidth())), width_(3 * kl_ + 1),
        g_(n_ * width_, 0.0), mult_(n_ * kl_, 0.0), piv_(n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j0 = i > kl_ ? i - kl_ : 0;
      const std::size_t j1 = std::min(n_ - 1, i + kl_);
      for (std::size_t j = j0; j <= j1; ++j) at(i, j) = a(i, j) - shift * b(i, j);
    }
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t rmax = std::min(n_ - 1, k + kl_);
      std::size_t piv = k;
      for (std::size_t r = k + 1; r <= rmax; ++r)
        if (std::abs(at(r, k)) > std::abs(at(piv, k))) piv = r;
      piv_[k] = piv;
      const std::size_t jmax = std::min(n_ - 1, k + 2 * kl_);
      if (piv != k)
        for (std::size_t j = k; j <= jmax; ++j) std::swap(at(k, j), at(piv, j));
      double pivot = at(k, k);
      if (pivot == 0.0) pivot = at(k, k) = 1e-300;
      for (std::size_t r = k + 1; r <= rmax; ++r) {
        const double f = at(r, k) / pivot;
        mult_[k * kl_ + (r - k - 1)] = f;
        at(r, k) = 0.0;
        if (f == 0.0) continue;
        for (std::size_t j = k + 1; j <= jmax; ++j) at(r, j) -= f * at(k, j);
      }
    }
  }

  void solve(std::vector<double>& x) const {
    for (std::size_t k = 0; k < n_; ++k) {
      std::swap(x[k], x[piv_[k]]);
      const std::size_t rmax = std::min(n_ - 1, k + kl_);
      for (std::size_t r = k + 1; r <= rmax; ++r) x[r] -= mult_[k * kl_ + (r - k - 1)] * x[k];
    }
    for (std::size_t i = n_; i-- > 0;) {
      double s = x[i];
      const std::size_t jmax = std::min(n_ - 1, i + 2 * kl_);
      for (std::size_t j = i + 1; j <= jmax; ++j) s -= at(i, j) * x[j];
      x[i] = s / at(i, i);
    }
  }

private:
  double& at(std::size_t i, std::size_t j) { return g_[i * width_ + (j + kl_ - i)]; }
  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return g_[i * width_ + (j + kl_ - i)]; }

  std::size_t n_, kl_, width_;
  std::vector<double> g_;
  std::vector<double> mult_;
  std::vector<std::size_t> piv_;
};

} // namespace

std::vector<double> refine_lowest_eigenvalues(const SymmetricMatrix& a, const SymmetricMatrix& b,
                                              std::span<const double> approx, std::size_t count) {
  const std::size_t n = a.order();
  std::vector<double> out(approx.begin(), approx.end());
  count = std::min(count, out.size());
  const double scale = std::abs(out.empty() ? 0.0 : out.back());
  std::mt19937_64 rng(20240531);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> x(n), bx(n);
  for (std::size_t j = 0; j < count; ++j) {
    const double sigma = approx[j];
    const BandLU lu(a, b, sigma);
    for (double& v : x) v = uni(rng);
    for (int it = 0; it < 3; ++it) {
      b.multiply(x, bx);
      lu.solve(bx);
      x = bx;
      const double norm = std::sqrt(b.quadratic_form(x));
      if (!(norm > 0.0) || !std::isfinite(norm)) break;
      for (double& v : x) v /= norm;
    }
    const double rq = a.quadratic_form(x) / b.quadratic_form(x);
    // Accept only corrections within the dense solver's error budget.
    if (std::isfinite(rq) && std::abs(rq - sigma) <= 1e-10 * scale + 1e-12 * std::abs(sigma)) out[j] = rq;
  }
  return out;
}

double lowest_eigenvalue(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  SOFTFEM_THROW_IF(a.order() != b.order() || a.order() == 0, invalid_argument, "lowest_eigenvalue: bad orders");
  kernels::BandedLower la;
  if (kernels::cholesky_banded(a, la) >= 0) {
    const Spectrum sp = solve_gevp(a, b, {.want_vectors = false});
    return refine_lowest_eigenvalues(a, b, sp.eigenvalues, 1).front();
  }
  // All eigenvalues are positive, so the one nearest zero is the smallest.
  const std::size_t n = a.order();
  const BandLU lu(a, b, 0.0);
  std::mt19937_64 rng(20240531);
  std::uniform_real_distribution<double> uni(0.5, 1.0);
  std::vector<double> x(n), bx(n);
  for (double& v : x) v = uni(rng);
  double lambda = a.quadratic_form(x) / b.quadratic_form(x);
  for (int it = 0; it < 1000; ++it) {
    b.multiply(x, bx);
    lu.solve(bx);
    x.swap(bx);
    const double norm = std::sqrt(b.quadratic_form(x));
    SOFTFEM_THROW_IF(!(norm > 0.0) || !std::isfinite(norm), numerical_failure,
                     "lowest_eigenvalue: inverse iteration broke down");
    for (double& v : x) v /= norm;
    const double next = a.quadratic_form(x);
    const bool done = std::abs(next - lambda) <= 1e-15 * std::abs(next);
    lambda = next;
    if (done && it > 2) break;
  }
  return lambda;
}

} // namespace softfem
