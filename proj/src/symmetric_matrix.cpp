#include "softfem/symmetric_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "softfem/error.hpp"

namespace softfem {

SymmetricMatrix::SymmetricMatrix(std::size_t order, std::size_t half_bandwidth)
    : n_(order), bw_(order == 0 ? 0 : std::min(half_bandwidth, order - 1)),
      data_(order * (bw_ + 1), 0.0) {}

double SymmetricMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  const std::size_t d = i - j;
  return d > bw_ ? 0.0 : data_[i * (bw_ + 1) + d];
}

void SymmetricMatrix::add(std::size_t i, std::size_t j, double v) {
  if (i < j) std::swap(i, j);
  const std::size_t d = i - j;
  SOFTFEM_THROW_IF(i >= n_ || d > bw_, invalid_argument,
                   "SymmetricMatrix::add: entry (" + std::to_string(i) + ", " + std::to_string(j) +
                       ") outside band " + std::to_string(bw_));
  data_[i * (bw_ + 1) + d] += v;
}

void SymmetricMatrix::set(std::size_t i, std::size_t j, double v) {
  if (i < j) std::swap(i, j);
  const std::size_t d = i - j;
  SOFTFEM_THROW_IF(i >= n_ || d > bw_, invalid_argument, "SymmetricMatrix::set: entry outside band");
  data_[i * (bw_ + 1) + d] = v;
}

SymmetricMatrix SymmetricMatrix::plus(const SymmetricMatrix& other, double scale) const {
  SOFTFEM_THROW_IF(other.n_ != n_, invalid_argument, "SymmetricMatrix::plus: order mismatch");
  SymmetricMatrix out(n_, std::max(bw_, other.bw_));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t d = 0; d <= std::min(bw_, i); ++d) out.data_[i * (out.bw_ + 1) + d] += data_[i * (bw_ + 1) + d];
    if (scale != 0.0)
      for (std::size_t d = 0; d <= std::min(other.bw_, i); ++d)
        out.data_[i * (out.bw_ + 1) + d] += scale * other.data_[i * (other.bw_ + 1) + d];
  }
  return out;
}

SymmetricMatrix SymmetricMatrix::scaled(double s) const {
  SymmetricMatrix out = *this;
  for (double& v : out.data_) v *= s;
  return out;
}

void SymmetricMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = band_row(i);
    double s = row[0] * x[i];
    const std::size_t dmax = std::min(bw_, i);
    for (std::size_t d = 1; d <= dmax; ++d) {
      s += row[d] * x[i - d];
      y[i - d] += row[d] * x[i];
    }
    y[i] += s;
  }
}

std::vector<double> SymmetricMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

double SymmetricMatrix::quadratic_form(std::span<const double> x) const {
  const auto y = multiply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += x[i] * y[i];
  return s;
}

double SymmetricMatrix::frobenius_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = band_row(i);
    s += row[0] * row[0];
    for (std::size_t d = 1; d <= std::min(bw_, i); ++d) s += 2.0 * row[d] * row[d];
  }
  return std::sqrt(s);
}

double SymmetricMatrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += band_row(i)[0];
  return s;
}

std::vector<double> SymmetricMatrix::to_dense() const {
  std::vector<double> a(n_ * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t d = 0; d <= std::min(bw_, i); ++d) {
      const double v = data_[i * (bw_ + 1) + d];
      a[i * n_ + (i - d)] = v;
      a[(i - d) * n_ + i] = v;
    }
  return a;
}

bool SymmetricMatrix::is_diagonal(double tol) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t d = 1; d <= std::min(bw_, i); ++d)
      if (std::abs(data_[i * (bw_ + 1) + d]) > tol) return false;
  return true;
}

void SymmetricMatrix::write_coordinate(std::ostream& os) const {
  os << "order " << n_ << " symmetric\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = (i > bw_ ? i - bw_ : 0); j <= i; ++j) {
      const double v = (*this)(i, j);
      if (v != 0.0) os << i << ' ' << j << ' ' << v << '\n';
    }
}

SymmetricMatrix SymmetricMatrix::read_coordinate(std::istream& is) {
  std::string word, kind;
  std::size_t n = 0;
  SOFTFEM_THROW_IF(!(is >> word >> n >> kind) || word != "order" || kind != "symmetric", invalid_argument,
                   "read_coordinate: bad header");
  struct Entry {
    std::size_t i, j;
    double v;
  };
  std::vector<Entry> entries;
  std::size_t bw = 0;
  Entry e{};
  while (is >> e.i >> e.j >> e.v) {
    if (e.i < e.j) std::swap(e.i, e.j);
    SOFTFEM_THROW_IF(e.i >= n, invalid_argument, "read_coordinate: index out of range");
    bw = std::max(bw, e.i - e.j);
    entries.push_back(e);
  }
  SymmetricMatrix m(n, bw);
  for (const auto& x : entries) m.set(x.i, x.j, x.v);
  return m;
}

} // namespace softfem
