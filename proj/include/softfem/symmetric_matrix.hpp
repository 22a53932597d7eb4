#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace softfem {

/// Symmetric matrix in lower band storage.
///
/// Only entries with 0 <= i - j <= half_bandwidth are stored; a dense matrix
/// is the special case half_bandwidth = n - 1. Entry (i, j) and (j, i) share
/// one storage slot, so assembly adds each unordered pair once.
class SymmetricMatrix {
public:
  SymmetricMatrix() = default;
  SymmetricMatrix(std::size_t order, std::size_t half_bandwidth);

  static SymmetricMatrix dense(std::size_t order) { return {order, order == 0 ? 0 : order - 1}; }

  [[nodiscard]] std::size_t order() const noexcept { return n_; }
  [[nodiscard]] std::size_t half_bandwidth() const noexcept { return bw_; }

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const;
  /// Adds v to entry (i, j) (equivalently (j, i)). Throws outside the band.
  void add(std::size_t i, std::size_t j, double v);
  void set(std::size_t i, std::size_t j, double v);

  /// this + scale * other, with the wider of the two bandwidths.
  [[nodiscard]] SymmetricMatrix plus(const SymmetricMatrix& other, double scale) const;
  [[nodiscard]] SymmetricMatrix scaled(double s) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;
  [[nodiscard]] double quadratic_form(std::span<const double> x) const;

  [[nodiscard]] double frobenius_norm() const;
  [[nodiscard]] double trace() const;
  /// Full row-major n x n copy.
  [[nodiscard]] std::vector<double> to_dense() const;
  [[nodiscard]] bool is_diagonal(double tol = 0.0) const;

  /// Raw band row i: entries (i, i - d) for d = 0..half_bandwidth (clipped at column 0 reads as zero).
  [[nodiscard]] const double* band_row(std::size_t i) const { return data_.data() + i * (bw_ + 1); }

  /// "order n symmetric" header, then "row col value" lines for nonzero lower entries (0-based).
  void write_coordinate(std::ostream& os) const;
  static SymmetricMatrix read_coordinate(std::istream& is);

private:
  std::size_t n_ = 0;
  std::size_t bw_ = 0;
  std::vector<double> data_;
};

} // namespace softfem
