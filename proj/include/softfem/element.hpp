#pragma once

#include <span>
#include <vector>

namespace softfem {

/// Row-major table: entry(i, k) is basis function i evaluated at point k.
struct BasisTable {
  int num_basis = 0;
  int num_points = 0;
  std::vector<double> values;

  [[nodiscard]] double operator()(int i, int k) const { return values[i * num_points + k]; }
  double& operator()(int i, int k) { return values[i * num_points + k]; }
};

/// Degree-p Lagrange element on [-1, 1] with Gauss-Lobatto nodes.
///
/// Interpolating at the Lobatto points makes the Lobatto-integrated mass
/// matrix diagonal, which is what mass lumping relies on.
class ReferenceElement {
public:
  static constexpr int kMaxDegree = 4;

  explicit ReferenceElement(int degree);

  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] int num_nodes() const noexcept { return degree_ + 1; }
  [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }

  [[nodiscard]] BasisTable eval_basis(std::span<const double> xi) const;
  [[nodiscard]] BasisTable eval_basis_deriv(std::span<const double> xi) const;

private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> bary_weights_;
  // diff_(i, j) = L_j'(x_i)
  std::vector<double> diff_;
};

inline ReferenceElement reference_element(int degree) { return ReferenceElement(degree); }

} // namespace softfem
