#include "softfem/element.hpp"

#include <cmath>
#include <string>

#include "softfem/error.hpp"
#include "softfem/quadrature.hpp"

namespace softfem {

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
  SOFTFEM_THROW_IF(degree < 1 || degree > kMaxDegree, unsupported_degree,
                   "reference_element: degree must be in [1, 4], got " + std::to_string(degree));
  nodes_ = gauss_lobatto(degree + 1).points;
  const int n = num_nodes();

  bary_weights_.assign(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) bary_weights_[i] /= (nodes_[i] - nodes_[j]);

  diff_.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = (bary_weights_[j] / bary_weights_[i]) / (nodes_[i] - nodes_[j]);
      diff_[i * n + j] = d;
      diag -= d;
    }
    diff_[i * n + i] = diag;
  }
}

BasisTable ReferenceElement::eval_basis(std::span<const double> xi) const {
  const int n = num_nodes();
  const int m = static_cast<int>(xi.size());
  BasisTable table{n, m, std::vector<double>(n * m, 0.0)};
  for (int k = 0; k < m; ++k) {
    const double x = xi[k];
    int hit = -1;
    for (int i = 0; i < n; ++i)
      if (x == nodes_[i]) hit = i;
    if (hit >= 0) {
      table(hit, k) = 1.0;
      continue;
    }
    // Second (true) barycentric form.
    double denom = 0.0;
    for (int i = 0; i < n; ++i) denom += bary_weights_[i] / (x - nodes_[i]);
    for (int i = 0; i < n; ++i) table(i, k) = (bary_weights_[i] / (x - nodes_[i])) / denom;
  }
  return table;
}

BasisTable ReferenceElement::eval_basis_deriv(std::span<const double> xi) const {
  const int n = num_nodes();
  const int m = static_cast<int>(xi.size());
  const BasisTable values = eval_basis(xi);
  BasisTable table{n, m, std::vector<double>(n * m, 0.0)};
  // L_j' has degree p-1, so it is reproduced exactly by its nodal interpolant.
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < m; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += diff_[i * n + j] * values(i, k);
      table(j, k) = s;
    }
  return table;
}

} // namespace softfem
