#pragma once

#include <functional>
#include <vector>

#include "softfem/assembly.hpp"

namespace softfem::detail {

/// Adds a dense local block through the dof map, skipping eliminated dofs.
inline void scatter(SymmetricMatrix& global, const DofMap& map, std::size_t element,
                    const std::vector<double>& local) {
  const std::size_t nl = map.nodes_per_element;
  for (std::size_t a = 0; a < nl; ++a) {
    const auto ga = map(element, a);
    if (ga == kEliminated) continue;
    for (std::size_t b = 0; b < nl; ++b) {
      const auto gb = map(element, b);
      // Exact zeros may lie outside a narrower band (diagonal lumped mass).
      if (gb == kEliminated || gb > ga || local[a * nl + b] == 0.0) continue;
      global.add(ga, gb, local[a * nl + b]);
    }
  }
}

/// alpha M_G + (1 - alpha) M_L + eta_M S_g, dropping terms that vanish.
inline SymmetricMatrix method_mass(const MethodConfig& c,
                                   const std::function<SymmetricMatrix(QuadratureFamily)>& mass,
                                   const std::function<SymmetricMatrix()>& penalty_g) {
  SymmetricMatrix b = mass(QuadratureFamily::gauss_legendre);
  if (c.alpha != 1.0) b = b.scaled(c.alpha).plus(mass(QuadratureFamily::gauss_lobatto), 1.0 - c.alpha);
  if (c.eta_m != 0.0) b = b.plus(penalty_g(), c.eta_m);
  return b;
}

} // namespace softfem::detail
