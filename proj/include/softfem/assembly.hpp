#pragma once

#include <functional>
#include <string>

#include "softfem/kernels.hpp"
#include "softfem/mesh.hpp"
#include "softfem/method.hpp"
#include "softfem/quadrature.hpp"
#include "softfem/symmetric_matrix.hpp"

namespace softfem {

/// A x = lambda B x with A the softened stiffness and B the method's mass.
struct SymmetricSystem {
  SymmetricMatrix a;
  SymmetricMatrix b;
  MethodConfig config;
  std::string description;
};

// 1D global matrices with Dirichlet degrees of freedom eliminated.

SymmetricMatrix assemble_stiffness(const Mesh1D& mesh, int p, const DiffusionField& kappa,
                                   int quad_points = 0);
SymmetricMatrix assemble_mass(const Mesh1D& mesh, int p, QuadratureFamily family);
/// Gradient-jump penalty sum_F kappa_F h_F^power [phi_j'][phi_i'] over interior vertices.
SymmetricMatrix assemble_penalty(const Mesh1D& mesh, int p, const DiffusionField& kappa, int weight_power);

SymmetricSystem build_system(const Mesh1D& mesh, const MethodConfig& config);

// 2D tensor-product meshes.

enum class Assembly2DPath { direct, kronecker };

SymmetricMatrix assemble_stiffness_2d(const TensorMesh2D& mesh, int p, const DiffusionField& kappa,
                                      int quad_points = 0,
                                      kernels::Execution exec = kernels::Execution::serial);
SymmetricMatrix assemble_mass_2d(const TensorMesh2D& mesh, int p, QuadratureFamily family,
                                 kernels::Execution exec = kernels::Execution::serial);
SymmetricMatrix assemble_penalty_2d(const TensorMesh2D& mesh, int p, const DiffusionField& kappa,
                                    int weight_power, EdgeLengthScale scale = EdgeLengthScale::side);

/// Kronecker product in x-fastest ordering: entry (ix + iy nx, jx + jy nx) = y(iy, jy) * x(ix, jx).
SymmetricMatrix kron(const SymmetricMatrix& y_factor, const SymmetricMatrix& x_factor);

/// The Kronecker path needs constant kappa and the side-length edge scale.
SymmetricSystem build_system_2d(const TensorMesh2D& mesh, const MethodConfig& config,
                                Assembly2DPath path = Assembly2DPath::direct,
                                kernels::Execution exec = kernels::Execution::serial);

} // namespace softfem
