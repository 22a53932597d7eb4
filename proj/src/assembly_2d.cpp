#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "assembly_detail.hpp"
#include "softfem/assembly.hpp"
#include "softfem/element.hpp"
#include "softfem/error.hpp"

namespace softfem {

namespace {

std::size_t element_bandwidth(const DofMap& mx, int p) { return p * mx.num_dofs + p; }

// Runs `local_fn(element, local)` for every element and scatters the local
// blocks. The parallel path accumulates into per-thread partial matrices
// that are merged in thread order.
template <class LocalFn>
SymmetricMatrix assemble_elements(const TensorMesh2D& mesh, const DofMap& map, std::size_t bw,
                                  kernels::Execution exec, LocalFn&& local_fn) {
  const int ne = mesh.num_elements();
  const std::size_t nl = map.nodes_per_element;
  if (exec == kernels::Execution::serial) {
    SymmetricMatrix g(map.num_dofs, bw);
    std::vector<double> local(nl * nl);
    for (int e = 0; e < ne; ++e) {
      local_fn(e, local);
      detail::scatter(g, map, e, local);
    }
    return g;
  }
  const int nthreads = omp_get_max_threads();
  std::vector<SymmetricMatrix> partial(nthreads);
#pragma omp parallel num_threads(nthreads)
  {
    const int tid = omp_get_thread_num();
    SymmetricMatrix g(map.num_dofs, bw);
    std::vector<double> local(nl * nl);
#pragma omp for schedule(static)
    for (int e = 0; e < ne; ++e) {
      local_fn(e, local);
      detail::scatter(g, map, e, local);
    }
    partial[tid] = std::move(g);
  }
  SymmetricMatrix total = std::move(partial[0]);
  for (int t = 1; t < nthreads; ++t)
    if (partial[t].order() == total.order()) total = total.plus(partial[t], 1.0);
  return total;
}

} // namespace

SymmetricMatrix assemble_stiffness_2d(const TensorMesh2D& mesh, int p, const DiffusionField& kappa,
                                      int quad_points, kernels::Execution exec) {
  const ReferenceElement el(p);
  const auto rule = gauss_legendre(quad_points > 0 ? quad_points : p + 1);
  const auto phi = el.eval_basis(rule.points);
  const auto dphi = el.eval_basis_deriv(rule.points);
  const auto map = dof_map(mesh, p);
  const auto mx = dof_map(mesh.x, p);
  const int n1 = p + 1;
  const int nq = static_cast<int>(rule.size());
  const int nx = mesh.x.num_elements();
  return assemble_elements(mesh, map, element_bandwidth(mx, p), exec, [&](int e, std::vector<double>& local) {
    const int ex = e % nx;
    const int ey = e / nx;
    const double hx = mesh.x.size(ex);
    const double hy = mesh.y.size(ey);
    std::fill(local.begin(), local.end(), 0.0);
    const int nl = n1 * n1;
    for (int qy = 0; qy < nq; ++qy)
      for (int qx = 0; qx < nq; ++qx) {
        const double x = mesh.x.left(ex) + 0.5 * hx * (rule.points[qx] + 1.0);
        const double y = mesh.y.left(ey) + 0.5 * hy * (rule.points[qy] + 1.0);
        const double w = rule.weights[qx] * rule.weights[qy] * kappa(x, y);
        const double wxx = w * hy / hx;
        const double wyy = w * hx / hy;
        for (int b = 0; b < n1; ++b)
          for (int a = 0; a < n1; ++a) {
            const double gx_i = dphi(a, qx) * phi(b, qy);
            const double gy_i = phi(a, qx) * dphi(b, qy);
            for (int d = 0; d < n1; ++d)
              for (int c = 0; c < n1; ++c) {
                const double gx_j = dphi(c, qx) * phi(d, qy);
                const double gy_j = phi(c, qx) * dphi(d, qy);
                local[(a + b * n1) * nl + (c + d * n1)] += wxx * gx_i * gx_j + wyy * gy_i * gy_j;
              }
          }
      }
  });
}

SymmetricMatrix assemble_mass_2d(const TensorMesh2D& mesh, int p, QuadratureFamily family,
                                 kernels::Execution exec) {
  const ReferenceElement el(p);
  const auto rule = make_rule(family, p + 1);
  const auto phi = el.eval_basis(rule.points);
  const int n1 = p + 1;
  // Reference 1D mass, integrated with the chosen rule.
  std::vector<double> ref(n1 * n1, 0.0);
  for (int a = 0; a < n1; ++a)
    for (int c = 0; c < n1; ++c) {
      if (family == QuadratureFamily::gauss_lobatto && a != c) continue;
      for (std::size_t q = 0; q < rule.size(); ++q) ref[a * n1 + c] += rule.weights[q] * phi(a, q) * phi(c, q);
    }
  const auto map = dof_map(mesh, p);
  const auto mx = dof_map(mesh.x, p);
  const int nx = mesh.x.num_elements();
  const std::size_t bw = family == QuadratureFamily::gauss_lobatto ? 0 : element_bandwidth(mx, p);
  return assemble_elements(mesh, map, bw, exec, [&](int e, std::vector<double>& local) {
    const double jac = 0.25 * mesh.x.size(e % nx) * mesh.y.size(e / nx);
    const int nl = n1 * n1;
    for (int b = 0; b < n1; ++b)
      for (int a = 0; a < n1; ++a)
        for (int d = 0; d < n1; ++d)
          for (int c = 0; c < n1; ++c)
            local[(a + b * n1) * nl + (c + d * n1)] = jac * ref[a * n1 + c] * ref[b * n1 + d];
  });
}

SymmetricMatrix assemble_penalty_2d(const TensorMesh2D& mesh, int p, const DiffusionField& kappa,
                                    int weight_power, EdgeLengthScale scale) {
  SOFTFEM_THROW_IF(weight_power != 1 && weight_power != 3, invalid_argument,
                   "assemble_penalty_2d: weight power must be 1 or 3");
  const ReferenceElement el(p);
  const std::vector<double> ends{-1.0, 1.0};
  const auto d_end = el.eval_basis_deriv(ends);
  const auto rule = gauss_legendre(p + 1);
  const auto phi = el.eval_basis(rule.points);
  const int n1 = p + 1;
  std::vector<double> edge_ref(n1 * n1, 0.0); // reference edge mass of the tangential basis
  for (int a = 0; a < n1; ++a)
    for (int c = 0; c < n1; ++c)
      for (std::size_t q = 0; q < rule.size(); ++q) edge_ref[a * n1 + c] += rule.weights[q] * phi(a, q) * phi(c, q);

  const auto map = dof_map(mesh, p);
  const auto mx = dof_map(mesh.x, p);
  const int nx = mesh.x.num_elements();
  SymmetricMatrix s(map.num_dofs, 2 * p * mx.num_dofs + 2 * p);

  const int np = 2 * p + 1;
  std::vector<double> jump(np);
  std::vector<std::int64_t> dofs(np * n1);
  for (const auto& edge : interior_edges(mesh, kappa, p, scale)) {
    const bool vertical = edge.orientation == Edge2D::Orientation::vertical;
    const int ea = edge.element_a;
    const int eb = edge.element_b;
    // normal-direction sizes of the two elements and tangential size
    const double hna = vertical ? mesh.x.size(ea % nx) : mesh.y.size(ea / nx);
    const double hnb = vertical ? mesh.x.size(eb % nx) : mesh.y.size(eb / nx);
    const double ht = vertical ? mesh.y.size(ea / nx) : mesh.x.size(ea % nx);
    std::fill(jump.begin(), jump.end(), 0.0);
    for (int a = 0; a < n1; ++a) {
      jump[a] -= d_end(a, 1) * 2.0 / hna;
      jump[p + a] += d_end(a, 0) * 2.0 / hnb;
    }
    // Pair node (normal position k, tangential local t) -> global dof.
    for (int k = 0; k < np; ++k)
      for (int t = 0; t < n1; ++t) {
        const int elem = k <= p ? ea : eb;
        const int kn = k <= p ? k : k - p;
        const int local = vertical ? kn + t * n1 : t + kn * n1;
        dofs[k * n1 + t] = map(elem, local);
      }
    const double w = edge.kappa * std::pow(edge.h, weight_power) * 0.5 * ht;
    for (int k = 0; k < np; ++k)
      for (int t = 0; t < n1; ++t) {
        const auto gi = dofs[k * n1 + t];
        if (gi == kEliminated) continue;
        for (int l = 0; l < np; ++l)
          for (int u = 0; u < n1; ++u) {
            const auto gj = dofs[l * n1 + u];
            if (gj == kEliminated || gj > gi) continue;
            s.add(gi, gj, w * jump[k] * jump[l] * edge_ref[t * n1 + u]);
          }
      }
  }
  return s;
}

SymmetricMatrix kron(const SymmetricMatrix& y_factor, const SymmetricMatrix& x_factor) {
  const std::size_t nx = x_factor.order();
  const std::size_t ny = y_factor.order();
  SymmetricMatrix out(nx * ny, y_factor.half_bandwidth() * nx + x_factor.half_bandwidth());
  for (std::size_t iy = 0; iy < ny; ++iy)
    for (std::size_t jy = (iy > y_factor.half_bandwidth() ? iy - y_factor.half_bandwidth() : 0); jy <= iy; ++jy) {
      const double yv = y_factor(iy, jy);
      if (yv == 0.0) continue;
      for (std::size_t ix = 0; ix < nx; ++ix)
        for (std::size_t jx = 0; jx < nx; ++jx) {
          if (iy == jy && jx > ix) continue;
          const double xv = x_factor(ix, jx);
          if (xv == 0.0) continue;
          out.set(ix + iy * nx, jx + jy * nx, yv * xv);
        }
    }
  return out;
}

SymmetricSystem build_system_2d(const TensorMesh2D& mesh, const MethodConfig& config, Assembly2DPath path,
                                kernels::Execution exec) {
  config.validate();
  const int p = config.degree;
  SymmetricMatrix a, b;
  if (path == Assembly2DPath::kronecker) {
    SOFTFEM_THROW_IF(!config.kappa.is_constant() || config.edge_scale != EdgeLengthScale::side, invalid_argument,
                     "Kronecker assembly needs constant kappa and side-length edge scale");
    const auto& kap = config.kappa;
    const auto mgx = assemble_mass(mesh.x, p, QuadratureFamily::gauss_legendre);
    const auto mgy = assemble_mass(mesh.y, p, QuadratureFamily::gauss_legendre);
    a = kron(mgy, assemble_stiffness(mesh.x, p, kap, config.stiffness_points))
            .plus(kron(assemble_stiffness(mesh.y, p, kap, config.stiffness_points), mgx), 1.0);
    if (config.eta_k != 0.0) {
      const auto s2 = kron(mgy, assemble_penalty(mesh.x, p, kap, 1)).plus(kron(assemble_penalty(mesh.y, p, kap, 1), mgx), 1.0);
      a = a.plus(s2, -config.eta_k);
    }
    b = detail::method_mass(
        config,
        [&](QuadratureFamily f) {
          return f == QuadratureFamily::gauss_legendre ? kron(mgy, mgx)
                                                       : kron(assemble_mass(mesh.y, p, f), assemble_mass(mesh.x, p, f));
        },
        [&] {
          return kron(mgy, assemble_penalty(mesh.x, p, kap, 3)).plus(kron(assemble_penalty(mesh.y, p, kap, 3), mgx), 1.0);
        });
  } else {
    a = assemble_stiffness_2d(mesh, p, config.kappa, config.stiffness_points, exec);
    if (config.eta_k != 0.0)
      a = a.plus(assemble_penalty_2d(mesh, p, config.kappa, 1, config.edge_scale), -config.eta_k);
    b = detail::method_mass(
        config, [&](QuadratureFamily f) { return assemble_mass_2d(mesh, p, f, exec); },
        [&] { return assemble_penalty_2d(mesh, p, config.kappa, 3, config.edge_scale); });
  }
  std::ostringstream os;
  os << config.describe() << " mesh=" << mesh.x.num_elements() << "x" << mesh.y.num_elements();
  return {std::move(a), std::move(b), config, os.str()};
}

} // namespace softfem
