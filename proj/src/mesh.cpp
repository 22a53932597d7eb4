#include "softfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "softfem/error.hpp"
#include "softfem/quadrature.hpp"

namespace softfem {

DiffusionField DiffusionField::constant(double value) {
  SOFTFEM_THROW_IF(!(value > 0.0) || !std::isfinite(value), invalid_argument,
                   "diffusion coefficient must be positive");
  return {Kind::constant, value};
}

DiffusionField DiffusionField::exp_x_plus_x2() { return {Kind::exp_x_plus_x2, 0.0}; }

DiffusionField DiffusionField::exp_x_minus_x2() { return {Kind::exp_x_minus_x2, 0.0}; }

DiffusionField DiffusionField::from_id(const std::string& id) {
  if (id == "constant") return constant(1.0);
  if (id == "exp_x_plus_x2") return exp_x_plus_x2();
  if (id == "exp_x_minus_x2") return exp_x_minus_x2();
  const std::string prefix = "constant:";
  if (id.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const std::string tail = id.substr(prefix.size());
      const double v = std::stod(tail, &used);
      if (used == tail.size()) return constant(v);
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown diffusion field id '" + id + "'");
}

std::string DiffusionField::id() const {
  if (kind_ == Kind::exp_x_plus_x2) return "exp_x_plus_x2";
  if (kind_ == Kind::exp_x_minus_x2) return "exp_x_minus_x2";
  if (value_ == 1.0) return "constant";
  return "constant:" + std::to_string(value_);
}

double DiffusionField::operator()(double x, double /*y*/) const {
  switch (kind_) {
    case Kind::constant: return value_;
    case Kind::exp_x_plus_x2: return std::exp(x + x * x);
    case Kind::exp_x_minus_x2: return std::exp(x - x * x);
  }
  return value_;
}

Mesh1D Mesh1D::uniform(double a, double b, int num_elements) {
  SOFTFEM_THROW_IF(!(a < b), invalid_argument, "uniform_mesh_1d: need a < b");
  SOFTFEM_THROW_IF(num_elements < 2, too_few_elements,
                   "uniform_mesh_1d: need at least 2 elements, got " + std::to_string(num_elements));
  std::vector<double> nodes(num_elements + 1);
  for (int i = 0; i <= num_elements; ++i)
    nodes[i] = a + (b - a) * static_cast<double>(i) / num_elements;
  nodes.back() = b;
  return Mesh1D(std::move(nodes));
}

Mesh1D Mesh1D::from_boundaries(std::vector<double> boundaries) {
  SOFTFEM_THROW_IF(boundaries.size() < 3, too_few_elements, "mesh needs at least 2 elements");
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    SOFTFEM_THROW_IF(!(boundaries[i - 1] < boundaries[i]), invalid_argument,
                     "mesh boundaries must be strictly increasing");
  return Mesh1D(std::move(boundaries));
}

double Mesh1D::max_size() const {
  double h = 0.0;
  for (int e = 0; e < num_elements(); ++e) h = std::max(h, size(e));
  return h;
}

namespace {

std::vector<double> sample_abscissae(double lo, double hi, const QuadratureRule& rule) {
  std::vector<double> xs{lo, hi};
  for (double xi : rule.points) xs.push_back(lo + 0.5 * (hi - lo) * (xi + 1.0));
  return xs;
}

} // namespace

std::vector<double> element_kappa_min(const Mesh1D& mesh, const DiffusionField& kappa, int degree) {
  const auto rule = gauss_legendre(degree + 1);
  std::vector<double> mins(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : sample_abscissae(mesh.left(e), mesh.right(e), rule)) m = std::min(m, kappa(x));
    mins[e] = m;
  }
  return mins;
}

std::vector<Interface> interfaces(const Mesh1D& mesh, const DiffusionField& kappa, int degree) {
  const auto kmin = element_kappa_min(mesh, kappa, degree);
  std::vector<Interface> out;
  out.reserve(mesh.num_elements() - 1);
  for (int e = 0; e + 1 < mesh.num_elements(); ++e)
    out.push_back({e, mesh.right(e), std::min(mesh.size(e), mesh.size(e + 1)),
                   std::min(kmin[e], kmin[e + 1])});
  return out;
}

DofMap dof_map(const Mesh1D& mesh, int degree) {
  SOFTFEM_THROW_IF(degree < 1 || degree > 4, unsupported_degree, "dof_map: degree must be in [1, 4]");
  const int ne = mesh.num_elements();
  DofMap map;
  map.degree = degree;
  map.nodes_per_element = degree + 1;
  map.num_dofs = static_cast<std::size_t>(ne) * degree - 1;
  map.element_dofs.resize(static_cast<std::size_t>(ne) * (degree + 1));
  const std::int64_t last = static_cast<std::int64_t>(ne) * degree;
  for (int e = 0; e < ne; ++e)
    for (int a = 0; a <= degree; ++a) {
      // global node index g in [0, N p]; interior nodes are shifted by one
      const std::int64_t g = static_cast<std::int64_t>(e) * degree + a;
      map.element_dofs[e * (degree + 1) + a] = (g == 0 || g == last) ? kEliminated : g - 1;
    }
  return map;
}

TensorMesh2D TensorMesh2D::uniform(int nx, int ny) {
  return {Mesh1D::uniform(0.0, 1.0, nx), Mesh1D::uniform(0.0, 1.0, ny)};
}

std::vector<double> element_kappa_min(const TensorMesh2D& mesh, const DiffusionField& kappa, int degree) {
  const auto rule = gauss_legendre(degree + 1);
  const int nx = mesh.x.num_elements();
  const int ny = mesh.y.num_elements();
  std::vector<double> mins(static_cast<std::size_t>(nx) * ny);
  for (int ey = 0; ey < ny; ++ey) {
    const auto ys = sample_abscissae(mesh.y.left(ey), mesh.y.right(ey), rule);
    for (int ex = 0; ex < nx; ++ex) {
      double m = std::numeric_limits<double>::infinity();
      for (double x : sample_abscissae(mesh.x.left(ex), mesh.x.right(ex), rule))
        for (double y : ys) m = std::min(m, kappa(x, y));
      mins[ex + ey * nx] = m;
    }
  }
  return mins;
}

std::vector<Edge2D> interior_edges(const TensorMesh2D& mesh, const DiffusionField& kappa, int degree,
                                   EdgeLengthScale scale) {
  const auto kmin = element_kappa_min(mesh, kappa, degree);
  const int nx = mesh.x.num_elements();
  const int ny = mesh.y.num_elements();
  auto length = [&](int ex, int ey, Edge2D::Orientation o) {
    const double hx = mesh.x.size(ex);
    const double hy = mesh.y.size(ey);
    if (scale == EdgeLengthScale::diameter) return std::hypot(hx, hy);
    return o == Edge2D::Orientation::vertical ? hx : hy;
  };
  std::vector<Edge2D> edges;
  edges.reserve(static_cast<std::size_t>(nx - 1) * ny + static_cast<std::size_t>(nx) * (ny - 1));
  for (int ey = 0; ey < ny; ++ey)
    for (int ex = 0; ex + 1 < nx; ++ex) {
      const auto o = Edge2D::Orientation::vertical;
      const int a = ex + ey * nx;
      const int b = a + 1;
      edges.push_back({o, a, b, std::min(length(ex, ey, o), length(ex + 1, ey, o)),
                       std::min(kmin[a], kmin[b])});
    }
  for (int ey = 0; ey + 1 < ny; ++ey)
    for (int ex = 0; ex < nx; ++ex) {
      const auto o = Edge2D::Orientation::horizontal;
      const int a = ex + ey * nx;
      const int b = a + nx;
      edges.push_back({o, a, b, std::min(length(ex, ey, o), length(ex, ey + 1, o)),
                       std::min(kmin[a], kmin[b])});
    }
  return edges;
}

DofMap dof_map(const TensorMesh2D& mesh, int degree) {
  const DofMap mx = dof_map(mesh.x, degree);
  const DofMap my = dof_map(mesh.y, degree);
  const int nx = mesh.x.num_elements();
  const int ny = mesh.y.num_elements();
  const int n1 = degree + 1;
  DofMap map;
  map.degree = degree;
  map.nodes_per_element = static_cast<std::size_t>(n1) * n1;
  map.num_dofs = mx.num_dofs * my.num_dofs;
  map.element_dofs.resize(static_cast<std::size_t>(nx) * ny * n1 * n1);
  const auto stride = static_cast<std::int64_t>(mx.num_dofs);
  for (int ey = 0; ey < ny; ++ey)
    for (int ex = 0; ex < nx; ++ex) {
      const std::size_t base = (static_cast<std::size_t>(ex) + static_cast<std::size_t>(ey) * nx) * n1 * n1;
      for (int b = 0; b < n1; ++b)
        for (int a = 0; a < n1; ++a) {
          const auto ix = mx(ex, a);
          const auto iy = my(ey, b);
          map.element_dofs[base + a + b * n1] =
              (ix == kEliminated || iy == kEliminated) ? kEliminated : ix + iy * stride;
        }
    }
  return map;
}

} // namespace softfem
