#include "softfem/assembly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "assembly_detail.hpp"
#include "softfem/element.hpp"
#include "softfem/error.hpp"

namespace softfem {

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::fem: return "FEM";
    case Method::softfem: return "SoftFEM";
    case Method::gsfem: return "GSFEM";
    case Method::softfembq: return "SoftFEMBQ";
    case Method::gsfembq: return "GSFEMBQ";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "fem") return Method::fem;
  if (s == "softfem") return Method::softfem;
  if (s == "gsfem") return Method::gsfem;
  if (s == "softfembq") return Method::softfembq;
  if (s == "gsfembq") return Method::gsfembq;
  throw Error(ErrorCode::config_error, "unknown method '" + name + "'");
}

MethodConfig MethodConfig::fem(int p) {
  MethodConfig c;
  c.method = Method::fem;
  c.degree = p;
  return c;
}

MethodConfig MethodConfig::softfem(int p, double eta_k) {
  MethodConfig c = fem(p);
  c.method = Method::softfem;
  c.eta_k = eta_k;
  return c;
}

MethodConfig MethodConfig::gsfem(int p, double eta_k, double eta_m) {
  MethodConfig c = softfem(p, eta_k);
  c.method = Method::gsfem;
  c.eta_m = eta_m;
  return c;
}

MethodConfig MethodConfig::softfembq(int p, double eta_k, double alpha) {
  MethodConfig c = softfem(p, eta_k);
  c.method = Method::softfembq;
  c.alpha = alpha;
  return c;
}

MethodConfig MethodConfig::gsfembq(int p, double eta_k, double eta_m, double alpha) {
  MethodConfig c = gsfem(p, eta_k, eta_m);
  c.method = Method::gsfembq;
  c.alpha = alpha;
  return c;
}

MethodConfig MethodConfig::make(Method m, int p, const ParameterTriple& t) {
  switch (m) {
    case Method::fem: return fem(p);
    case Method::softfem: return softfem(p, t.eta_k);
    case Method::gsfem: return gsfem(p, t.eta_k, t.eta_m);
    case Method::softfembq: return softfembq(p, t.eta_k, t.alpha);
    case Method::gsfembq: return gsfembq(p, t.eta_k, t.eta_m, t.alpha);
  }
  return fem(p);
}

void MethodConfig::validate() const {
  SOFTFEM_THROW_IF(degree < 1 || degree > 4, unsupported_degree,
                   "degree must be in [1, 4], got " + std::to_string(degree));
  SOFTFEM_THROW_IF(!std::isfinite(eta_k) || !std::isfinite(eta_m) || !std::isfinite(alpha), config_error,
                   "non-finite method parameter");
  const bool no_k = eta_k == 0.0;
  const bool no_m = eta_m == 0.0;
  const bool no_blend = alpha == 1.0;
  bool ok = true;
  switch (method) {
    case Method::fem: ok = no_k && no_m && no_blend; break;
    case Method::softfem: ok = no_m && no_blend; break;
    case Method::gsfem: ok = no_blend; break;
    case Method::softfembq: ok = no_m; break;
    case Method::gsfembq: break;
  }
  SOFTFEM_THROW_IF(!ok, config_error, "parameters inconsistent with method: " + describe());
  SOFTFEM_THROW_IF(stiffness_points < 0, config_error, "stiffness_points must be >= 0");
}

std::string MethodConfig::describe() const {
  std::ostringstream os;
  os << to_string(method) << " p=" << degree << " eta_k=" << eta_k << " eta_m=" << eta_m
     << " alpha=" << alpha << " kappa=" << kappa.id();
  return os.str();
}

namespace {

struct LocalTables {
  QuadratureRule rule;
  BasisTable phi;
  BasisTable dphi;
};

LocalTables tables(const ReferenceElement& el, const QuadratureRule& rule) {
  return {rule, el.eval_basis(rule.points), el.eval_basis_deriv(rule.points)};
}

} // namespace

SymmetricMatrix assemble_stiffness(const Mesh1D& mesh, int p, const DiffusionField& kappa, int quad_points) {
  const ReferenceElement el(p);
  const auto map = dof_map(mesh, p);
  const auto t = tables(el, gauss_legendre(quad_points > 0 ? quad_points : p + 1));
  const int nl = p + 1;
  SymmetricMatrix k(map.num_dofs, p);
  std::vector<double> local(nl * nl);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double h = mesh.size(e);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < t.rule.size(); ++q) {
      const double x = mesh.left(e) + 0.5 * h * (t.rule.points[q] + 1.0);
      const double w = t.rule.weights[q] * kappa(x) * 2.0 / h;
      for (int a = 0; a < nl; ++a)
        for (int b = 0; b < nl; ++b) local[a * nl + b] += w * t.dphi(a, q) * t.dphi(b, q);
    }
    detail::scatter(k, map, e, local);
  }
  return k;
}

SymmetricMatrix assemble_mass(const Mesh1D& mesh, int p, QuadratureFamily family) {
  const ReferenceElement el(p);
  const auto map = dof_map(mesh, p);
  const auto t = tables(el, make_rule(family, p + 1));
  const int nl = p + 1;
  SymmetricMatrix m(map.num_dofs, family == QuadratureFamily::gauss_lobatto ? 0 : p);
  std::vector<double> local(nl * nl);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double h = mesh.size(e);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < t.rule.size(); ++q) {
      const double w = t.rule.weights[q] * 0.5 * h;
      for (int a = 0; a < nl; ++a)
        for (int b = 0; b < nl; ++b) {
          const double v = w * t.phi(a, q) * t.phi(b, q);
          // Lobatto points coincide with the nodes, so off-diagonal products vanish.
          if (a != b && family == QuadratureFamily::gauss_lobatto) continue;
          local[a * nl + b] += v;
        }
    }
    detail::scatter(m, map, e, local);
  }
  return m;
}

SymmetricMatrix assemble_penalty(const Mesh1D& mesh, int p, const DiffusionField& kappa, int weight_power) {
  SOFTFEM_THROW_IF(weight_power != 1 && weight_power != 3, invalid_argument,
                   "assemble_penalty: weight power must be 1 or 3");
  const ReferenceElement el(p);
  const auto map = dof_map(mesh, p);
  const std::vector<double> ends{-1.0, 1.0};
  const auto d_end = el.eval_basis_deriv(ends);
  const int nl = p + 1;
  SymmetricMatrix s(map.num_dofs, 2 * p);

  // Jump of the derivative at the interface, as coefficients on the 2p+1
  // nodes of the element pair (shared node in the middle).
  std::vector<double> jump(2 * p + 1);
  std::vector<std::int64_t> dofs(2 * p + 1);
  for (const auto& f : interfaces(mesh, kappa, p)) {
    const int e = f.left_element;
    std::fill(jump.begin(), jump.end(), 0.0);
    for (int a = 0; a < nl; ++a) {
      jump[a] -= d_end(a, 1) * 2.0 / mesh.size(e);
      jump[p + a] += d_end(a, 0) * 2.0 / mesh.size(e + 1);
      dofs[a] = map(e, a);
      dofs[p + a] = map(e + 1, a);
    }
    const double w = f.kappa * std::pow(f.h, weight_power);
    for (int a = 0; a <= 2 * p; ++a) {
      if (dofs[a] == kEliminated) continue;
      for (int b = 0; b <= a; ++b) {
        if (dofs[b] == kEliminated) continue;
        s.add(dofs[a], dofs[b], w * jump[a] * jump[b]);
      }
    }
  }
  return s;
}

SymmetricSystem build_system(const Mesh1D& mesh, const MethodConfig& config) {
  config.validate();
  const int p = config.degree;
  SymmetricMatrix a = assemble_stiffness(mesh, p, config.kappa, config.stiffness_points);
  if (config.eta_k != 0.0) a = a.plus(assemble_penalty(mesh, p, config.kappa, 1), -config.eta_k);
  SymmetricMatrix b = detail::method_mass(
      config, [&](QuadratureFamily f) { return assemble_mass(mesh, p, f); },
      [&] { return assemble_penalty(mesh, p, config.kappa, 3); });
  std::ostringstream os;
  os << config.describe() << " N=" << mesh.num_elements();
  return {std::move(a), std::move(b), config, os.str()};
}

} // namespace softfem
