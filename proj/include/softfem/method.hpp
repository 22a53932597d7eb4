#pragma once

#include <string>

#include "softfem/mesh.hpp"

namespace softfem {

enum class Method { fem, softfem, gsfem, softfembq, gsfembq };

const char* to_string(Method m) noexcept;
/// Accepts "fem", "softfem", "gsfem", "softfembq", "gsfembq" (case-insensitive).
Method parse_method(const std::string& name);

/// Softness on the stiffness side, softness on the mass side, blending weight.
struct ParameterTriple {
  double eta_k = 0.0;
  double eta_m = 0.0;
  double alpha = 1.0;
};

struct MethodConfig {
  Method method = Method::fem;
  int degree = 1;
  double eta_k = 0.0;
  double eta_m = 0.0;
  double alpha = 1.0;
  DiffusionField kappa = DiffusionField::constant(1.0);
  /// Gauss-Legendre points per element for the stiffness; 0 means p + 1.
  int stiffness_points = 0;
  EdgeLengthScale edge_scale = EdgeLengthScale::side;

  static MethodConfig fem(int p);
  static MethodConfig softfem(int p, double eta_k);
  static MethodConfig gsfem(int p, double eta_k, double eta_m);
  static MethodConfig softfembq(int p, double eta_k, double alpha);
  static MethodConfig gsfembq(int p, double eta_k, double eta_m, double alpha);
  /// Picks the narrowest method consistent with the given parameters' roles.
  static MethodConfig make(Method m, int p, const ParameterTriple& params);

  [[nodiscard]] ParameterTriple params() const { return {eta_k, eta_m, alpha}; }

  /// Throws config_error when the parameters contradict the method
  /// (e.g. FEM with a nonzero softness).
  void validate() const;

  [[nodiscard]] std::string describe() const;
};

} // namespace softfem
