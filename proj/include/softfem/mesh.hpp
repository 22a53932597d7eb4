#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace softfem {

/// Closed set of diffusion coefficients, selected by id.
class DiffusionField {
public:
  enum class Kind { constant, exp_x_plus_x2, exp_x_minus_x2 };

  static DiffusionField constant(double value = 1.0);
  /// kappa(x) = exp(x + x^2); in 2D it depends on x only.
  static DiffusionField exp_x_plus_x2();
  /// kappa(x) = exp(x - x^2); in 2D it depends on x only.
  static DiffusionField exp_x_minus_x2();
  /// "constant", "constant:<value>", "exp_x_plus_x2" or "exp_x_minus_x2".
  static DiffusionField from_id(const std::string& id);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_constant() const noexcept { return kind_ == Kind::constant; }
  [[nodiscard]] double constant_value() const noexcept { return value_; }
  [[nodiscard]] std::string id() const;

  [[nodiscard]] double operator()(double x, double y = 0.0) const;

private:
  DiffusionField(Kind kind, double value) : kind_(kind), value_(value) {}

  Kind kind_;
  double value_;
};

class Mesh1D {
public:
  /// N equal elements on [a, b]; N >= 2.
  static Mesh1D uniform(double a, double b, int num_elements);
  /// Arbitrary strictly increasing element boundaries.
  static Mesh1D from_boundaries(std::vector<double> boundaries);

  [[nodiscard]] int num_elements() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
  [[nodiscard]] double a() const noexcept { return nodes_.front(); }
  [[nodiscard]] double b() const noexcept { return nodes_.back(); }
  [[nodiscard]] double left(int e) const { return nodes_[e]; }
  [[nodiscard]] double right(int e) const { return nodes_[e + 1]; }
  [[nodiscard]] double size(int e) const { return nodes_[e + 1] - nodes_[e]; }
  [[nodiscard]] double max_size() const;
  [[nodiscard]] const std::vector<double>& boundaries() const noexcept { return nodes_; }

private:
  explicit Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {}
  std::vector<double> nodes_;
};

/// Interior interface between elements `left_element` and `left_element + 1`.
struct Interface {
  int left_element;
  double x;
  double h;     // min of adjacent element sizes
  double kappa; // min of adjacent element kappa minima
};

/// Per-element approximation of ess inf kappa: minimum over the endpoints and
/// the (p+1) Gauss-Legendre points of the element.
std::vector<double> element_kappa_min(const Mesh1D& mesh, const DiffusionField& kappa, int degree = 1);

/// One record per interior vertex, left to right.
std::vector<Interface> interfaces(const Mesh1D& mesh, const DiffusionField& kappa, int degree = 1);

inline constexpr std::int64_t kEliminated = -1;

/// Global numbering of interior degrees of freedom; boundary nodes map to kEliminated.
struct DofMap {
  int degree = 1;
  std::size_t num_dofs = 0;
  std::size_t nodes_per_element = 0;
  std::vector<std::int64_t> element_dofs; // row-major [element][local node]

  [[nodiscard]] std::size_t num_elements() const noexcept {
    return nodes_per_element == 0 ? 0 : element_dofs.size() / nodes_per_element;
  }
  [[nodiscard]] std::int64_t operator()(std::size_t element, std::size_t local) const {
    return element_dofs[element * nodes_per_element + local];
  }
};

DofMap dof_map(const Mesh1D& mesh, int degree);

/// Element length scale entering h_F on 2D edges.
enum class EdgeLengthScale { side, diameter };

struct TensorMesh2D {
  Mesh1D x;
  Mesh1D y;

  static TensorMesh2D uniform(int nx, int ny);

  [[nodiscard]] int num_elements() const { return x.num_elements() * y.num_elements(); }
};

/// Interior edge of a tensor mesh.
struct Edge2D {
  enum class Orientation { vertical, horizontal };
  Orientation orientation;
  int element_a; // left (vertical) or bottom (horizontal) element, index ex + ey * nx
  int element_b;
  double h;
  double kappa;
};

std::vector<double> element_kappa_min(const TensorMesh2D& mesh, const DiffusionField& kappa, int degree);
std::vector<Edge2D> interior_edges(const TensorMesh2D& mesh, const DiffusionField& kappa, int degree,
                                   EdgeLengthScale scale = EdgeLengthScale::side);

/// x-fastest lexicographic numbering of interior tensor nodes.
DofMap dof_map(const TensorMesh2D& mesh, int degree);

} // namespace softfem
