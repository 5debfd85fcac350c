#pragma once

// Laplacian eigenbasis on an interval or rectangle with homogeneous
// Dirichlet (sine) or Neumann (cosine) boundary conditions, plus the grid
// function type carried through the solvers.

#include <array>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace crd {

enum class BoundaryKind { Dirichlet, Neumann };

std::string_view to_string(BoundaryKind bc) noexcept;

/// Orthonormal eigenbasis of -Laplace on a box, collocated on N nodes per
/// axis. Dirichlet: sin(k pi x / L), k = 1..N on nodes jL/(N+1).
/// Neumann: cos(k pi x / L), k = 0..N-1 on cell midpoints (j + 1/2)L/N.
/// With those nodes the transforms are square and exactly invertible.
class SpectralBasis {
 public:
  /// Throws UnsupportedDim for space_dim outside {1, 2} and ValidationError
  /// for non-positive lengths or mode counts.
  static std::shared_ptr<const SpectralBasis> build(int space_dim, std::vector<double> lengths, BoundaryKind bc,
                                                    std::vector<int> modes_per_axis);

  int space_dim() const noexcept { return space_dim_; }
  const std::vector<double>& lengths() const noexcept { return lengths_; }
  BoundaryKind bc() const noexcept { return bc_; }
  const std::vector<int>& modes_per_axis() const noexcept { return modes_; }

  /// Total number of modes; equals the number of grid nodes.
  int size() const noexcept { return static_cast<int>(mu_.size()); }
  /// Laplacian eigenvalues, nondecreasing.
  const std::vector<double>& mu() const noexcept { return mu_; }
  /// Per-axis wavenumber index of sorted mode m (k in the sin/cos argument).
  std::array<int, 2> wavenumbers(int mode) const { return wavenumbers_[static_cast<std::size_t>(mode)]; }

  /// Node coordinates along one axis.
  const std::vector<double>& axis_nodes(int axis) const { return nodes_[static_cast<std::size_t>(axis)]; }
  /// Coordinates of grid node i. Nodes are row-major: i = ix * N_y + iy.
  std::array<double, 2> node(int i) const;
  /// Quadrature weight per grid node.
  const Eigen::VectorXd& quad_weights() const noexcept { return weights_; }

  /// Value of the orthonormal eigenfunction for mode m at point (x, y).
  double eigenfunction(int mode, double x, double y = 0.0) const;

  /// Grid values (nodes x d) -> modal coefficients (modes x d).
  Eigen::MatrixXd forward(const Eigen::MatrixXd& grid) const;
  /// Modal coefficients (modes x d) -> grid values (nodes x d).
  Eigen::MatrixXd inverse(const Eigen::MatrixXd& modal) const;

 private:
  SpectralBasis() = default;

  double axis_function(int axis, int k, double x) const;

  int space_dim_ = 1;
  std::vector<double> lengths_;
  BoundaryKind bc_ = BoundaryKind::Dirichlet;
  std::vector<int> modes_;
  std::vector<double> mu_;
  std::vector<std::array<int, 2>> wavenumbers_;
  // Tensor-ordered mode index of each sorted mode.
  std::vector<int> sorted_to_tensor_;
  std::vector<std::vector<double>> nodes_;
  Eigen::VectorXd weights_;
  // Per axis: synthesis matrix Phi(j, k) = phi_k(x_j) and analysis matrix
  // w * Phi^T.
  std::vector<Eigen::MatrixXd> synthesis_;
  std::vector<Eigen::MatrixXd> analysis_;
};

using BasisPtr = std::shared_ptr<const SpectralBasis>;

enum class Direction { Forward, Inverse };

/// d-component grid function with optional physical and modal
/// representations. Matrices are (nodes x d) and (modes x d).
class FieldState {
 public:
  static FieldState from_grid(BasisPtr basis, Eigen::MatrixXd grid);
  static FieldState from_modal(BasisPtr basis, Eigen::MatrixXd modal);
  /// Both representations; caller guarantees they agree.
  static FieldState from_both(BasisPtr basis, Eigen::MatrixXd grid, Eigen::MatrixXd modal);
  static FieldState zeros(BasisPtr basis, int components);

  const BasisPtr& basis() const noexcept { return basis_; }
  int components() const noexcept { return components_; }
  bool has_grid() const noexcept { return grid_.has_value(); }
  bool has_modal() const noexcept { return modal_.has_value(); }

  /// Throw MissingRepresentation when absent.
  const Eigen::MatrixXd& grid() const;
  const Eigen::MatrixXd& modal() const;

 private:
  FieldState(BasisPtr basis, std::optional<Eigen::MatrixXd> grid, std::optional<Eigen::MatrixXd> modal);

  BasisPtr basis_;
  int components_ = 0;
  std::optional<Eigen::MatrixXd> grid_;
  std::optional<Eigen::MatrixXd> modal_;
};

/// Forward fills the modal coefficients from grid values; Inverse fills grid
/// values from modal coefficients. The result carries both.
FieldState transform(const FieldState& state, Direction direction);

/// Makes sure both representations are present, transforming if needed.
FieldState complete(const FieldState& state);

/// Applies the Laplacian: modal coefficients scaled by -mu_k. Needs the
/// modal representation; returns both.
FieldState laplacian_apply(const FieldState& state);

/// Discrete L2 inner product (quadrature on grid values).
double inner_product(const FieldState& a, const FieldState& b);
double l2_norm(const FieldState& state);
/// Per-component discrete L2 norms.
Eigen::VectorXd component_norms(const FieldState& state);
double max_abs_difference(const FieldState& a, const FieldState& b);

}  // namespace crd
