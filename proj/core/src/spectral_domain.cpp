#include "crd/spectral_domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "crd/error.hpp"

namespace crd {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

std::string_view to_string(BoundaryKind bc) noexcept {
  return bc == BoundaryKind::Dirichlet ? "dirichlet" : "neumann";
}

std::shared_ptr<const SpectralBasis> SpectralBasis::build(int space_dim, std::vector<double> lengths, BoundaryKind bc,
                                                          std::vector<int> modes_per_axis) {
  if (space_dim != 1 && space_dim != 2) {
    throw Error(ErrorKind::UnsupportedDim, "space_dim must be 1 or 2, got " + std::to_string(space_dim));
  }
  if (lengths.size() != static_cast<std::size_t>(space_dim) ||
      modes_per_axis.size() != static_cast<std::size_t>(space_dim)) {
    throw Error(ErrorKind::ValidationError, "lengths and modes_per_axis need one entry per axis");
  }
  for (double l : lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorKind::ValidationError, "box lengths must be positive");
  }
  for (int n : modes_per_axis) {
    if (n < 1) throw Error(ErrorKind::ValidationError, "modes_per_axis must be >= 1");
  }

  std::shared_ptr<SpectralBasis> basis(new SpectralBasis());
  basis->space_dim_ = space_dim;
  basis->lengths_ = std::move(lengths);
  basis->bc_ = bc;
  basis->modes_ = std::move(modes_per_axis);

  const double pi = std::numbers::pi;
  const int offset = bc == BoundaryKind::Dirichlet ? 1 : 0;
  std::vector<std::vector<double>> axis_mu(static_cast<std::size_t>(space_dim));
  for (int axis = 0; axis < space_dim; ++axis) {
    const int n = basis->modes_[static_cast<std::size_t>(axis)];
    const double len = basis->lengths_[static_cast<std::size_t>(axis)];
    std::vector<double> nodes(static_cast<std::size_t>(n));
    double w = 0.0;
    if (bc == BoundaryKind::Dirichlet) {
      w = len / (n + 1);
      for (int j = 0; j < n; ++j) nodes[static_cast<std::size_t>(j)] = (j + 1) * len / (n + 1);
    } else {
      w = len / n;
      for (int j = 0; j < n; ++j) nodes[static_cast<std::size_t>(j)] = (j + 0.5) * len / n;
    }
    basis->nodes_.push_back(nodes);
    auto& mu = axis_mu[static_cast<std::size_t>(axis)];
    for (int k = 0; k < n; ++k) {
      const double wavenumber = (k + offset) * pi / len;
      mu.push_back(wavenumber * wavenumber);
    }
    Eigen::MatrixXd synthesis(n, n);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) synthesis(j, k) = basis->axis_function(axis, k + offset, nodes[static_cast<std::size_t>(j)]);
    }
    basis->analysis_.push_back(w * synthesis.transpose());
    basis->synthesis_.push_back(std::move(synthesis));
  }

  const int n1 = basis->modes_[0];
  const int n2 = space_dim == 2 ? basis->modes_[1] : 1;
  const int total = n1 * n2;
  std::vector<double> tensor_mu(static_cast<std::size_t>(total));
  for (int a = 0; a < n1; ++a) {
    for (int b = 0; b < n2; ++b) {
      double value = axis_mu[0][static_cast<std::size_t>(a)];
      if (space_dim == 2) value += axis_mu[1][static_cast<std::size_t>(b)];
      tensor_mu[static_cast<std::size_t>(a * n2 + b)] = value;
    }
  }
  basis->sorted_to_tensor_.resize(static_cast<std::size_t>(total));
  std::iota(basis->sorted_to_tensor_.begin(), basis->sorted_to_tensor_.end(), 0);
  std::stable_sort(basis->sorted_to_tensor_.begin(), basis->sorted_to_tensor_.end(),
                   [&](int x, int y) { return tensor_mu[static_cast<std::size_t>(x)] < tensor_mu[static_cast<std::size_t>(y)]; });
  for (int t : basis->sorted_to_tensor_) {
    basis->mu_.push_back(tensor_mu[static_cast<std::size_t>(t)]);
    const int a = t / n2;
    const int b = t % n2;
    basis->wavenumbers_.push_back({a + offset, space_dim == 2 ? b + offset : 0});
  }

  basis->weights_.resize(total);
  const double w1 = bc == BoundaryKind::Dirichlet ? basis->lengths_[0] / (n1 + 1) : basis->lengths_[0] / n1;
  double w2 = 1.0;
  if (space_dim == 2) {
    w2 = bc == BoundaryKind::Dirichlet ? basis->lengths_[1] / (n2 + 1) : basis->lengths_[1] / n2;
  }
  basis->weights_.setConstant(w1 * w2);
  return basis;
}

double SpectralBasis::axis_function(int axis, int k, double x) const {
  const double len = lengths_[static_cast<std::size_t>(axis)];
  const double arg = k * std::numbers::pi * x / len;
  if (bc_ == BoundaryKind::Dirichlet) return std::sqrt(2.0 / len) * std::sin(arg);
  if (k == 0) return 1.0 / std::sqrt(len);
  return std::sqrt(2.0 / len) * std::cos(arg);
}

std::array<double, 2> SpectralBasis::node(int i) const {
  if (space_dim_ == 1) return {nodes_[0][static_cast<std::size_t>(i)], 0.0};
  const int n2 = modes_[1];
  return {nodes_[0][static_cast<std::size_t>(i / n2)], nodes_[1][static_cast<std::size_t>(i % n2)]};
}

double SpectralBasis::eigenfunction(int mode, double x, double y) const {
  const auto k = wavenumbers(mode);
  double value = axis_function(0, k[0], x);
  if (space_dim_ == 2) value *= axis_function(1, k[1], y);
  return value;
}

Eigen::MatrixXd SpectralBasis::forward(const Eigen::MatrixXd& grid) const {
  const int total = size();
  if (grid.rows() != total) throw Error(ErrorKind::InvalidArgument, "grid shape does not match basis");
  Eigen::MatrixXd modal(total, grid.cols());
  if (space_dim_ == 1) {
    modal.noalias() = analysis_[0] * grid;
    return modal;
  }
  const int n1 = modes_[0], n2 = modes_[1];
  for (Eigen::Index c = 0; c < grid.cols(); ++c) {
    Eigen::Map<const RowMajor> values(grid.col(c).data(), n1, n2);
    const RowMajor coeffs = analysis_[0] * values * analysis_[1].transpose();
    for (int m = 0; m < total; ++m) modal(m, c) = coeffs.data()[sorted_to_tensor_[static_cast<std::size_t>(m)]];
  }
  return modal;
}

Eigen::MatrixXd SpectralBasis::inverse(const Eigen::MatrixXd& modal) const {
  const int total = size();
  if (modal.rows() != total) throw Error(ErrorKind::InvalidArgument, "modal shape does not match basis");
  Eigen::MatrixXd grid(total, modal.cols());
  if (space_dim_ == 1) {
    grid.noalias() = synthesis_[0] * modal;
    return grid;
  }
  const int n1 = modes_[0], n2 = modes_[1];
  RowMajor coeffs(n1, n2);
  for (Eigen::Index c = 0; c < modal.cols(); ++c) {
    for (int m = 0; m < total; ++m) coeffs.data()[sorted_to_tensor_[static_cast<std::size_t>(m)]] = modal(m, c);
    const RowMajor values = synthesis_[0] * coeffs * synthesis_[1].transpose();
    grid.col(c) = Eigen::Map<const Eigen::VectorXd>(values.data(), total);
  }
  return grid;
}

FieldState::FieldState(BasisPtr basis, std::optional<Eigen::MatrixXd> grid, std::optional<Eigen::MatrixXd> modal)
    : basis_(std::move(basis)), grid_(std::move(grid)), modal_(std::move(modal)) {
  if (!basis_) throw Error(ErrorKind::InvalidArgument, "field needs a basis");
  const auto check = [&](const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != basis_->size()) {
      throw Error(ErrorKind::InvalidArgument, std::string(what) + " rows do not match the basis size");
    }
    if (m.cols() < 1) throw Error(ErrorKind::InvalidArgument, "field needs at least one component");
  };
  if (grid_) check(*grid_, "grid");
  if (modal_) check(*modal_, "modal");
  if (grid_ && modal_ && grid_->cols() != modal_->cols()) {
    throw Error(ErrorKind::InvalidArgument, "grid and modal component counts differ");
  }
  components_ = static_cast<int>(grid_ ? grid_->cols() : modal_->cols());
}

FieldState FieldState::from_grid(BasisPtr basis, Eigen::MatrixXd grid) {
  return FieldState(std::move(basis), std::move(grid), std::nullopt);
}

FieldState FieldState::from_modal(BasisPtr basis, Eigen::MatrixXd modal) {
  return FieldState(std::move(basis), std::nullopt, std::move(modal));
}

FieldState FieldState::from_both(BasisPtr basis, Eigen::MatrixXd grid, Eigen::MatrixXd modal) {
  return FieldState(std::move(basis), std::move(grid), std::move(modal));
}

FieldState FieldState::zeros(BasisPtr basis, int components) {
  const int n = basis->size();
  return FieldState(std::move(basis), Eigen::MatrixXd::Zero(n, components), Eigen::MatrixXd::Zero(n, components));
}

const Eigen::MatrixXd& FieldState::grid() const {
  if (!grid_) throw Error(ErrorKind::MissingRepresentation, "field has no grid representation");
  return *grid_;
}

const Eigen::MatrixXd& FieldState::modal() const {
  if (!modal_) throw Error(ErrorKind::MissingRepresentation, "field has no modal representation");
  return *modal_;
}

FieldState transform(const FieldState& state, Direction direction) {
  if (direction == Direction::Forward) {
    const Eigen::MatrixXd& grid = state.grid();
    return FieldState::from_both(state.basis(), grid, state.basis()->forward(grid));
  }
  const Eigen::MatrixXd& modal = state.modal();
  return FieldState::from_both(state.basis(), state.basis()->inverse(modal), modal);
}

FieldState complete(const FieldState& state) {
  if (state.has_grid() && state.has_modal()) return state;
  return transform(state, state.has_grid() ? Direction::Forward : Direction::Inverse);
}

FieldState laplacian_apply(const FieldState& state) {
  Eigen::MatrixXd modal = state.modal();
  const auto& mu = state.basis()->mu();
  for (Eigen::Index m = 0; m < modal.rows(); ++m) modal.row(m) *= -mu[static_cast<std::size_t>(m)];
  return transform(FieldState::from_modal(state.basis(), std::move(modal)), Direction::Inverse);
}

double inner_product(const FieldState& a, const FieldState& b) {
  const FieldState fa = complete(a);
  const FieldState fb = complete(b);
  const Eigen::MatrixXd& ga = fa.grid();
  const Eigen::MatrixXd& gb = fb.grid();
  if (ga.rows() != gb.rows() || ga.cols() != gb.cols()) {
    throw Error(ErrorKind::InvalidArgument, "fields have different shapes");
  }
  const Eigen::VectorXd& w = a.basis()->quad_weights();
  return (w.asDiagonal() * ga.cwiseProduct(gb)).sum();
}

double l2_norm(const FieldState& state) {
  return std::sqrt(std::max(0.0, inner_product(state, state)));
}

Eigen::VectorXd component_norms(const FieldState& state) {
  const FieldState full = complete(state);
  const Eigen::VectorXd& w = full.basis()->quad_weights();
  Eigen::VectorXd out(full.components());
  for (int c = 0; c < full.components(); ++c) {
    out(c) = std::sqrt(w.dot(full.grid().col(c).cwiseAbs2()));
  }
  return out;
}

double max_abs_difference(const FieldState& a, const FieldState& b) {
  const FieldState fa = complete(a);
  const FieldState fb = complete(b);
  return (fa.grid() - fb.grid()).cwiseAbs().maxCoeff();
}

}  // namespace crd
