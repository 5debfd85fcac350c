#pragma once

// Exact-in-time linear diffusion: every Laplacian mode k evolves by the
// d x d propagator exp(-t mu_k M).

#include <map>
#include <span>

#include <Eigen/Dense>

#include "crd/matrix_analysis.hpp"
#include "crd/spectral_domain.hpp"

namespace crd {

enum class ExpmMethod {
  /// Pade(3..13) scaling and squaring.
  ScalingSquaring,
  /// Eigendecomposition; falls back to scaling and squaring when the
  /// eigenvector matrix has condition number above 1e8.
  Eigendecomposition,
};

/// exp(a) by scaling and squaring with a diagonal Pade approximant.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

/// exp(-t mu M). Requires mu >= 0 and t >= 0 (InvalidArgument otherwise).
Eigen::MatrixXd modal_propagator(const DiffusionMatrix& m, double mu, double t,
                                 ExpmMethod method = ExpmMethod::ScalingSquaring);

/// Largest |eigenvalue| of a square real matrix.
double spectral_radius(const Eigen::MatrixXd& a);

/// Per-mode propagators for one basis and one time increment. Modes sharing
/// the same mu share a matrix.
class ModalPropagator {
 public:
  ModalPropagator(const DiffusionMatrix& m, std::span<const double> mu, double t,
                  ExpmMethod method = ExpmMethod::ScalingSquaring);

  double time() const noexcept { return t_; }
  int modes() const noexcept { return static_cast<int>(index_.size()); }
  const Eigen::MatrixXd& operator[](int mode) const { return distinct_[index_[static_cast<std::size_t>(mode)]]; }

  /// Multiplies every mode's coefficient row by its propagator.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& modal) const;

  /// max_k spectral radius of P_k(t).
  double max_spectral_radius() const;
  /// max_k ||P_k(t)||_2 (transient growth for non-normal M).
  double max_operator_norm() const;

 private:
  double t_ = 0.0;
  std::vector<Eigen::MatrixXd> distinct_;
  std::vector<std::size_t> index_;
};

struct DiffuseOptions {
  /// Skip the eigenvalue half-plane gate.
  bool allow_h0_violation = false;
  ExpmMethod method = ExpmMethod::ScalingSquaring;
};

/// Throws H0Violation when M has an eigenvalue with real part below
/// -tol_eig, unless overridden.
void require_h0(const DiffusionMatrix& m, bool allow_h0_violation);

/// Solves u_t = M Lap u over time t. Needs the modal representation (the
/// grid is transformed when only grid values are present). Returns both.
FieldState diffuse(const FieldState& state, const DiffusionMatrix& m, double t, const DiffuseOptions& options = {});

}  // namespace crd
