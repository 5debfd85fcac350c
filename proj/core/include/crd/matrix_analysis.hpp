#pragma once

// Spectral diagnostics of the diffusion matrix M and the matrix-level
// well-posedness verdicts (eigenvalue half-plane test, block commutation,
// symbol accretivity, Kouachi inequalities).

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace crd {

/// Real d x d diffusion matrix. Immutable once constructed.
class DiffusionMatrix {
 public:
  /// Throws ValidationError when d < 1, the entry count is not d*d, or an
  /// entry is not finite.
  DiffusionMatrix(int d, const std::vector<double>& row_major);
  explicit DiffusionMatrix(const Eigen::MatrixXd& m);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  std::vector<double> row_major() const;

  /// Frobenius norm.
  double norm() const noexcept { return norm_; }
  bool is_zero() const noexcept;

  /// n x n block M1..M4 (1-based, row-major block order) for d = 2n.
  /// Throws OddDimension when d is odd.
  Eigen::MatrixXd block(int which) const;

 private:
  Eigen::MatrixXd m_;
  double norm_ = 0.0;
};

/// Group of computed eigenvalues merged at tol_cluster.
struct EigenCluster {
  std::complex<double> value;
  int multiplicity = 0;
  /// Jordan block sizes estimated from rank((M - value I)^k), descending.
  std::vector<int> block_sizes;
};

struct SpectrumReport {
  /// All d eigenvalues, ordered by (real, imag).
  std::vector<std::complex<double>> eigenvalues;
  std::vector<EigenCluster> clusters;
  /// ||M M^T - M^T M||_F
  double normality_defect = 0.0;
  double min_real_part = 0.0;
  /// Set when distinct computed eigenvalues were merged, or when the rank
  /// tests gave block sizes inconsistent with the multiplicity.
  bool diagnostic = false;
  double tol_cluster = 0.0;
};

/// Default clustering tolerance: 1e-8 * ||M||_F (1e-8 for the zero matrix).
double default_tol_cluster(const DiffusionMatrix& m);
/// Default half-plane / definiteness tolerance: 1e-10 * (1 + ||M||_F).
double default_tol_eig(const DiffusionMatrix& m);

/// Throws SpectrumError when the Schur iteration fails to converge or the
/// tolerance is not positive.
SpectrumReport compute_spectrum(const DiffusionMatrix& m, std::optional<double> tol_cluster = std::nullopt);

struct BlockConditions {
  bool blocks_commute = false;
  bool m1_invertible = false;
  bool m4_invertible = false;
  bool d_even = true;
};

struct WellPosednessReport {
  bool h0_pass = false;
  bool is_zero_matrix = false;
  std::optional<BlockConditions> blocks;
  /// Hermitian part (M + M^T)/2 positive semidefinite within tol_eig.
  bool symbol_accretive = false;
  std::vector<std::string> notes;
  SpectrumReport spectrum;
  double tol_eig = 0.0;
};

/// Eigenvalue half-plane test plus symbol accretivity.
/// Throws ZeroMatrix when every entry of M is exactly zero.
WellPosednessReport check_h0(const DiffusionMatrix& m, std::optional<double> tol_eig = std::nullopt);

/// (M + M^T)/2 positive semidefinite within tol_eig (zero matrix included).
bool is_symbol_accretive(const DiffusionMatrix& m, std::optional<double> tol_eig = std::nullopt);

/// check_h0 with the block-operator record filled in when d is even. For odd
/// d the record stays empty and a note is added.
WellPosednessReport block_conditions(const DiffusionMatrix& m, std::optional<double> tol_eig = std::nullopt);

struct KouachiConditions {
  bool mean_dominance = false;  // 2 alpha > beta + gamma
  bool geomean_dominance = false;  // alpha > sqrt(beta gamma)
};

/// Throws NegativeProduct when beta * gamma < 0 and InvalidArgument when
/// beta or gamma is negative.
KouachiConditions kouachi_conditions(double alpha, double beta, double gamma);

/// Closed-form eigenvalues {alpha + sqrt(beta gamma), alpha - sqrt(beta gamma)}
/// of [[alpha, beta], [gamma, alpha]] for beta * gamma >= 0.
std::vector<double> kouachi_eigenvalues(double alpha, double beta, double gamma);

}  // namespace crd
