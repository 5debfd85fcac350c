#include "crd/matrix_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "crd/error.hpp"

namespace crd {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;

int numerical_rank(const ComplexMatrix& a, double tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  const double threshold = tol * std::max(1.0, s(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > threshold) ++rank;
  }
  return rank;
}

// Block sizes from ranks r_k of (M - lambda I)^k: the number of blocks of
// size >= k is r_{k-1} - r_k.
std::vector<int> estimate_blocks(const Eigen::MatrixXd& m, std::complex<double> lambda, int multiplicity,
                                 double tol, bool& consistent) {
  const int d = static_cast<int>(m.rows());
  if (multiplicity == 1) {
    consistent = true;
    return {1};
  }
  const ComplexMatrix a = m.cast<std::complex<double>>() - lambda * ComplexMatrix::Identity(d, d);
  std::vector<int> ranks{d};
  ComplexMatrix power = ComplexMatrix::Identity(d, d);
  for (int k = 1; k <= multiplicity; ++k) {
    power = power * a;
    ranks.push_back(numerical_rank(power, tol));
  }
  std::vector<int> at_least(multiplicity + 2, 0);
  for (int k = 1; k <= multiplicity; ++k) at_least[k] = std::max(0, ranks[k - 1] - ranks[k]);
  std::vector<int> sizes;
  int total = 0;
  for (int k = multiplicity; k >= 1; --k) {
    const int exactly = std::max(0, at_least[k] - at_least[k + 1]);
    for (int i = 0; i < exactly; ++i) sizes.push_back(k);
    total += exactly * k;
  }
  consistent = (total == multiplicity);
  return sizes;
}

std::string format_complex(std::complex<double> z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

double commutator_norm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a * b - b * a).norm();
}

}  // namespace

DiffusionMatrix::DiffusionMatrix(int d, const std::vector<double>& row_major) {
  if (d < 1) throw Error(ErrorKind::ValidationError, "matrix dimension d must be >= 1");
  if (row_major.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) {
    throw Error(ErrorKind::ValidationError, "matrix has " + std::to_string(row_major.size()) +
                                                " entries, expected d*d = " + std::to_string(d * d));
  }
  m_.resize(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m_(i, j) = row_major[static_cast<std::size_t>(i * d + j)];
  }
  if (!m_.allFinite()) throw Error(ErrorKind::ValidationError, "matrix entries must be finite");
  norm_ = m_.norm();
}

DiffusionMatrix::DiffusionMatrix(const Eigen::MatrixXd& m) : m_(m) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) throw Error(ErrorKind::ValidationError, "matrix must be square, d >= 1");
  if (!m_.allFinite()) throw Error(ErrorKind::ValidationError, "matrix entries must be finite");
  norm_ = m_.norm();
}

std::vector<double> DiffusionMatrix::row_major() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m_.size()));
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = 0; j < m_.cols(); ++j) out.push_back(m_(i, j));
  }
  return out;
}

bool DiffusionMatrix::is_zero() const noexcept {
  return (m_.array() == 0.0).all();
}

Eigen::MatrixXd DiffusionMatrix::block(int which) const {
  if (dim() % 2 != 0) throw Error(ErrorKind::OddDimension, "block views need an even dimension");
  if (which < 1 || which > 4) throw Error(ErrorKind::InvalidArgument, "block index must be 1..4");
  const int n = dim() / 2;
  const int r = (which - 1) / 2;
  const int c = (which - 1) % 2;
  return m_.block(r * n, c * n, n, n);
}

double default_tol_cluster(const DiffusionMatrix& m) {
  return 1e-8 * (m.norm() > 0.0 ? m.norm() : 1.0);
}

double default_tol_eig(const DiffusionMatrix& m) {
  return 1e-10 * (1.0 + m.norm());
}

SpectrumReport compute_spectrum(const DiffusionMatrix& m, std::optional<double> tol_cluster) {
  SpectrumReport report;
  report.tol_cluster = tol_cluster.value_or(default_tol_cluster(m));
  if (!(report.tol_cluster > 0.0)) throw Error(ErrorKind::SpectrumError, "tol_cluster must be positive");

  const Eigen::MatrixXd& a = m.matrix();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::SpectrumError, "eigenvalue iteration did not converge");
  }
  const Eigen::VectorXcd values = solver.eigenvalues();
  report.eigenvalues.assign(values.data(), values.data() + values.size());
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  for (const auto& z : report.eigenvalues) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::SpectrumError, "eigenvalue iteration produced non-finite values");
    }
  }

  report.normality_defect = (a * a.transpose() - a.transpose() * a).norm();
  report.min_real_part = std::numeric_limits<double>::infinity();
  for (const auto& z : report.eigenvalues) report.min_real_part = std::min(report.min_real_part, z.real());

  // Single-linkage clustering via union-find.
  const std::size_t count = report.eigenvalues.size();
  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const double gap = std::abs(report.eigenvalues[i] - report.eigenvalues[j]);
      if (gap <= report.tol_cluster) {
        parent[find(j)] = find(i);
        if (gap > 0.0) report.diagnostic = true;
      }
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<long> group_of(count, -1);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t root = find(i);
    if (group_of[root] < 0) {
      group_of[root] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(group_of[root])].push_back(i);
  }
  for (const auto& members : groups) {
    EigenCluster cluster;
    std::complex<double> sum = 0.0;
    for (std::size_t i : members) sum += report.eigenvalues[i];
    cluster.multiplicity = static_cast<int>(members.size());
    cluster.value = sum / static_cast<double>(members.size());
    bool consistent = true;
    cluster.block_sizes = estimate_blocks(a, cluster.value, cluster.multiplicity, report.tol_cluster, consistent);
    if (!consistent) report.diagnostic = true;
    report.clusters.push_back(std::move(cluster));
  }
  return report;
}

WellPosednessReport check_h0(const DiffusionMatrix& m, std::optional<double> tol_eig) {
  if (m.is_zero()) {
    throw Error(ErrorKind::ZeroMatrix, "the diffusion matrix is the zero matrix; the system is then not parabolic");
  }
  WellPosednessReport report;
  report.tol_eig = tol_eig.value_or(default_tol_eig(m));
  report.is_zero_matrix = false;
  report.spectrum = compute_spectrum(m);
  report.h0_pass = report.spectrum.min_real_part >= -report.tol_eig;

  for (const auto& z : report.spectrum.eigenvalues) {
    if (std::abs(z.real()) <= report.tol_eig) {
      report.notes.push_back("eigenvalue " + format_complex(z) +
                             " lies within tol_eig of the imaginary axis; accepted (closed half-plane)");
    }
  }
  if (report.spectrum.diagnostic) {
    report.notes.push_back("eigenvalue clusters closer than tol_cluster; Jordan structure is a diagnostic estimate");
  }

  report.symbol_accretive = is_symbol_accretive(m, report.tol_eig);
  if (report.h0_pass && !report.symbol_accretive) {
    report.notes.push_back("spectrum in the closed right half-plane but (M + M^T)/2 is indefinite; "
                           "modal propagators may grow transiently in norm");
  }
  return report;
}

bool is_symbol_accretive(const DiffusionMatrix& m, std::optional<double> tol_eig) {
  const Eigen::MatrixXd hermitian = 0.5 * (m.matrix() + m.matrix().transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sym(hermitian, Eigen::EigenvaluesOnly);
  return sym.eigenvalues().minCoeff() >= -tol_eig.value_or(default_tol_eig(m));
}

WellPosednessReport block_conditions(const DiffusionMatrix& m, std::optional<double> tol_eig) {
  WellPosednessReport report = check_h0(m, tol_eig);
  if (m.dim() % 2 != 0) {
    report.notes.push_back("OddDimension: block conditions need d = 2n; d = " + std::to_string(m.dim()));
    return report;
  }
  const Eigen::MatrixXd b1 = m.block(1), b2 = m.block(2), b3 = m.block(3), b4 = m.block(4);
  const double tol_comm = report.tol_eig * (1.0 + m.norm());
  const std::vector<const Eigen::MatrixXd*> blocks{&b1, &b2, &b3, &b4};
  BlockConditions record;
  record.d_even = true;
  record.blocks_commute = true;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      if (commutator_norm(*blocks[i], *blocks[j]) > tol_comm) record.blocks_commute = false;
    }
  }
  auto smallest_singular = [](const Eigen::MatrixXd& x) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
    return svd.singularValues().minCoeff();
  };
  record.m1_invertible = smallest_singular(b1) > report.tol_eig;
  record.m4_invertible = smallest_singular(b4) > report.tol_eig;
  report.blocks = record;
  report.notes.push_back("kernel conditions on the diagonal block operators are checked as invertibility of "
                         "M1 and M4 (the Dirichlet Laplacian is injective)");
  return report;
}

KouachiConditions kouachi_conditions(double alpha, double beta, double gamma) {
  if (beta * gamma < 0.0) {
    throw Error(ErrorKind::NegativeProduct, "beta * gamma < 0: sqrt(beta gamma) is not real");
  }
  if (beta < 0.0 || gamma < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "beta and gamma must be nonnegative");
  }
  KouachiConditions out;
  out.mean_dominance = 2.0 * alpha > beta + gamma;
  out.geomean_dominance = alpha > std::sqrt(beta * gamma);
  return out;
}

std::vector<double> kouachi_eigenvalues(double alpha, double beta, double gamma) {
  if (beta * gamma < 0.0) {
    throw Error(ErrorKind::NegativeProduct, "beta * gamma < 0: eigenvalues are complex");
  }
  const double root = std::sqrt(beta * gamma);
  return {alpha + root, alpha - root};
}

}  // namespace crd
