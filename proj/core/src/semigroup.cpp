#include "crd/semigroup.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "crd/error.hpp"

namespace crd {

namespace {

// Diagonal Pade approximant coefficients and the 1-norm bounds below which
// degree m attains double-precision backward error without scaling.
constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                        2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13{64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                         1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                         670442572800.0,      33522128640.0,       1323241920.0,
                                         40840800.0,          960960.0,            16380.0,
                                         182.0,               1.0};
constexpr std::array<double, 4> kTheta{1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                                       2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
Eigen::MatrixXd pade_low(const Eigen::MatrixXd& a, const std::array<double, N>& b) {
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  Eigen::MatrixXd power = identity;
  Eigen::MatrixXd u_inner = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k + 1 < N; k += 2) {
    v += b[k] * power;
    u_inner += b[k + 1] * power;
    power = power * a2;
  }
  const Eigen::MatrixXd u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

Eigen::MatrixXd pade13(const Eigen::MatrixXd& a) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * identity);
  const Eigen::MatrixXd v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * identity;
  return (v - u).partialPivLu().solve(v + u);
}

double one_norm(const Eigen::MatrixXd& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

bool expm_by_eigen(const Eigen::MatrixXd& a, Eigen::MatrixXd& out) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) return false;
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vectors);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (!(smallest > 0.0) || s(0) / smallest > 1e8) return false;
  const Eigen::VectorXcd exp_values = solver.eigenvalues().array().exp();
  const Eigen::MatrixXcd result = vectors * exp_values.asDiagonal() * vectors.inverse();
  out = result.real();
  return out.allFinite();
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidArgument, "expm needs a square matrix");
  const double norm = one_norm(a);
  if (norm <= kTheta[0]) return pade_low(a, kPade3);
  if (norm <= kTheta[1]) return pade_low(a, kPade5);
  if (norm <= kTheta[2]) return pade_low(a, kPade7);
  if (norm <= kTheta[3]) return pade_low(a, kPade9);
  const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
  Eigen::MatrixXd result = pade13(a / std::ldexp(1.0, squarings));
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Eigen::MatrixXd modal_propagator(const DiffusionMatrix& m, double mu, double t, ExpmMethod method) {
  if (!(mu >= 0.0) || !(t >= 0.0) || !std::isfinite(mu) || !std::isfinite(t)) {
    throw Error(ErrorKind::InvalidArgument, "modal propagator needs finite mu >= 0 and t >= 0");
  }
  const Eigen::MatrixXd generator = (-t * mu) * m.matrix();
  if (method == ExpmMethod::Eigendecomposition) {
    Eigen::MatrixXd out;
    if (expm_by_eigen(generator, out)) return out;
  }
  return expm(generator);
}

double spectral_radius(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::SpectrumError, "eigenvalue iteration did not converge");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

ModalPropagator::ModalPropagator(const DiffusionMatrix& m, std::span<const double> mu, double t, ExpmMethod method)
    : t_(t) {
  std::map<double, std::size_t> seen;
  index_.reserve(mu.size());
  for (double value : mu) {
    auto [it, inserted] = seen.try_emplace(value, distinct_.size());
    if (inserted) distinct_.push_back(modal_propagator(m, value, t, method));
    index_.push_back(it->second);
  }
}

Eigen::MatrixXd ModalPropagator::apply(const Eigen::MatrixXd& modal) const {
  if (modal.rows() != modes()) throw Error(ErrorKind::InvalidArgument, "modal array does not match propagator modes");
  Eigen::MatrixXd out(modal.rows(), modal.cols());
  for (Eigen::Index k = 0; k < modal.rows(); ++k) {
    out.row(k).noalias() = modal.row(k) * distinct_[index_[static_cast<std::size_t>(k)]].transpose();
  }
  return out;
}

double ModalPropagator::max_spectral_radius() const {
  double out = 0.0;
  for (const auto& p : distinct_) out = std::max(out, spectral_radius(p));
  return out;
}

double ModalPropagator::max_operator_norm() const {
  double out = 0.0;
  for (const auto& p : distinct_) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(p);
    out = std::max(out, svd.singularValues()(0));
  }
  return out;
}

void require_h0(const DiffusionMatrix& m, bool allow_h0_violation) {
  if (allow_h0_violation) return;
  const SpectrumReport spectrum = compute_spectrum(m);
  if (spectrum.min_real_part < -default_tol_eig(m)) {
    throw Error(ErrorKind::H0Violation, "diffusion matrix has an eigenvalue with negative real part (min Re = " +
                                            std::to_string(spectrum.min_real_part) + ")");
  }
}

FieldState diffuse(const FieldState& state, const DiffusionMatrix& m, double t, const DiffuseOptions& options) {
  if (state.components() != m.dim()) {
    throw Error(ErrorKind::InvalidArgument, "field component count does not match the matrix dimension");
  }
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "diffusion time must be >= 0");
  require_h0(m, options.allow_h0_violation);
  const FieldState modal_state = state.has_modal() ? state : transform(state, Direction::Forward);
  const ModalPropagator propagator(m, modal_state.basis()->mu(), t, options.method);
  return transform(FieldState::from_modal(state.basis(), propagator.apply(modal_state.modal())), Direction::Inverse);
}

}  // namespace crd
