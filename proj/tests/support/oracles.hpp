#pragma once

// Reference computations that share no code with the library: dense
// method-of-lines operators, classical RK4, and random matrix generators.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "crd/error.hpp"

namespace oracle {

// Second-derivative matrix on the Dirichlet nodes jL/(N+1), j = 1..N, built
// from the sine interpolant: D2 = S diag(-(k pi / L)^2) S^-1.
inline Eigen::MatrixXd sine_second_derivative(int n, double length) {
  Eigen::MatrixXd s(n, n);
  Eigen::VectorXd lam(n);
  for (int k = 1; k <= n; ++k) {
    lam(k - 1) = -std::pow(k * std::numbers::pi / length, 2);
    for (int j = 1; j <= n; ++j) s(j - 1, k - 1) = std::sin(k * std::numbers::pi * j / (n + 1));
  }
  const Eigen::MatrixXd s_inv = s.fullPivLu().inverse();
  return s * lam.asDiagonal() * s_inv;
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

// Classical fourth-order Runge-Kutta for y' = A y.
inline Eigen::VectorXd rk4_linear(const Eigen::MatrixXd& a, Eigen::VectorXd y, double t, int steps) {
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = a * y;
    const Eigen::VectorXd k2 = a * (y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = a * (y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = a * (y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

// Classical RK4 for a general autonomous system.
inline Eigen::VectorXd rk4(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, Eigen::VectorXd y,
                           double t, int steps) {
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = f(y);
    const Eigen::VectorXd k2 = f(y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

// 2x2 eigenvalues from the characteristic polynomial.
inline std::pair<std::complex<double>, std::complex<double>> eig2(const Eigen::Matrix2d& m) {
  const double tr = m.trace();
  const double det = m.determinant();
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr / 4.0 - det));
  return {tr / 2.0 + disc, tr / 2.0 - disc};
}

// Random 2x2 matrix whose eigenvalues lie in the closed right half-plane:
// a random matrix shifted so its smaller real eigenvalue part lands in [0, 1].
inline Eigen::Matrix2d random_h0_matrix(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_real_distribution<double> shift(0.0, 1.0);
  Eigen::Matrix2d m;
  m << u(rng), u(rng), u(rng), u(rng);
  const auto [a, b] = eig2(m);
  const double lo = std::min(a.real(), b.real());
  return m + (shift(rng) - lo) * Eigen::Matrix2d::Identity();
}

// Random normal 2x2 matrix with H0: symmetric PSD or a scaled rotation a I + b J.
inline Eigen::Matrix2d random_normal_h0_matrix(std::mt19937_64& rng, int variant) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.0, 2.0);
  Eigen::Matrix2d m;
  if (variant % 2 == 0) {
    const double angle = u(rng) * std::numbers::pi;
    Eigen::Matrix2d q;
    q << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    m = q * Eigen::Vector2d(pos(rng), pos(rng)).asDiagonal() * q.transpose();
  } else {
    const double a = pos(rng), b = 2.0 * u(rng);
    m << a, -b, b, a;
  }
  return m;
}

template <typename F>
crd::ErrorKind error_kind(F&& f) {
  try {
    f();
  } catch (const crd::Error& e) {
    return e.kind();
  }
  throw std::runtime_error("expected a crd::Error");
}

}  // namespace oracle
