#pragma once

#include <functional>

#include <Eigen/Dense>

namespace crd::detail {

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct GmresResult {
  int iterations = 0;
  double residual = 0.0;  // ||b - A x||, recurrence estimate
  bool converged = false;
};

/// Restarted, right-preconditioned GMRES for A x = b. `x` holds the initial
/// guess on entry. Stops when ||b - A x|| <= atol.
GmresResult gmres(const LinearMap& apply, const LinearMap& precondition, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                  double atol, int restart, int max_iter);

}  // namespace crd::detail
