#include "gmres.hpp"

#include <cmath>
#include <vector>

namespace crd::detail {

GmresResult gmres(const LinearMap& apply, const LinearMap& precondition, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                  double atol, int restart, int max_iter) {
  GmresResult result;
  const Eigen::Index n = b.size();
  const int m = std::max(1, std::min<int>(restart, static_cast<int>(n)));

  Eigen::VectorXd r = b - apply(x);
  double beta = r.norm();
  result.residual = beta;
  if (beta <= atol) {
    result.converged = true;
    return result;
  }

  while (result.iterations < max_iter) {
    Eigen::MatrixXd basis(n, m + 1);
    Eigen::MatrixXd hessenberg = Eigen::MatrixXd::Zero(m + 1, m);
    std::vector<double> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
    g(0) = beta;
    basis.col(0) = r / beta;

    int j = 0;
    for (; j < m && result.iterations < max_iter; ++j, ++result.iterations) {
      Eigen::VectorXd w = apply(precondition(basis.col(j)));
      // Modified Gram-Schmidt, applied twice for stability.
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const double h = basis.col(i).dot(w);
          hessenberg(i, j) += h;
          w -= h * basis.col(i);
        }
      }
      hessenberg(j + 1, j) = w.norm();
      const bool breakdown = hessenberg(j + 1, j) <= 1e-300;
      if (!breakdown) basis.col(j + 1) = w / hessenberg(j + 1, j);

      for (int i = 0; i < j; ++i) {
        const double t = cs[static_cast<std::size_t>(i)] * hessenberg(i, j) + sn[static_cast<std::size_t>(i)] * hessenberg(i + 1, j);
        hessenberg(i + 1, j) = -sn[static_cast<std::size_t>(i)] * hessenberg(i, j) + cs[static_cast<std::size_t>(i)] * hessenberg(i + 1, j);
        hessenberg(i, j) = t;
      }
      const double denom = std::hypot(hessenberg(j, j), hessenberg(j + 1, j));
      cs[static_cast<std::size_t>(j)] = denom > 0.0 ? hessenberg(j, j) / denom : 1.0;
      sn[static_cast<std::size_t>(j)] = denom > 0.0 ? hessenberg(j + 1, j) / denom : 0.0;
      hessenberg(j, j) = denom;
      hessenberg(j + 1, j) = 0.0;
      g(j + 1) = -sn[static_cast<std::size_t>(j)] * g(j);
      g(j) = cs[static_cast<std::size_t>(j)] * g(j);
      result.residual = std::abs(g(j + 1));
      if (result.residual <= atol || breakdown) {
        ++j;
        ++result.iterations;
        break;
      }
    }

    const Eigen::VectorXd y =
        hessenberg.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    x += precondition(basis.leftCols(j) * y);
    r = b - apply(x);
    beta = r.norm();
    result.residual = beta;
    if (beta <= atol) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace crd::detail
