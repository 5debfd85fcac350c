#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "crd/error.hpp"
#include "crd/spectral_domain.hpp"
#include "oracles.hpp"

using crd::BoundaryKind;
using crd::Direction;
using crd::FieldState;
using crd::SpectralBasis;

namespace {

constexpr double pi = std::numbers::pi;

Eigen::MatrixXd sample(const SpectralBasis& b, const std::function<double(double, double)>& f) {
  Eigen::MatrixXd g(b.size(), 1);
  for (int i = 0; i < b.size(); ++i) {
    const auto p = b.node(i);
    g(i, 0) = f(p[0], p[1]);
  }
  return g;
}

Eigen::MatrixXd random_field(const crd::BasisPtr& b, int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd g(b->size(), d);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = n(rng);
  return g;
}

}  // namespace

TEST_SUITE("spectral_domain") {
  TEST_CASE("Dirichlet and Neumann eigenvalues in 1-D") {
    auto d = SpectralBasis::build(1, {pi}, BoundaryKind::Dirichlet, {3});
    CHECK(d->mu() == std::vector<double>{1.0, 4.0, 9.0});
    auto n = SpectralBasis::build(1, {pi}, BoundaryKind::Neumann, {3});
    CHECK(n->mu()[0] == 0.0);
    CHECK(n->mu()[1] == doctest::Approx(1.0));
    CHECK(n->mu()[2] == doctest::Approx(4.0));
  }

  TEST_CASE("2-D eigenvalues are sums of axis eigenvalues") {
    auto b = SpectralBasis::build(2, {pi, pi}, BoundaryKind::Dirichlet, {2, 2});
    REQUIRE(b->size() == 4);
    const double expected[] = {2, 5, 5, 8};
    for (int k = 0; k < 4; ++k) {
      CHECK(b->mu()[static_cast<std::size_t>(k)] == doctest::Approx(expected[k]));
      const auto w = b->wavenumbers(k);
      CHECK(b->mu()[static_cast<std::size_t>(k)] == doctest::Approx(w[0] * w[0] + w[1] * w[1]));
    }
    auto r = SpectralBasis::build(2, {1.0, 2.0}, BoundaryKind::Neumann, {3, 4});
    for (int k = 0; k < r->size(); ++k) {
      const auto w = r->wavenumbers(k);
      CHECK(r->mu()[static_cast<std::size_t>(k)] ==
            doctest::Approx(std::pow(w[0] * pi, 2) + std::pow(w[1] * pi / 2.0, 2)));
    }
  }

  TEST_CASE("eigenvalues are sorted, nonnegative, positive under Dirichlet") {
    for (auto bc : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
      auto b = SpectralBasis::build(2, {1.3, 0.7}, bc, {9, 6});
      CHECK(std::is_sorted(b->mu().begin(), b->mu().end()));
      for (double mu : b->mu()) {
        CHECK(mu >= 0.0);
        if (bc == BoundaryKind::Dirichlet) CHECK(mu > 0.0);
      }
    }
  }

  TEST_CASE("invalid bases") {
    CHECK(oracle::error_kind([] { SpectralBasis::build(3, {1, 1, 1}, BoundaryKind::Dirichlet, {2, 2, 2}); }) ==
          crd::ErrorKind::UnsupportedDim);
    CHECK(oracle::error_kind([] { SpectralBasis::build(1, {-1.0}, BoundaryKind::Dirichlet, {4}); }) ==
          crd::ErrorKind::ValidationError);
    CHECK(oracle::error_kind([] { SpectralBasis::build(1, {1.0}, BoundaryKind::Dirichlet, {0}); }) ==
          crd::ErrorKind::ValidationError);
  }

  TEST_CASE("discrete eigenfunctions are orthonormal") {
    for (auto bc : {BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
      auto b = SpectralBasis::build(2, {2.0, 1.0}, bc, {7, 5});
      Eigen::MatrixXd phi(b->size(), b->size());
      for (int i = 0; i < b->size(); ++i) {
        const auto p = b->node(i);
        for (int k = 0; k < b->size(); ++k) phi(i, k) = b->eigenfunction(k, p[0], p[1]);
      }
      const Eigen::MatrixXd gram = phi.transpose() * b->quad_weights().asDiagonal() * phi;
      CHECK((gram - Eigen::MatrixXd::Identity(b->size(), b->size())).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("sin x is a single mode") {
    auto b = SpectralBasis::build(1, {pi}, BoundaryKind::Dirichlet, {16});
    const auto modal = b->forward(sample(*b, [](double x, double) { return std::sin(x); }));
    CHECK(std::abs(modal(0, 0)) == doctest::Approx(std::sqrt(pi / 2.0)));
    CHECK(modal.bottomRows(15).cwiseAbs().maxCoeff() <= 1e-13);
  }

  TEST_CASE("zero field has zero coefficients") {
    auto b = SpectralBasis::build(2, {1, 1}, BoundaryKind::Neumann, {4, 4});
    CHECK(b->forward(Eigen::MatrixXd::Zero(16, 2)).isZero(0.0));
  }

  TEST_CASE("sin x + 3 sin 2x coefficients match direct quadrature") {
    auto b = SpectralBasis::build(1, {pi}, BoundaryKind::Dirichlet, {12});
    const auto f = [](double x, double) { return std::sin(x) + 3.0 * std::sin(2.0 * x); };
    const Eigen::MatrixXd modal = b->forward(sample(*b, f));
    // Direct quadrature on the nodes jL/(N+1) with weight L/(N+1) and phi_k = sqrt(2/L) sin(kx).
    const int n = 12;
    const double h = pi / (n + 1);
    for (int k = 1; k <= 3; ++k) {
      double c = 0.0;
      for (int j = 1; j <= n; ++j) c += h * f(j * h, 0) * std::sqrt(2.0 / pi) * std::sin(k * j * h);
      CHECK(std::abs(modal(k - 1, 0)) == doctest::Approx(std::abs(c)).epsilon(1e-12));
    }
    CHECK(modal(1, 0) / modal(0, 0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(modal(2, 0)) <= 1e-13);
  }

  TEST_CASE("transform directions and missing representations") {
    auto b = SpectralBasis::build(1, {1.0}, BoundaryKind::Neumann, {8});
    std::mt19937_64 rng(1);
    const Eigen::MatrixXd g = random_field(b, 2, rng);
    const auto s = FieldState::from_grid(b, g);
    CHECK_FALSE(s.has_modal());
    CHECK(oracle::error_kind([&] { (void)s.modal(); }) == crd::ErrorKind::MissingRepresentation);
    CHECK(oracle::error_kind([&] { crd::transform(s, Direction::Inverse); }) ==
          crd::ErrorKind::MissingRepresentation);
    const auto f = crd::transform(s, Direction::Forward);
    REQUIRE(f.has_modal());
    const auto back = crd::transform(FieldState::from_modal(b, f.modal()), Direction::Inverse);
    CHECK((back.grid() - g).norm() <= 1e-10 * g.norm());
    CHECK(oracle::error_kind([&] { crd::laplacian_apply(FieldState::from_grid(b, g)); }) ==
          crd::ErrorKind::MissingRepresentation);
  }

  TEST_CASE("Laplacian examples") {
    auto b = SpectralBasis::build(1, {pi}, BoundaryKind::Dirichlet, {16});
    auto lap = [&](const std::function<double(double, double)>& f) {
      return crd::laplacian_apply(crd::transform(FieldState::from_grid(b, sample(*b, f)), Direction::Forward));
    };
    const auto s1 = lap([](double x, double) { return std::sin(x); });
    CHECK((s1.grid() + sample(*b, [](double x, double) { return std::sin(x); })).cwiseAbs().maxCoeff() <= 1e-12);
    const auto s2 = lap([](double x, double) { return std::sin(2 * x); });
    CHECK((s2.grid() + 4.0 * sample(*b, [](double x, double) { return std::sin(2 * x); })).cwiseAbs().maxCoeff() <=
          1e-12);

    auto n = SpectralBasis::build(1, {pi}, BoundaryKind::Neumann, {8});
    const auto c = crd::laplacian_apply(
        crd::transform(FieldState::from_grid(n, Eigen::MatrixXd::Constant(8, 1, 2.5)), Direction::Forward));
    CHECK(c.grid().cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("property: round trip, Parseval, symmetry and definiteness") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
      const auto bc = trial % 2 ? BoundaryKind::Neumann : BoundaryKind::Dirichlet;
      const auto b = trial % 4 < 2 ? SpectralBasis::build(1, {0.5 + trial * 0.1}, bc, {5 + trial})
                                   : SpectralBasis::build(2, {1.0, 0.3 + trial * 0.05}, bc, {4 + trial % 7, 3 + trial % 5});
      const int d = 1 + trial % 3;
      const auto u = crd::complete(FieldState::from_grid(b, random_field(b, d, rng)));
      const auto v = crd::complete(FieldState::from_grid(b, random_field(b, d, rng)));

      const Eigen::MatrixXd back = b->inverse(b->forward(u.grid()));
      CHECK((back - u.grid()).norm() <= 1e-10 * u.grid().norm());

      double weighted = 0.0;
      for (int c = 0; c < d; ++c) weighted += b->quad_weights().dot(u.grid().col(c).cwiseAbs2());
      CHECK(std::sqrt(weighted) == doctest::Approx(u.modal().norm()).epsilon(1e-10));
      CHECK(crd::l2_norm(u) == doctest::Approx(u.modal().norm()).epsilon(1e-10));

      const auto lu = crd::laplacian_apply(u);
      const auto lv = crd::laplacian_apply(v);
      const double scale = 1.0 + std::abs(crd::inner_product(lu, v));
      CHECK(std::abs(crd::inner_product(lu, v) - crd::inner_product(u, lv)) <= 1e-10 * scale);
      CHECK(crd::inner_product(lu, u) <= 1e-10 * scale);
    }
  }

  TEST_CASE("property: Neumann zero mode carries the mean") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
      const auto b = trial % 2 ? SpectralBasis::build(1, {1.0 + trial}, BoundaryKind::Neumann, {6 + trial})
                               : SpectralBasis::build(2, {1.0, 2.0}, BoundaryKind::Neumann, {5, 4 + trial % 3});
      const Eigen::MatrixXd g = random_field(b, 1, rng);
      const double area = b->quad_weights().sum();
      const double mean = b->quad_weights().dot(g.col(0)) / area;
      const double c0 = b->forward(g)(0, 0);
      // phi_0 = 1/sqrt(area), so the coefficient is mean * sqrt(area).
      CHECK(c0 / std::sqrt(area) == doctest::Approx(mean).epsilon(1e-12));
      CHECK(b->mu()[0] == 0.0);
    }
  }

  TEST_CASE("field states agree when built from both representations") {
    auto b = SpectralBasis::build(1, {1.0}, BoundaryKind::Dirichlet, {10});
    std::mt19937_64 rng(23);
    const Eigen::MatrixXd g = random_field(b, 2, rng);
    const auto both = crd::complete(FieldState::from_grid(b, g));
    CHECK((b->inverse(both.modal()) - both.grid()).norm() <= 1e-10 * g.norm());
    CHECK(crd::max_abs_difference(both, FieldState::from_modal(b, both.modal())) <= 1e-12);
    CHECK(crd::component_norms(both).size() == 2);
  }
}
