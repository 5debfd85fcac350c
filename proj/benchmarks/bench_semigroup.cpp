#include <random>

#include <benchmark/benchmark.h>

#include "crd/matrix_analysis.hpp"
#include "crd/semigroup.hpp"
#include "crd/spectral_domain.hpp"

namespace {

// Upper triangular with a positive diagonal: H0 holds, eigenvectors are far
// from orthogonal.
crd::DiffusionMatrix test_matrix(int d) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  std::uniform_real_distribution<double> diag(0.5, 2.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = diag(rng);
    for (int j = i + 1; j < d; ++j) m(i, j) = off(rng);
  }
  return crd::DiffusionMatrix(m);
}

void BM_Expm(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Eigen::MatrixXd a = -3.0 * test_matrix(d).matrix();
  for (auto _ : state) benchmark::DoNotOptimize(crd::expm(a));
}
BENCHMARK(BM_Expm)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_ModalPropagatorEigen(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const crd::DiffusionMatrix m = test_matrix(d);
  for (auto _ : state) benchmark::DoNotOptimize(crd::modal_propagator(m, 4.0, 0.1, crd::ExpmMethod::Eigendecomposition));
}
BENCHMARK(BM_ModalPropagatorEigen)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_BuildPropagators(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto basis = crd::SpectralBasis::build(2, {1.0, 1.0}, crd::BoundaryKind::Dirichlet, {n, n});
  const crd::DiffusionMatrix m = test_matrix(2);
  for (auto _ : state) benchmark::DoNotOptimize(crd::ModalPropagator(m, basis->mu(), 1e-3));
}
BENCHMARK(BM_BuildPropagators)->Arg(16)->Arg(32)->Arg(64);

void BM_Diffuse1D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto basis = crd::SpectralBasis::build(1, {3.0}, crd::BoundaryKind::Dirichlet, {n});
  const crd::DiffusionMatrix m = test_matrix(3);
  const auto u = crd::FieldState::from_modal(basis, Eigen::MatrixXd::Random(n, 3));
  for (auto _ : state) benchmark::DoNotOptimize(crd::diffuse(u, m, 0.01));
}
BENCHMARK(BM_Diffuse1D)->Arg(64)->Arg(256);

}  // namespace
