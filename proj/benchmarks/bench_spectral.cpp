#include <benchmark/benchmark.h>

#include "crd/spectral_domain.hpp"

namespace {

crd::BasisPtr square(int n, crd::BoundaryKind bc) {
  return crd::SpectralBasis::build(2, {1.0, 1.0}, bc, {n, n});
}

void BM_Forward2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto basis = square(n, crd::BoundaryKind::Dirichlet);
  const Eigen::MatrixXd grid = Eigen::MatrixXd::Random(basis->size(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(basis->forward(grid));
  state.SetItemsProcessed(state.iterations() * basis->size());
}
BENCHMARK(BM_Forward2D)->Arg(16)->Arg(32)->Arg(64);

void BM_Inverse2D(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto basis = square(n, crd::BoundaryKind::Neumann);
  const Eigen::MatrixXd modal = Eigen::MatrixXd::Random(basis->size(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(basis->inverse(modal));
  state.SetItemsProcessed(state.iterations() * basis->size());
}
BENCHMARK(BM_Inverse2D)->Arg(16)->Arg(32)->Arg(64);

void BM_BuildBasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(square(n, crd::BoundaryKind::Dirichlet));
}
BENCHMARK(BM_BuildBasis)->Arg(16)->Arg(64);

}  // namespace
