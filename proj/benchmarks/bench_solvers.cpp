#include <cmath>
#include <numbers>

#include <benchmark/benchmark.h>

#include "crd/evolution.hpp"
#include "crd/kouachi.hpp"

namespace {

crd::FieldState bump(const crd::BasisPtr& basis, int d) {
  Eigen::MatrixXd g(basis->size(), d);
  for (int i = 0; i < basis->size(); ++i) {
    const auto p = basis->node(i);
    for (int c = 0; c < d; ++c) g(i, c) = (1.0 + c) * std::sin(p[0]) * std::exp(-p[1]);
  }
  return crd::FieldState::from_grid(basis, g);
}

void BM_SplitStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto order = state.range(1) ? crd::SplitOrder::Strang : crd::SplitOrder::Lie;
  const auto basis = crd::SpectralBasis::build(2, {std::numbers::pi, 1.0}, crd::BoundaryKind::Dirichlet, {n, n});
  const crd::DiffusionMatrix m(2, {1.0, 0.4, -0.3, 0.8});
  const crd::SplitStepper stepper(basis, m, crd::ReactionSpec::cubic_decay(2, 2.0),
                                  crd::SplitScheme::for_interval(order, 1e-3, 1e-3));
  const crd::FieldState u = crd::complete(bump(basis, 2));
  for (auto _ : state) benchmark::DoNotOptimize(stepper.step(u));
  state.SetLabel(std::string(crd::to_string(order)));
}
BENCHMARK(BM_SplitStep)->ArgsProduct({{16, 32, 64}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_KouachiStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto basis = crd::SpectralBasis::build(1, {std::numbers::pi}, crd::BoundaryKind::Neumann, {n});
  const crd::DiffusionMatrix m(2, {2.0, 1.0, 1.0, 2.0});
  const crd::SplitStepper stepper(basis, m, crd::ReactionSpec::kouachi(1.0, 2.0, crd::product_field()),
                                  crd::SplitScheme::for_interval(crd::SplitOrder::Strang, 2e-3, 2e-3));
  Eigen::MatrixXd g(n, 2);
  for (int i = 0; i < n; ++i) {
    const double x = basis->node(i)[0];
    g(i, 0) = 1.0 + 0.5 * std::cos(x);
    g(i, 1) = 0.5 + 0.25 * std::cos(3.0 * x);
  }
  const crd::FieldState u = crd::complete(crd::FieldState::from_grid(basis, g));
  for (auto _ : state) benchmark::DoNotOptimize(stepper.step(u));
}
BENCHMARK(BM_KouachiStep)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_Stationary(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto basis = crd::SpectralBasis::build(1, {std::numbers::pi}, crd::BoundaryKind::Dirichlet, {n});
  const crd::DiffusionMatrix m(2, {2.0, 0.5, 0.5, 1.0});
  const crd::StationaryProblem problem{0.5, 0.01, bump(basis, 2)};
  const auto reaction = crd::ReactionSpec::cubic_decay(2, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(crd::solve_stationary(problem, m, reaction));
}
BENCHMARK(BM_Stationary)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
