// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "crd/evolution.hpp"
#include "crd/kouachi.hpp"
#include "crd/matrix_analysis.hpp"
#include "crd/reaction.hpp"
#include "crd/semigroup.hpp"
#include "crd/spectral_domain.hpp"
#include "oracles.hpp"

using namespace crd;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

Eigen::MatrixXd sample(const SpectralBasis& b, const std::function<double(double, double)>& f, int d = 1) {
  Eigen::MatrixXd g(b.size(), d);
  for (int i = 0; i < b.size(); ++i) {
    const auto p = b.node(i);
    for (int c = 0; c < d; ++c) g(i, c) = f(p[0], p[1]);
  }
  return g;
}

Eigen::MatrixXd smooth_random(const BasisPtr& b, int d, std::mt19937_64& rng, int modes) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd modal = Eigen::MatrixXd::Zero(b->size(), d);
  for (int k = 0; k < std::min(modes, b->size()); ++k) {
    for (int c = 0; c < d; ++c) modal(k, c) = n(rng) / (1.0 + k);
  }
  return b->inverse(modal);
}

// 1. Closed-form eigenvalues of [[a, b], [g, a]] against the dense eigensolver.
Outcome eigenvalue_formula() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng), g = u(rng);
    const auto s = compute_spectrum(DiffusionMatrix(2, {a, b, g, a}));
    const auto closed = kouachi_eigenvalues(a, b, g);  // descending
    worst = std::max({worst, std::abs(s.eigenvalues[1] - closed[0]), std::abs(s.eigenvalues[0] - closed[1])});
  }
  return {worst <= 1e-10, "max |error| " + sci(worst) + " over 1000 triples (tol 1e-10)"};
}

// 2. 2a > b + g implies a > sqrt(b g).
Outcome inequality_implication() {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  int kept = 0, counter = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto c = kouachi_conditions(u(rng), u(rng), u(rng));
    if (!c.mean_dominance) continue;
    ++kept;
    if (!c.geomean_dominance) ++counter;
  }
  return {counter == 0 && kept > 0,
          std::to_string(kept) + " of 10000 triples satisfy 2a > b + g; counterexamples " + std::to_string(counter)};
}

// 3. Heat eigenmode decays exactly.
Outcome heat_regression() {
  auto b = SpectralBasis::build(1, {pi}, BoundaryKind::Dirichlet, {64});
  const Eigen::MatrixXd g = sample(*b, [](double x, double) { return std::sin(x); });
  const DiffusionMatrix m(1, {1.0});
  const auto direct = diffuse(FieldState::from_grid(b, g), m, 1.0);
  const double e1 = (direct.grid() - std::exp(-1.0) * g).cwiseAbs().maxCoeff();
  const EvolutionProblem problem{m, ReactionSpec::zero(1), SplitScheme::for_interval(SplitOrder::Strang, 1.0, 0.01),
                                 FieldState::from_grid(b, g), 1000};
  const double e2 = (solve_evolution(problem).back().values - std::exp(-1.0) * g).cwiseAbs().maxCoeff();
  const double worst = std::max(e1, e2);
  return {worst <= 1e-10, "max-norm error " + sci(e1) + " (one diffuse), " + sci(e2) + " (100 steps) (tol 1e-10)"};
}

// 4. Spectral propagator against dense method-of-lines RK4 on an 8-node grid.
Outcome coupled_oracle() {
  std::mt19937_64 rng(104);
  const int n = 8;
  const double t = 0.5;
  double worst = 0.0;
  int count = 0;
  for (int dim : {1, 2}) {
    auto b = dim == 1 ? SpectralBasis::build(1, {pi}, BoundaryKind::Dirichlet, {n})
                      : SpectralBasis::build(2, {pi, 2.0}, BoundaryKind::Dirichlet, {n, n});
    const Eigen::MatrixXd lap = dim == 1 ? oracle::sine_second_derivative(n, pi)
                                         : Eigen::MatrixXd(oracle::kron(oracle::sine_second_derivative(n, pi),
                                                                        Eigen::MatrixXd::Identity(n, n)) +
                                                           oracle::kron(Eigen::MatrixXd::Identity(n, n),
                                                                        oracle::sine_second_derivative(n, 2.0)));
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Matrix2d m = oracle::random_h0_matrix(rng);
      // Unknowns ordered component-major: y = (u1 at all nodes, u2 at all nodes).
      const Eigen::MatrixXd a = oracle::kron(m, lap);
      const Eigen::MatrixXd g0 = smooth_random(b, 2, rng, b->size());
      Eigen::VectorXd y0(2 * b->size());
      y0 << g0.col(0), g0.col(1);
      const double rate = a.cwiseAbs().rowwise().sum().maxCoeff();
      const int steps = std::max(5000, static_cast<int>(std::ceil(t * rate / 0.05)));
      const Eigen::VectorXd y = oracle::rk4_linear(a, y0, t, steps);
      const auto out = diffuse(FieldState::from_grid(b, g0), DiffusionMatrix(Eigen::MatrixXd(m)), t);
      Eigen::VectorXd z(2 * b->size());
      z << out.grid().col(0), out.grid().col(1);
      worst = std::max(worst, (y - z).cwiseAbs().maxCoeff());
      ++count;
    }
  }
  return {worst <= 1e-6, "max-norm gap " + sci(worst) + " over " + std::to_string(count) +
                             " random H0 matrices (1-D and 2-D, N = 8) (tol 1e-6)"};
}

// 5. Contraction for normal M; spectral radius bound for all H0 matrices.
Outcome contraction() {
  std::mt19937_64 rng(105);
  auto b = SpectralBasis::build(1, {pi}, BoundaryKind::Dirichlet, {32});
  double worst_growth = -1e300;
  for (int trial = 0; trial < 20; ++trial) {
    const DiffusionMatrix m(Eigen::MatrixXd(oracle::random_normal_h0_matrix(rng, trial)));
    const SplitStepper stepper(b, m, ReactionSpec::zero(2), SplitScheme::for_interval(SplitOrder::Lie, 1.0, 0.01));
    FieldState u = FieldState::from_grid(b, smooth_random(b, 2, rng, 32));
    double prev = l2_norm(u);
    for (int s = 0; s < 100; ++s) {
      u = stepper.step(u);
      const double now = l2_norm(u);
      worst_growth = std::max(worst_growth, now - prev);
      prev = now;
    }
  }
  double worst_radius = 0.0;
  auto nb = SpectralBasis::build(2, {1.0, 1.0}, BoundaryKind::Neumann, {16, 16});
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::MatrixXd m = oracle::random_h0_matrix(rng);
    if (trial % 10 == 0) m << 0.0, -1.0, 1.0, 0.0;         // spectrum on the imaginary axis
    if (trial % 10 == 1) m << 0.3, 1.0, 0.0, 0.3;          // defective
    for (double t : {1e-3, 0.1, 1.0}) {
      worst_radius = std::max(worst_radius, ModalPropagator(DiffusionMatrix(m), nb->mu(), t).max_spectral_radius());
    }
  }
  const bool pass = worst_growth <= 1e-12 && worst_radius <= 1.0 + 1e-10;
  return {pass, "max per-step norm growth " + sci(worst_growth) + " (tol 1e-12); max spectral radius - 1 = " +
                    sci(worst_radius - 1.0) + " (tol 1e-10)"};
}

// 6. Resolvent / Yosida properties.
Outcome yosida_suite() {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const ReactionSpec monotone[] = {ReactionSpec::cubic_decay(2, 1.0), ReactionSpec::linear_decay(2, 2.0),
                                   ReactionSpec::cubic_decay(2, 0.05)};
  double nonexpansive = -1e300, lipschitz = -1e300;
  for (int trial = 0; trial < 600; ++trial) {
    const auto& spec = monotone[trial % 3];
    const YosidaParams p{std::pow(10.0, -3.0 + (trial % 9) * 0.5)};
    Eigen::VectorXd x(2), y(2);
    x << u(rng), u(rng);
    y << u(rng), u(rng);
    nonexpansive = std::max(nonexpansive, (resolvent(spec, p, x) - resolvent(spec, p, y)).norm() - (x - y).norm());
    lipschitz = std::max(lipschitz, (yosida(spec, p, x) - yosida(spec, p, y)).norm() - (x - y).norm() / p.lambda);
  }
  double origin = 0.0;
  const ReactionSpec vanishing[] = {ReactionSpec::kouachi(1.0, 2.0, product_field()),
                                    ReactionSpec::kouachi(2.0, 1.0, power_field(3)), ReactionSpec::cubic_decay(2, 1.0)};
  for (const auto& spec : vanishing) {
    for (double lambda : {1e-3, 1e-1, 1.0, 10.0}) {
      origin = std::max(origin, yosida(spec, YosidaParams{lambda}, Eigen::VectorXd::Zero(2)).norm());
    }
  }
  // Consistency: ||R_lambda(v) - R(v)|| shrinks tenfold per decade of lambda.
  double lo_ratio = 1e300, hi_ratio = -1e300;
  std::string ratios;
  const ReactionSpec smooth[] = {ReactionSpec::linear_decay(1, 1.0), ReactionSpec::cubic_decay(1, 1.0)};
  for (const auto& spec : smooth) {
    const Eigen::VectorXd v = Eigen::VectorXd::Constant(1, spec.name() == "linear_decay" ? 1.0 : 0.5);
    double prev = 0.0;
    for (double lambda : {1e-1, 1e-2, 1e-3}) {
      const double err = (yosida(spec, YosidaParams{lambda, 1e-15, 80}, v) - spec.R(v)).norm();
      if (prev > 0.0) {
        const double ratio = prev / err;
        lo_ratio = std::min(lo_ratio, ratio);
        hi_ratio = std::max(hi_ratio, ratio);
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.2f", ratio);
        ratios += (ratios.empty() ? "" : ", ") + std::string(buf);
      }
      prev = err;
    }
  }
  const bool pass = nonexpansive <= 1e-10 && lipschitz <= 1e-10 && origin <= 1e-12 && lo_ratio >= 8.0 &&
                    hi_ratio <= 12.0;
  return {pass, "resolvent excess " + sci(nonexpansive) + ", Lipschitz excess " + sci(lipschitz) +
                    ", |R_lambda(0)| " + sci(origin) + ", ratios [" + ratios + "] (want [8, 12])"};
}

// 7. Stationary a-priori bound and the analytic case.
Outcome stationary_bound() {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto b = SpectralBasis::build(1, {pi}, BoundaryKind::Dirichlet, {32});
  auto b2 = SpectralBasis::build(2, {1.0, 1.0}, BoundaryKind::Dirichlet, {10, 10});
  double worst = -1e300;
  for (int trial = 0; trial < 50; ++trial) {
    const auto& basis = trial % 5 == 4 ? b2 : b;
    const double eps = 0.05 + 2.0 * u(rng);
    const double lambda = std::pow(10.0, -3.0 * u(rng));
    const int d = 1 + trial % 2;
    const auto v = FieldState::from_grid(basis, 4.0 * smooth_random(basis, d, rng, 10));
    const DiffusionMatrix m = d == 1 ? DiffusionMatrix(1, {0.2 + 2.0 * u(rng)})
                                     : DiffusionMatrix(Eigen::MatrixXd(oracle::random_normal_h0_matrix(rng, trial)));
    const ReactionSpec r = trial % 3 == 0   ? ReactionSpec::zero(d)
                           : trial % 3 == 1 ? ReactionSpec::linear_decay(d, 3.0 * u(rng))
                                            : ReactionSpec::cubic_decay(d, 3.0 * u(rng));
    const auto res = solve_stationary({eps, lambda, v}, m, r);
    worst = std::max(worst, res.solution_norm - l2_norm(v) / eps);
  }
  const Eigen::MatrixXd s = sample(*b, [](double x, double) { return std::sin(x); });
  const auto exact = solve_stationary({1.0, 1.0, FieldState::from_grid(b, s)}, DiffusionMatrix(1, {1.0}),
                                      ReactionSpec::zero(1));
  const double analytic = (exact.solution.grid() - 0.5 * s).cwiseAbs().maxCoeff();
  return {worst <= 1e-8 && analytic <= 1e-10,
          "max ||u|| - ||v||/eps = " + sci(worst) + " over 50 solves (tol 1e-8); sin(x)/2 error " + sci(analytic) +
              " (tol 1e-10)"};
}

// 8. Sign of <-M Lap u, R_lambda u> for diagonal M and monotone R.
Outcome coupling_sign() {
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  auto b = SpectralBasis::build(1, {pi}, BoundaryKind::Dirichlet, {48});
  auto b2 = SpectralBasis::build(2, {1.0, 1.5}, BoundaryKind::Dirichlet, {12, 12});
  double lowest = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& basis = trial % 2 ? b2 : b;
    const DiffusionMatrix m(2, {u(rng), 0.0, 0.0, u(rng)});
    const auto f = FieldState::from_grid(basis, 3.0 * smooth_random(basis, 2, rng, 16));
    const ReactionSpec r = trial % 2 ? ReactionSpec::cubic_decay(2, u(rng)) : ReactionSpec::linear_decay(2, u(rng));
    lowest = std::min(lowest, coupling_integral(f, m, r, YosidaParams{u(rng)}));
  }
  return {lowest >= -1e-10, "min coupling integral " + sci(lowest) + " over 100 fields (want >= -1e-10)"};
}

// 9. Balance functional along a 500-step two-species run.
Outcome balance_invariant() {
  KouachiParams p;
  p.alpha = 2;
  p.beta = 1;
  p.gamma = 1;
  p.sigma = 1;
  p.rho = 2;
  const auto build = build_kouachi(p, {1, {pi}, {64}}, true);
  const auto& b = build.basis;
  Eigen::MatrixXd g(b->size(), 2);
  for (int i = 0; i < b->size(); ++i) {
    const double x = b->node(i)[0];
    g(i, 0) = 1.0 + 0.5 * std::cos(x) + 0.2 * std::cos(3 * x);
    g(i, 1) = 0.5 + 0.25 * std::cos(2 * x);
  }
  const EvolutionProblem problem{build.matrix, build.reaction, SplitScheme::for_interval(SplitOrder::Strang, 1.0, 0.002),
                                 FieldState::from_grid(b, g), 1, BalanceWeights{p.rho, p.sigma}};
  double q0 = 0.0, prev = 0.0, worst_step = 0.0, worst_total = 0.0;
  int frames = 0;
  solve_evolution(problem, [&](const FrameOutput& f) {
    const double q = *f.diagnostics.balance;
    if (frames == 0) {
      q0 = prev = q;
    } else {
      worst_step = std::max(worst_step, std::abs(q - prev));
      worst_total = std::max(worst_total, std::abs(q - q0));
    }
    prev = q;
    ++frames;
  });
  const double tol = 1e-10 * (1.0 + std::abs(q0));
  return {frames == 501 && worst_step <= tol,
          std::to_string(frames - 1) + " steps, Q(0) = " + sci(q0) + ", max per-step drift " + sci(worst_step) +
              ", max total drift " + sci(worst_total) + " (tol " + sci(tol) + ")"};
}

// 10. Convergence orders of Lie and Strang splitting on u_t = u_xx - u.
Outcome splitting_orders() {
  auto b = SpectralBasis::build(1, {pi}, BoundaryKind::Dirichlet, {16});
  const Eigen::MatrixXd s = sample(*b, [](double x, double) { return std::sin(x); });
  std::string detail;
  bool pass = true;
  for (auto order : {SplitOrder::Lie, SplitOrder::Strang}) {
    std::vector<double> errors;
    for (double dt : {1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80}) {
      const EvolutionProblem problem{DiffusionMatrix(1, {1.0}), ReactionSpec::linear_decay(1, 1.0),
                                     SplitScheme::for_interval(order, 1.0, dt), FieldState::from_grid(b, s), 1000};
      errors.push_back((solve_evolution(problem).back().values - std::exp(-2.0) * s).cwiseAbs().maxCoeff());
    }
    const double target = order == SplitOrder::Lie ? 1.0 : 2.0;
    detail += std::string(to_string(order)) + " orders";
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
      const double q = std::log2(errors[i] / errors[i + 1]);
      pass = pass && std::abs(q - target) <= 0.2;
      char buf[16];
      std::snprintf(buf, sizeof(buf), " %.3f", q);
      detail += buf;
    }
    detail += order == SplitOrder::Lie ? "; " : "";
  }
  return {pass, detail + " (want 1 and 2, +-0.2)"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"eigenvalue formula", eigenvalue_formula},
      {"inequality implication", inequality_implication},
      {"exact heat regression", heat_regression},
      {"coupled diffusion oracle", coupled_oracle},
      {"contraction", contraction},
      {"Yosida suite", yosida_suite},
      {"stationary bound", stationary_bound},
      {"coupling integral sign", coupling_sign},
      {"balance invariant", balance_invariant},
      {"splitting orders", splitting_orders},
  };
  int failed = 0, index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %-26s %s [%.2fs]\n", outcome.pass ? "PASS" : "FAIL", index, name, outcome.detail.c_str(),
                secs);
    if (!outcome.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
