#include "crd/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "crd/error.hpp"
#include "gmres.hpp"

namespace crd {

std::string_view to_string(SplitOrder order) noexcept {
  return order == SplitOrder::Lie ? "lie" : "strang";
}

SplitScheme SplitScheme::for_interval(SplitOrder order, double t_final, double dt) {
  std::vector<std::string> problems;
  if (!(t_final > 0.0) || !std::isfinite(t_final)) problems.push_back("t_final must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) problems.push_back("dt must be > 0");
  if (!problems.empty()) throw Error(ErrorKind::ValidationError, "invalid time stepping", problems);
  SplitScheme scheme;
  scheme.order = order;
  scheme.steps = std::max(1, static_cast<int>(std::ceil(t_final / dt - 1e-9)));
  scheme.dt = t_final / scheme.steps;
  return scheme;
}

void SplitScheme::validate() const {
  std::vector<std::string> problems;
  if (!(dt > 0.0) || !std::isfinite(dt)) problems.push_back("dt must be > 0");
  if (steps < 1) problems.push_back("steps must be >= 1");
  if (!(newton.newton_tol > 0.0)) problems.push_back("newton_tol must be > 0");
  if (newton.newton_max_iter < 1) problems.push_back("newton_max_iter must be >= 1");
  if (!problems.empty()) throw Error(ErrorKind::ValidationError, "invalid split scheme", problems);
}

SplitStepper::SplitStepper(BasisPtr basis, const DiffusionMatrix& m, ReactionSpec reaction, SplitScheme scheme,
                           StepOptions options)
    : basis_(std::move(basis)),
      reaction_(reaction.with_orientation(Orientation::Dissipative)),
      scheme_(scheme),
      full_(m, basis_->mu(), scheme.dt, options.method),
      half_(m, basis_->mu(), 0.5 * scheme.dt, options.method) {
  scheme_.validate();
  if (reaction_.dim() != m.dim()) {
    throw Error(ErrorKind::ValidationError, "reaction dimension does not match the diffusion matrix");
  }
  require_h0(m, options.allow_h0_violation);
}

FieldState SplitStepper::diffusion_substep(const FieldState& state, bool half) const {
  const FieldState modal_state = state.has_modal() ? state : transform(state, Direction::Forward);
  const ModalPropagator& p = half ? half_ : full_;
  return transform(FieldState::from_modal(basis_, p.apply(modal_state.modal())), Direction::Inverse);
}

FieldState SplitStepper::reaction_substep(const FieldState& state) const {
  const FieldState grid_state = state.has_grid() ? state : transform(state, Direction::Inverse);
  const Eigen::MatrixXd& grid = grid_state.grid();
  YosidaParams params = scheme_.newton;
  const bool midpoint = scheme_.order == SplitOrder::Strang;
  params.lambda = midpoint ? 0.5 * scheme_.dt : scheme_.dt;

  Eigen::MatrixXd out(grid.rows(), grid.cols());
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    const Eigen::VectorXd u = grid.row(i).transpose();
    const Eigen::VectorXd w = resolvent(reaction_, params, u);
    if (midpoint) {
      out.row(i) = (2.0 * w - u).transpose();
    } else {
      out.row(i) = w.transpose();
    }
  }
  if (!out.allFinite()) throw Error(ErrorKind::NonFiniteValue, "reaction substep produced non-finite values");
  return FieldState::from_grid(basis_, std::move(out));
}

FieldState SplitStepper::step(const FieldState& state) const {
  if (scheme_.order == SplitOrder::Lie) {
    return reaction_substep(diffusion_substep(state, false));
  }
  return diffusion_substep(reaction_substep(diffusion_substep(state, true)), true);
}

FieldState step(const FieldState& state, const DiffusionMatrix& m, const ReactionSpec& reaction,
                const SplitScheme& scheme, const StepOptions& options) {
  return SplitStepper(state.basis(), m, reaction, scheme, options).step(state);
}

double balance_integral(const FieldState& state, const BalanceWeights& weights) {
  const FieldState full = state.has_grid() ? state : transform(state, Direction::Inverse);
  if (full.components() != 2) throw Error(ErrorKind::InvalidArgument, "balance functional needs two components");
  const Eigen::MatrixXd& g = full.grid();
  return full.basis()->quad_weights().dot(weights.rho * g.col(0) + weights.sigma * g.col(1));
}

FrameOutput make_frame(const FieldState& state, int index, int step, double time,
                       const std::optional<BalanceWeights>& balance) {
  const FieldState full = state.has_grid() ? state : transform(state, Direction::Inverse);
  FrameOutput frame;
  frame.index = index;
  frame.step = step;
  frame.time = time;
  frame.values = full.grid();
  frame.diagnostics.l2_norms = component_norms(full);
  frame.diagnostics.min = frame.values.colwise().minCoeff().transpose();
  frame.diagnostics.max = frame.values.colwise().maxCoeff().transpose();
  if (balance) frame.diagnostics.balance = balance_integral(full, *balance);
  return frame;
}

void solve_evolution(const EvolutionProblem& problem, const FrameSink& sink) {
  if (problem.frame_stride < 1) throw Error(ErrorKind::ValidationError, "frame_stride must be >= 1");
  if (problem.initial.components() != problem.matrix.dim()) {
    throw Error(ErrorKind::ValidationError, "initial data component count does not match the matrix dimension");
  }
  const SplitStepper stepper(problem.initial.basis(), problem.matrix, problem.reaction, problem.scheme, problem.options);
  const SplitScheme& scheme = stepper.scheme();

  FieldState state = problem.initial.has_grid() ? problem.initial : transform(problem.initial, Direction::Inverse);
  int frame_index = 0;
  sink(make_frame(state, frame_index++, 0, 0.0, problem.balance));
  for (int s = 1; s <= scheme.steps; ++s) {
    try {
      state = stepper.step(state);
    } catch (const Error& e) {
      throw Error(e.kind(), "step " + std::to_string(s) + ": " + e.what(), e.details());
    }
    if (s % problem.frame_stride == 0 || s == scheme.steps) {
      const double time = s == scheme.steps ? scheme.final_time() : s * scheme.dt;
      sink(make_frame(state, frame_index++, s, time, problem.balance));
    }
  }
}

std::vector<FrameOutput> solve_evolution(const EvolutionProblem& problem) {
  std::vector<FrameOutput> frames;
  solve_evolution(problem, [&frames](const FrameOutput& f) { frames.push_back(f); });
  return frames;
}

void StationaryProblem::validate() const {
  std::vector<std::string> problems;
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) problems.push_back("epsilon must be > 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) problems.push_back("lambda must be > 0");
  if (!problems.empty()) throw Error(ErrorKind::ValidationError, "invalid stationary problem", problems);
}

namespace {

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

// Pointwise R_lambda and its Jacobian on the grid image of a modal array.
struct YosidaField {
  Eigen::MatrixXd values;
  std::vector<Eigen::MatrixXd> jacobians;
};

YosidaField evaluate_yosida(const SpectralBasis& basis, const ReactionSpec& reaction, const YosidaParams& params,
                            const Eigen::MatrixXd& modal) {
  const Eigen::MatrixXd grid = basis.inverse(modal);
  YosidaField out;
  out.values.resize(grid.rows(), grid.cols());
  out.jacobians.resize(static_cast<std::size_t>(grid.rows()));
  Eigen::VectorXd value;
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    out.jacobians[static_cast<std::size_t>(i)] = yosida_jacobian(reaction, params, grid.row(i).transpose(), &value);
    out.values.row(i) = value.transpose();
  }
  return out;
}

}  // namespace

StationaryResult solve_stationary(const StationaryProblem& problem, const DiffusionMatrix& m,
                                  const ReactionSpec& reaction, const StationaryOptions& options) {
  problem.validate();
  const BasisPtr& basis = problem.rhs.basis();
  if (basis->bc() != BoundaryKind::Dirichlet) {
    throw Error(ErrorKind::ValidationError, "the stationary problem is posed with u = 0 on the boundary (Dirichlet)");
  }
  const int d = m.dim();
  if (problem.rhs.components() != d || reaction.dim() != d) {
    throw Error(ErrorKind::ValidationError, "right-hand side, reaction and matrix dimensions differ");
  }
  if (!options.allow_nonaccretive && !is_symbol_accretive(m)) {
    throw Error(ErrorKind::H0Violation, "(M + M^T)/2 is not positive semidefinite; eps + T is not accretive");
  }

  const double eps = problem.epsilon;
  const YosidaParams yparams{problem.lambda, options.resolvent_tol, options.resolvent_max_iter};
  const Eigen::MatrixXd rhs = problem.rhs.has_modal() ? problem.rhs.modal() : basis->forward(problem.rhs.grid());
  const Eigen::Index modes = rhs.rows();
  const auto& mu = basis->mu();
  const Eigen::MatrixXd mt = m.matrix().transpose();

  std::map<double, Eigen::PartialPivLU<Eigen::MatrixXd>> linear_lu;
  for (double value : mu) {
    if (!linear_lu.count(value)) {
      linear_lu.emplace(value, (eps * Eigen::MatrixXd::Identity(d, d) + value * m.matrix()).partialPivLu());
    }
  }

  auto linear = [&](const Eigen::MatrixXd& c) {
    Eigen::MatrixXd out = eps * c;
    for (Eigen::Index k = 0; k < modes; ++k) out.row(k) += mu[static_cast<std::size_t>(k)] * c.row(k) * mt;
    return out;
  };
  auto precondition = [&](const Eigen::VectorXd& y_flat) {
    const Eigen::MatrixXd y = unflatten(y_flat, modes, d);
    Eigen::MatrixXd x(modes, d);
    for (Eigen::Index k = 0; k < modes; ++k) {
      x.row(k) = linear_lu.at(mu[static_cast<std::size_t>(k)]).solve(y.row(k).transpose()).transpose();
    }
    return flatten(x);
  };

  const double rhs_norm = rhs.norm();
  const double tol = std::max(options.residual_tol * rhs_norm, 1e-13);

  StationaryResult result{FieldState::zeros(basis, d)};
  result.rhs_norm = rhs_norm;
  result.bound = rhs_norm / eps;

  Eigen::MatrixXd c = unflatten(precondition(flatten(rhs)), modes, d);
  auto residual_of = [&](const Eigen::MatrixXd& coeffs, YosidaField& field) {
    field = evaluate_yosida(*basis, reaction, yparams, coeffs);
    return Eigen::MatrixXd(linear(coeffs) + basis->forward(field.values) - rhs);
  };

  YosidaField field;
  Eigen::MatrixXd residual;
  try {
    residual = residual_of(c, field);
  } catch (const Error& e) {
    throw Error(ErrorKind::StationaryDivergence, std::string("R_lambda evaluation failed: ") + e.what());
  }
  double res_norm = residual.norm();
  bool converged = res_norm <= tol;
  int newton = 0;
  while (!converged && newton < options.max_newton) {
    ++newton;
    const std::vector<Eigen::MatrixXd>& jac = field.jacobians;
    auto apply = [&](const Eigen::VectorXd& delta_flat) {
      const Eigen::MatrixXd delta = unflatten(delta_flat, modes, d);
      Eigen::MatrixXd grid_delta = basis->inverse(delta);
      for (Eigen::Index i = 0; i < grid_delta.rows(); ++i) {
        grid_delta.row(i) = (jac[static_cast<std::size_t>(i)] * grid_delta.row(i).transpose()).transpose();
      }
      return flatten(linear(delta) + basis->forward(grid_delta));
    };
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(modes * d);
    const auto krylov = detail::gmres(apply, precondition, flatten(-residual), delta,
                                      std::max(1e-12 * res_norm, 0.05 * tol), options.krylov_restart,
                                      options.krylov_max_iter);
    result.krylov_iterations += krylov.iterations;
    const Eigen::MatrixXd delta_m = unflatten(delta, modes, d);

    double step = 1.0;
    bool accepted = false;
    while (step >= 1e-8) {
      try {
        YosidaField trial_field;
        const Eigen::MatrixXd trial = c + step * delta_m;
        Eigen::MatrixXd trial_residual = residual_of(trial, trial_field);
        const double trial_norm = trial_residual.norm();
        if (trial_norm <= (1.0 - 1e-4 * step) * res_norm) {
          c = trial;
          field = std::move(trial_field);
          residual = std::move(trial_residual);
          res_norm = trial_norm;
          accepted = true;
          break;
        }
      } catch (const Error&) {
        // Resolvent failure at the trial point: shorten the step.
      }
      step *= 0.5;
    }
    if (!accepted) break;
    converged = res_norm <= tol;
  }
  result.newton_iterations = newton;
  result.residual_norm = res_norm;
  if (!converged) {
    throw Error(ErrorKind::StationaryDivergence, "Newton-Krylov stalled at residual " + std::to_string(res_norm) +
                                                     " (target " + std::to_string(tol) + ")");
  }
  result.solution = transform(FieldState::from_modal(basis, c), Direction::Inverse);
  result.solution_norm = c.norm();
  if (result.solution_norm > result.bound + 1e-8) {
    throw Error(ErrorKind::BoundViolated, "||u|| = " + std::to_string(result.solution_norm) + " exceeds ||v||/eps = " +
                                              std::to_string(result.bound));
  }
  return result;
}

double coupling_integral(const FieldState& u, const DiffusionMatrix& m, const ReactionSpec& reaction,
                         const YosidaParams& params) {
  const FieldState full = complete(u);
  if (full.components() != m.dim()) throw Error(ErrorKind::InvalidArgument, "field and matrix dimensions differ");
  const auto& mu = full.basis()->mu();
  Eigen::MatrixXd t_modal = full.modal() * m.matrix().transpose();
  for (Eigen::Index k = 0; k < t_modal.rows(); ++k) t_modal.row(k) *= mu[static_cast<std::size_t>(k)];
  const Eigen::MatrixXd t_grid = full.basis()->inverse(t_modal);
  const Eigen::MatrixXd& grid = full.grid();
  const Eigen::VectorXd& w = full.basis()->quad_weights();
  double total = 0.0;
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    const Eigen::VectorXd r = yosida(reaction, params, grid.row(i).transpose());
    total += w(i) * t_grid.row(i).dot(r);
  }
  return total;
}

}  // namespace crd
