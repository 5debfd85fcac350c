#pragma once

// Time stepping of u_t = M Lap u + F(u) by operator splitting (exact modal
// diffusion, implicit resolvent reaction) and the regularized stationary
// problem eps u - M Lap u + R_lambda(u) = v.

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "crd/matrix_analysis.hpp"
#include "crd/reaction.hpp"
#include "crd/semigroup.hpp"
#include "crd/spectral_domain.hpp"

namespace crd {

enum class SplitOrder { Lie, Strang };

std::string_view to_string(SplitOrder order) noexcept;

struct SplitScheme {
  SplitOrder order = SplitOrder::Strang;
  double dt = 0.0;
  int steps = 0;
  /// Newton settings for the pointwise reaction solves (lambda is ignored:
  /// the substep sets it from dt).
  YosidaParams newton{};

  /// Smallest step count with dt_effective <= dt that lands exactly on
  /// t_final. ValidationError for t_final <= 0 or dt <= 0.
  static SplitScheme for_interval(SplitOrder order, double t_final, double dt);
  double final_time() const noexcept { return dt * steps; }
  void validate() const;
};

struct StepOptions {
  bool allow_h0_violation = false;
  ExpmMethod method = ExpmMethod::ScalingSquaring;
};

/// Precomputes the modal propagators for one (basis, M, dt) and advances
/// fields by one split step.
///
/// Lie:    diffuse(dt), then w + dt R(w) = u      (backward Euler reaction)
/// Strang: diffuse(dt/2), implicit midpoint reaction over dt, diffuse(dt/2)
///
/// The reaction substep always treats R = -F (it integrates u_t = F(u)),
/// independent of the reaction's orientation flag.
class SplitStepper {
 public:
  SplitStepper(BasisPtr basis, const DiffusionMatrix& m, ReactionSpec reaction, SplitScheme scheme,
               StepOptions options = {});

  FieldState step(const FieldState& state) const;
  FieldState diffusion_substep(const FieldState& state, bool half) const;
  FieldState reaction_substep(const FieldState& state) const;

  const SplitScheme& scheme() const noexcept { return scheme_; }
  const ModalPropagator& propagator(bool half) const noexcept { return half ? half_ : full_; }

 private:
  BasisPtr basis_;
  ReactionSpec reaction_;
  SplitScheme scheme_;
  ModalPropagator full_;
  ModalPropagator half_;
};

/// One split step; builds a stepper for the call.
FieldState step(const FieldState& state, const DiffusionMatrix& m, const ReactionSpec& reaction,
                const SplitScheme& scheme, const StepOptions& options = {});

struct FrameDiagnostics {
  Eigen::VectorXd l2_norms;
  Eigen::VectorXd min;
  Eigen::VectorXd max;
  /// Balance functional when the run carries balance weights.
  std::optional<double> balance;
};

struct FrameOutput {
  int index = 0;
  int step = 0;
  double time = 0.0;
  /// Grid values, nodes x d.
  Eigen::MatrixXd values;
  FrameDiagnostics diagnostics;
};

/// Q = integral of (rho u + sigma v).
struct BalanceWeights {
  double rho = 1.0;
  double sigma = 1.0;
};

double balance_integral(const FieldState& state, const BalanceWeights& weights);

struct EvolutionProblem {
  DiffusionMatrix matrix;
  ReactionSpec reaction;
  SplitScheme scheme;
  FieldState initial;
  /// Frames at steps 0, stride, 2*stride, ... and always the final step.
  int frame_stride = 10;
  std::optional<BalanceWeights> balance;
  StepOptions options{};
};

using FrameSink = std::function<void(const FrameOutput&)>;

/// Runs the split scheme and hands frames to `sink` in time order.
/// NewtonDivergence / NonFiniteValue are rethrown with the step index.
void solve_evolution(const EvolutionProblem& problem, const FrameSink& sink);
std::vector<FrameOutput> solve_evolution(const EvolutionProblem& problem);

FrameOutput make_frame(const FieldState& state, int index, int step, double time,
                       const std::optional<BalanceWeights>& balance);

struct StationaryProblem {
  double epsilon = 1.0;
  double lambda = 1.0;
  FieldState rhs;

  void validate() const;
};

struct StationaryOptions {
  /// Newton stops when ||residual|| <= residual_tol * ||v|| (absolute floor 1e-13).
  double residual_tol = 1e-10;
  int max_newton = 50;
  int krylov_restart = 60;
  int krylov_max_iter = 2000;
  /// Settings for the pointwise resolvent solves inside R_lambda.
  double resolvent_tol = 1e-13;
  int resolvent_max_iter = 60;
  /// Skip the symbol-accretivity precondition.
  bool allow_nonaccretive = false;
};

struct StationaryResult {
  FieldState solution;
  double residual_norm = 0.0;
  double solution_norm = 0.0;
  double rhs_norm = 0.0;
  /// ||v|| / eps
  double bound = 0.0;
  int newton_iterations = 0;
  int krylov_iterations = 0;
};

/// Solves eps u - M Lap u + R_lambda(u) = v on a Dirichlet basis by
/// Newton-Krylov in modal space, preconditioned with the per-mode linear part
/// (eps I + mu_k M). Throws StationaryDivergence when Newton stalls and
/// BoundViolated when ||u|| > ||v|| / eps + 1e-8.
StationaryResult solve_stationary(const StationaryProblem& problem, const DiffusionMatrix& m,
                                  const ReactionSpec& reaction, const StationaryOptions& options = {});

/// Discrete <-M Lap u, R_lambda(u)> with the basis quadrature.
double coupling_integral(const FieldState& u, const DiffusionMatrix& m, const ReactionSpec& reaction,
                         const YosidaParams& params);

}  // namespace crd
