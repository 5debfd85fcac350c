#include "crd/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "crd/error.hpp"

namespace crd {

std::string_view to_string(Orientation o) noexcept {
  return o == Orientation::Dissipative ? "dissipative" : "literal";
}

ScalarField product_field() {
  return {"uv", [](double u, double v) { return u * v; },
          [](double u, double v) { return Eigen::Vector2d(v, u); }};
}

ScalarField power_field(int m) {
  if (m < 1) throw Error(ErrorKind::ValidationError, "power field exponent m must be >= 1");
  return {"uv_power",
          [m](double u, double v) { return u * std::pow(v, m); },
          [m](double u, double v) { return Eigen::Vector2d(std::pow(v, m), m * u * std::pow(v, m - 1)); }};
}

ReactionSpec::ReactionSpec(std::string name, int d, Map f, JacobianMap jacobian)
    : name_(std::move(name)), d_(d), f_(std::move(f)), jacobian_(std::move(jacobian)) {
  if (d_ < 1) throw Error(ErrorKind::ValidationError, "reaction dimension must be >= 1");
}

ReactionSpec ReactionSpec::general(std::string name, int d, Map f, JacobianMap jacobian) {
  if (!f || !jacobian) throw Error(ErrorKind::ValidationError, "reaction needs both F and its Jacobian");
  ReactionSpec spec(std::move(name), d, std::move(f), std::move(jacobian));
  const double mismatch = jacobian_mismatch(spec);
  if (!(mismatch <= 1e-6)) {
    throw Error(ErrorKind::ValidationError,
                "reaction '" + spec.name_ + "': Jacobian disagrees with central differences (" +
                    std::to_string(mismatch) + ")");
  }
  return spec;
}

ReactionSpec ReactionSpec::zero(int d) {
  return ReactionSpec("zero", d, [d](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(d).eval(); },
                      [d](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(d, d).eval(); });
}

ReactionSpec ReactionSpec::linear_decay(int d, double rate) {
  if (!std::isfinite(rate)) throw Error(ErrorKind::ValidationError, "linear_decay rate must be finite");
  return ReactionSpec(
      "linear_decay", d, [rate](const Eigen::VectorXd& u) { return (-rate * u).eval(); },
      [d, rate](const Eigen::VectorXd&) { return (-rate * Eigen::MatrixXd::Identity(d, d)).eval(); });
}

ReactionSpec ReactionSpec::cubic_decay(int d, double coefficient) {
  if (!std::isfinite(coefficient)) throw Error(ErrorKind::ValidationError, "cubic_decay coefficient must be finite");
  return ReactionSpec(
      "cubic_decay", d, [coefficient](const Eigen::VectorXd& u) { return (-coefficient * u.array().cube()).matrix().eval(); },
      [coefficient](const Eigen::VectorXd& u) {
        return Eigen::MatrixXd((-3.0 * coefficient * u.array().square()).matrix().asDiagonal());
      });
}

ReactionSpec ReactionSpec::kouachi(double sigma, double rho, ScalarField f) {
  if (!(sigma > 0.0) || !(rho > 0.0)) throw Error(ErrorKind::ValidationError, "sigma and rho must be positive");
  if (!f.value || !f.gradient) throw Error(ErrorKind::ValidationError, "scalar field needs value and gradient");
  auto value = f.value;
  auto gradient = f.gradient;
  ReactionSpec spec(
      "kouachi", 2,
      [sigma, rho, value](const Eigen::VectorXd& x) {
        const double s = value(x(0), x(1));
        return Eigen::VectorXd(Eigen::Vector2d(-sigma * s, rho * s));
      },
      [sigma, rho, gradient](const Eigen::VectorXd& x) {
        const Eigen::Vector2d g = gradient(x(0), x(1));
        Eigen::MatrixXd j(2, 2);
        j.row(0) = -sigma * g.transpose();
        j.row(1) = rho * g.transpose();
        return j;
      });
  spec.kouachi_ = KouachiTerms{sigma, rho, std::move(f)};
  const double mismatch = jacobian_mismatch(spec);
  if (!(mismatch <= 1e-6)) {
    throw Error(ErrorKind::ValidationError, "scalar field '" + spec.kouachi_->f.name +
                                                "': gradient disagrees with central differences");
  }
  return spec;
}

ReactionSpec ReactionSpec::with_orientation(Orientation o) const {
  ReactionSpec copy = *this;
  copy.orientation_ = o;
  return copy;
}

Eigen::VectorXd ReactionSpec::R(const Eigen::VectorXd& u) const {
  return orientation_ == Orientation::Dissipative ? Eigen::VectorXd(-f_(u)) : f_(u);
}

Eigen::MatrixXd ReactionSpec::R_jacobian(const Eigen::VectorXd& u) const {
  return orientation_ == Orientation::Dissipative ? Eigen::MatrixXd(-jacobian_(u)) : jacobian_(u);
}

double jacobian_mismatch(const ReactionSpec& spec, double box, int samples) {
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> dist(-box, box);
  const int d = spec.dim();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x(i) = dist(rng);
    const Eigen::MatrixXd analytic = spec.jacobian(x);
    if (analytic.rows() != d || analytic.cols() != d) return std::numeric_limits<double>::infinity();
    Eigen::MatrixXd numeric(d, d);
    for (int j = 0; j < d; ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(x(j)));
      Eigen::VectorXd plus = x, minus = x;
      plus(j) += h;
      minus(j) -= h;
      numeric.col(j) = (spec.F(plus) - spec.F(minus)) / (plus(j) - minus(j));
    }
    const double scale = 1.0 + analytic.cwiseAbs().maxCoeff();
    worst = std::max(worst, (analytic - numeric).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

void YosidaParams::validate() const {
  std::vector<std::string> problems;
  if (!(lambda > 0.0)) problems.push_back("lambda must be > 0");
  if (!(newton_tol > 0.0)) problems.push_back("newton_tol must be > 0");
  if (newton_max_iter < 1) problems.push_back("newton_max_iter must be >= 1");
  if (!problems.empty()) throw Error(ErrorKind::ValidationError, "invalid Yosida parameters", problems);
}

FieldState eval_reaction(const ReactionSpec& spec, const FieldState& state) {
  const FieldState full = state.has_grid() ? state : transform(state, Direction::Inverse);
  const Eigen::MatrixXd& grid = full.grid();
  if (grid.cols() != spec.dim()) throw Error(ErrorKind::InvalidArgument, "reaction dimension does not match field");
  Eigen::MatrixXd out(grid.rows(), grid.cols());
  for (Eigen::Index i = 0; i < grid.rows(); ++i) {
    const Eigen::VectorXd value = spec.F(grid.row(i).transpose());
    if (!value.allFinite()) {
      throw Error(ErrorKind::NonFiniteValue, "reaction produced a non-finite value at node " + std::to_string(i));
    }
    out.row(i) = value.transpose();
  }
  return FieldState::from_grid(state.basis(), std::move(out));
}

Eigen::VectorXd kouachi_scalar(const ReactionSpec& spec, const FieldState& state) {
  if (!spec.is_kouachi()) throw Error(ErrorKind::InvalidArgument, "reaction is not of Kouachi kind");
  const FieldState full = state.has_grid() ? state : transform(state, Direction::Inverse);
  const auto& f = spec.kouachi_terms()->f;
  Eigen::VectorXd out(full.grid().rows());
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = f.value(full.grid()(i, 0), full.grid()(i, 1));
  return out;
}

Eigen::VectorXd resolvent(const ReactionSpec& spec, const YosidaParams& params, const Eigen::VectorXd& v) {
  params.validate();
  const double lambda = params.lambda;
  const Eigen::Index d = v.size();
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(1.0, v.norm());

  Eigen::VectorXd w = v;
  Eigen::VectorXd r_w = spec.R(w);
  if (!r_w.allFinite()) throw Error(ErrorKind::NonFiniteValue, "reaction is not finite at the resolvent input");
  Eigen::VectorXd residual = w + lambda * r_w - v;
  double res_norm = residual.norm();
  // Roundoff floor of the residual evaluation.
  auto floor = [&] { return 1e3 * eps * (v.norm() + w.norm() + lambda * r_w.norm()); };

  for (int iter = 0; iter < params.newton_max_iter; ++iter) {
    if (res_norm <= params.newton_tol * scale) return w;
    const Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(d, d) + lambda * spec.R_jacobian(w);
    const Eigen::VectorXd delta = jac.partialPivLu().solve(-residual);
    if (!delta.allFinite()) {
      throw Error(ErrorKind::NewtonDivergence, "singular Newton system in the resolvent (lambda too large?)");
    }
    double step = 1.0;
    bool accepted = false;
    while (step >= 1e-8) {
      const Eigen::VectorXd trial = w + step * delta;
      const Eigen::VectorXd r_trial = spec.R(trial);
      if (r_trial.allFinite()) {
        const Eigen::VectorXd trial_residual = trial + lambda * r_trial - v;
        const double trial_norm = trial_residual.norm();
        if (trial_norm <= (1.0 - 1e-4 * step) * res_norm) {
          w = trial;
          r_w = r_trial;
          residual = trial_residual;
          res_norm = trial_norm;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (res_norm <= floor()) return w;
      throw Error(ErrorKind::NewtonDivergence, "resolvent line search failed (residual " + std::to_string(res_norm) + ")");
    }
  }
  if (res_norm <= params.newton_tol * scale || res_norm <= floor()) return w;
  throw Error(ErrorKind::NewtonDivergence,
              "resolvent did not converge in " + std::to_string(params.newton_max_iter) + " iterations");
}

Eigen::VectorXd yosida(const ReactionSpec& spec, const YosidaParams& params, const Eigen::VectorXd& v) {
  return (v - resolvent(spec, params, v)) / params.lambda;
}

Eigen::MatrixXd yosida_jacobian(const ReactionSpec& spec, const YosidaParams& params, const Eigen::VectorXd& v,
                                Eigen::VectorXd* value) {
  const Eigen::VectorXd w = resolvent(spec, params, v);
  if (value) *value = (v - w) / params.lambda;
  const Eigen::Index d = v.size();
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd inner = identity + params.lambda * spec.R_jacobian(w);
  return (identity - inner.partialPivLu().solve(identity)) / params.lambda;
}

AccretivityProbe accretivity_probe(const ReactionSpec& spec,
                                   const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& samples) {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "accretivity probe needs at least one sample pair");
  AccretivityProbe probe;
  int monotone = 0;
  for (const auto& [x, y] : samples) {
    if ((spec.R(x) - spec.R(y)).dot(x - y) >= -1e-12) ++monotone;
  }
  probe.monotone_fraction = static_cast<double>(monotone) / static_cast<double>(samples.size());

  if (spec.is_kouachi()) {
    const auto& terms = *spec.kouachi_terms();
    probe.f_origin = std::abs(terms.f.value(0.0, 0.0));
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : samples) {
      for (const Eigen::VectorXd* p : {&x, &y}) {
        const double u = (*p)(0), v = (*p)(1);
        const double f = terms.f.value(u, v);
        lowest = std::min(lowest, -terms.sigma * u * f + terms.rho * v * f);
      }
    }
    probe.cross_term_min = lowest;
  } else {
    probe.f_origin = spec.F(Eigen::VectorXd::Zero(spec.dim())).norm();
  }
  return probe;
}

std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> sample_pairs(int d, double lo, double hi, int count,
                                                                       unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> out;
  out.reserve(static_cast<std::size_t>(std::max(0, count)));
  for (int s = 0; s < count; ++s) {
    Eigen::VectorXd x(d), y(d);
    for (int i = 0; i < d; ++i) x(i) = dist(rng);
    for (int i = 0; i < d; ++i) y(i) = dist(rng);
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

}  // namespace crd
