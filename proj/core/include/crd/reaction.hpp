#pragma once

// The reaction term F, the pointwise accretive operator R built from it, the
// resolvent (I + lambda R)^-1 and the Yosida approximation
// R_lambda = (I - (I + lambda R)^-1) / lambda.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "crd/spectral_domain.hpp"

namespace crd {

/// Which sign of F is treated as the accretive operator R.
enum class Orientation {
  /// R = -F: dissipative reactions such as F(u) = -u^3 give monotone R.
  Dissipative,
  /// R = F, the sign used when the operator is written directly from F.
  Literal,
};

std::string_view to_string(Orientation o) noexcept;

/// Scalar coupling f(u, v) of the two-species model.
struct ScalarField {
  std::string name;
  std::function<double(double, double)> value;
  std::function<Eigen::Vector2d(double, double)> gradient;
};

/// f(u, v) = u v
ScalarField product_field();
/// f(u, v) = u v^m, m >= 1
ScalarField power_field(int m);

struct KouachiTerms {
  double sigma = 1.0;
  double rho = 1.0;
  ScalarField f;
};

class ReactionSpec {
 public:
  using Map = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using JacobianMap = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  /// Registers a user reaction. The Jacobian is checked against central
  /// differences on sampled points; ValidationError on mismatch.
  static ReactionSpec general(std::string name, int d, Map f, JacobianMap jacobian);
  static ReactionSpec zero(int d);
  /// F(u) = -rate * u
  static ReactionSpec linear_decay(int d, double rate);
  /// F(u) = -coefficient * u^3 componentwise
  static ReactionSpec cubic_decay(int d, double coefficient);
  /// F(u, v) = (-sigma f(u, v), rho f(u, v)); sigma, rho > 0.
  static ReactionSpec kouachi(double sigma, double rho, ScalarField f);

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return d_; }
  bool is_kouachi() const noexcept { return kouachi_.has_value(); }
  const std::optional<KouachiTerms>& kouachi_terms() const noexcept { return kouachi_; }

  Orientation orientation() const noexcept { return orientation_; }
  ReactionSpec with_orientation(Orientation o) const;

  Eigen::VectorXd F(const Eigen::VectorXd& u) const { return f_(u); }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& u) const { return jacobian_(u); }

  /// The accretive operator R (sign set by orientation) and its Jacobian.
  Eigen::VectorXd R(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd R_jacobian(const Eigen::VectorXd& u) const;

 private:
  ReactionSpec(std::string name, int d, Map f, JacobianMap jacobian);

  std::string name_;
  int d_ = 0;
  Map f_;
  JacobianMap jacobian_;
  Orientation orientation_ = Orientation::Dissipative;
  std::optional<KouachiTerms> kouachi_;
};

/// Max entrywise |J - J_fd| / (1 + max|J|) over deterministic sample points
/// in [-box, box]^d.
double jacobian_mismatch(const ReactionSpec& spec, double box = 2.0, int samples = 16);

struct YosidaParams {
  double lambda = 1.0;
  double newton_tol = 1e-12;
  int newton_max_iter = 50;

  /// Throws ValidationError for lambda <= 0, newton_tol <= 0 or max_iter < 1.
  void validate() const;
};

/// F applied at every grid node; the result carries grid values only.
/// Throws NonFiniteValue on overflow.
FieldState eval_reaction(const ReactionSpec& spec, const FieldState& state);

/// f(u, v) at every grid node (Kouachi reactions only).
Eigen::VectorXd kouachi_scalar(const ReactionSpec& spec, const FieldState& state);

/// w with w + lambda R(w) = v, by damped Newton from w = v.
/// Throws NewtonDivergence or NonFiniteValue.
Eigen::VectorXd resolvent(const ReactionSpec& spec, const YosidaParams& params, const Eigen::VectorXd& v);

/// R_lambda(v) = (v - resolvent(v)) / lambda
Eigen::VectorXd yosida(const ReactionSpec& spec, const YosidaParams& params, const Eigen::VectorXd& v);

/// Derivative of R_lambda at v: (I - (I + lambda R'(w))^-1) / lambda with
/// w = resolvent(v). Also returns R_lambda(v) through `value`.
Eigen::MatrixXd yosida_jacobian(const ReactionSpec& spec, const YosidaParams& params, const Eigen::VectorXd& v,
                                Eigen::VectorXd* value = nullptr);

struct AccretivityProbe {
  /// Fraction of pairs with <R(x) - R(y), x - y> >= -1e-12.
  double monotone_fraction = 0.0;
  /// |f(0, 0)| for Kouachi reactions, ||F(0)|| otherwise.
  double f_origin = 0.0;
  /// min over sampled points of -sigma u f + rho v f (Kouachi only).
  std::optional<double> cross_term_min;
};

/// Throws InvalidArgument on an empty sample set.
AccretivityProbe accretivity_probe(const ReactionSpec& spec,
                                   const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& samples);

/// Deterministic uniform pairs in [lo, hi]^d.
std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> sample_pairs(int d, double lo, double hi, int count,
                                                                       unsigned long long seed);

}  // namespace crd
