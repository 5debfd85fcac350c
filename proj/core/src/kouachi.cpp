#include "crd/kouachi.hpp"

#include <cmath>

#include "crd/error.hpp"

namespace crd {

void KouachiParams::validate() const {
  std::vector<std::string> problems;
  const std::pair<const char*, double> constants[] = {
      {"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"sigma", sigma}, {"rho", rho}};
  for (const auto& [name, value] : constants) {
    if (!(value > 0.0) || !std::isfinite(value)) problems.push_back(std::string(name) + " must be a positive constant");
  }
  if (f_name != "uv" && f_name != "uv_power") problems.push_back("unknown coupling field f = '" + f_name + "'");
  if (f_name == "uv_power") {
    auto it = f_params.find("m");
    if (it == f_params.end() || it->second < 1.0 || std::floor(it->second) != it->second) {
      problems.push_back("uv_power needs an integer parameter m >= 1");
    }
  }
  if (!problems.empty()) throw Error(ErrorKind::ValidationError, "invalid Kouachi parameters", problems);
}

ScalarField make_scalar_field(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "uv") return product_field();
  if (name == "uv_power") {
    auto it = params.find("m");
    if (it == params.end()) throw Error(ErrorKind::ValidationError, "uv_power needs parameter m");
    return power_field(static_cast<int>(it->second));
  }
  throw Error(ErrorKind::ValidationError, "unknown coupling field f = '" + name + "'");
}

DiffusionMatrix kouachi_matrix(const KouachiParams& params) {
  return DiffusionMatrix(2, {params.alpha, params.beta, params.gamma, params.alpha});
}

KouachiBuild build_kouachi(const KouachiParams& params, const KouachiBoxConfig& box, bool strict,
                           const SampleBox& sample_box) {
  params.validate();
  return build_kouachi(params, make_scalar_field(params.f_name, params.f_params), box, strict, sample_box);
}

KouachiBuild build_kouachi(const KouachiParams& params, ScalarField f, const KouachiBoxConfig& box, bool strict,
                           const SampleBox& sample_box) {
  {
    KouachiParams copy = params;
    copy.f_name = "uv";  // the field is caller-supplied here
    copy.validate();
  }
  const DiffusionMatrix matrix = kouachi_matrix(params);
  ReactionSpec reaction = ReactionSpec::kouachi(params.sigma, params.rho, std::move(f));
  BasisPtr basis = SpectralBasis::build(box.space_dim, box.lengths, BoundaryKind::Neumann, box.modes_per_axis);

  KouachiBuild build{matrix, reaction, basis};
  build.strict = strict;
  build.closed_form_eigenvalues = kouachi_eigenvalues(params.alpha, params.beta, params.gamma);
  build.verdicts = check_h0(matrix);
  build.conditions = kouachi_conditions(params.alpha, params.beta, params.gamma);

  const auto probe = accretivity_probe(
      reaction, sample_pairs(2, sample_box.lo, sample_box.hi, std::max(1, sample_box.pairs), sample_box.seed));
  build.f_origin = probe.f_origin;
  build.f_origin_zero = probe.f_origin == 0.0;
  build.cross_term_min = probe.cross_term_min;

  build.notes.push_back("Neumann boundary: the zero mode makes the Dirichlet kernel conditions of the block "
                        "analysis inapplicable verbatim");
  if (!build.conditions.mean_dominance) {
    const std::string msg = "2 alpha > beta + gamma fails for (alpha, beta, gamma) = (" +
                            std::to_string(params.alpha) + ", " + std::to_string(params.beta) + ", " +
                            std::to_string(params.gamma) + ")";
    if (strict) throw Error(ErrorKind::ConditionFailed, msg);
    build.notes.push_back("lenient mode: " + msg + "; running on the eigenvalue criterion alone");
  }
  if (!build.f_origin_zero) {
    const std::string msg = "f(0, 0) = " + std::to_string(build.f_origin) + " != 0";
    if (strict) throw Error(ErrorKind::ConditionFailed, msg);
    build.notes.push_back("lenient mode: " + msg);
  }
  if (build.cross_term_min && *build.cross_term_min < 0.0) {
    build.notes.push_back("-sigma u f + rho v f is negative somewhere on the sample box (min " +
                          std::to_string(*build.cross_term_min) + "); R is not accretive there");
  }
  return build;
}

double balance_functional(const FieldState& state, const KouachiParams& params) {
  return balance_integral(state, BalanceWeights{params.rho, params.sigma});
}

double balance_functional(const FrameOutput& frame, const SpectralBasis& basis, const KouachiParams& params) {
  if (frame.values.cols() != 2 || frame.values.rows() != basis.size()) {
    throw Error(ErrorKind::InvalidArgument, "frame does not match a two-species field on this basis");
  }
  return basis.quad_weights().dot(params.rho * frame.values.col(0) + params.sigma * frame.values.col(1));
}

}  // namespace crd
