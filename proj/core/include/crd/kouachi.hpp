#pragma once

// Two-species preset: M = [[alpha, beta], [gamma, alpha]], Neumann box,
// F(u, v) = (-sigma f(u, v), rho f(u, v)) and the balance functional
// Q = integral of (rho u + sigma v), which both substeps conserve.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crd/evolution.hpp"
#include "crd/matrix_analysis.hpp"
#include "crd/reaction.hpp"
#include "crd/spectral_domain.hpp"

namespace crd {

struct KouachiParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double sigma = 1.0;
  double rho = 1.0;
  /// Built-in scalar field: "uv" or "uv_power" (parameter "m").
  std::string f_name = "uv";
  std::map<std::string, double> f_params;

  /// Every constant must be positive and f_name known (ValidationError,
  /// listing all violations).
  void validate() const;
  bool operator==(const KouachiParams&) const = default;
};

/// Built-in catalogue of coupling fields, all with f(0, 0) = 0.
ScalarField make_scalar_field(const std::string& name, const std::map<std::string, double>& params);

DiffusionMatrix kouachi_matrix(const KouachiParams& params);

struct KouachiBoxConfig {
  int space_dim = 1;
  std::vector<double> lengths;
  std::vector<int> modes_per_axis;
};

/// Box on which -sigma u f + rho v f >= 0 is sampled.
struct SampleBox {
  double lo = -1.0;
  double hi = 1.0;
  int pairs = 256;
  unsigned long long seed = 20240611ULL;
};

struct KouachiBuild {
  DiffusionMatrix matrix;
  ReactionSpec reaction;
  BasisPtr basis;
  /// alpha +- sqrt(beta gamma), descending.
  std::vector<double> closed_form_eigenvalues;
  WellPosednessReport verdicts;
  KouachiConditions conditions;
  /// |f(0, 0)|
  double f_origin = 0.0;
  bool f_origin_zero = false;
  std::optional<double> cross_term_min;
  bool strict = false;
  std::vector<std::string> notes;
};

/// Assembles matrix, reaction and Neumann basis and attaches the analyzer
/// verdicts. In strict mode a failing 2 alpha > beta + gamma (or
/// f(0, 0) != 0) throws ConditionFailed.
KouachiBuild build_kouachi(const KouachiParams& params, const KouachiBoxConfig& box, bool strict,
                           const SampleBox& sample_box = {});
/// Same, with a caller-supplied coupling field.
KouachiBuild build_kouachi(const KouachiParams& params, ScalarField f, const KouachiBoxConfig& box, bool strict,
                           const SampleBox& sample_box = {});

/// Q = integral of (rho u + sigma v) by quadrature.
double balance_functional(const FieldState& state, const KouachiParams& params);
double balance_functional(const FrameOutput& frame, const SpectralBasis& basis, const KouachiParams& params);

}  // namespace crd
