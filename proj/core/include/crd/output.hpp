#pragma once

// On-disk artifacts: frame CSVs, analyzer reports, error records. Floats are
// written with 17 significant digits and JSON keys are sorted, so identical
// runs produce identical files.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "crd/error.hpp"
#include "crd/evolution.hpp"
#include "crd/kouachi.hpp"
#include "crd/matrix_analysis.hpp"
#include "crd/spectral_domain.hpp"

namespace crd {

std::string format_double(double x);

/// Header `x[,y],u1..ud[,Q]`, one row per grid node.
std::string frame_csv(const SpectralBasis& basis, const FrameOutput& frame);
std::string frame_file_name(int index);

/// One row per frame: index, step, time, l2/min/max per component[, Q].
std::string diagnostics_csv(const std::vector<FrameOutput>& frames, int components);

struct KouachiSummary {
  KouachiParams params;
  std::vector<double> closed_form_eigenvalues;
  KouachiConditions conditions;
  bool f_origin_zero = false;
  std::optional<double> cross_term_min;
  bool strict = false;
};

struct AnalysisReport {
  std::string command = "analyze";
  DiffusionMatrix matrix;
  WellPosednessReport verdicts;
  std::optional<KouachiSummary> kouachi;
  std::vector<std::string> notes;
};

/// Pretty-printed report.json text. Throws ValidationError when the document
/// does not satisfy the shipped schema.
std::string render_report(const AnalysisReport& report);

/// Schema violations of a report document (empty when valid). ParseError for
/// text that is not JSON.
std::vector<std::string> validate_report(const std::string& json_text);
std::string report_schema_text();

std::string render_error(const Error& error, int exit_status);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace crd
