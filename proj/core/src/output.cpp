#include "crd/output.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "schema.hpp"

namespace crd {

namespace {

using nlohmann::json;

json report_document(const AnalysisReport& report) {
  const auto& v = report.verdicts;
  json doc;
  doc["command"] = report.command;
  doc["matrix"] = {{"d", report.matrix.dim()},
                   {"entries", report.matrix.row_major()},
                   {"frobenius_norm", report.matrix.norm()}};
  doc["h0"] = {{"pass", v.h0_pass},
               {"tol_eig", v.tol_eig},
               {"symbol_accretive", v.symbol_accretive},
               {"zero_matrix", v.is_zero_matrix}};

  json eigenvalues = json::array();
  for (const auto& z : v.spectrum.eigenvalues) eigenvalues.push_back({{"re", z.real()}, {"im", z.imag()}});
  json clusters = json::array();
  for (const auto& c : v.spectrum.clusters) {
    clusters.push_back({{"re", c.value.real()},
                        {"im", c.value.imag()},
                        {"multiplicity", c.multiplicity},
                        {"block_sizes", c.block_sizes}});
  }
  doc["spectrum"] = {{"eigenvalues", eigenvalues},
                     {"clusters", clusters},
                     {"normality_defect", v.spectrum.normality_defect},
                     {"min_real_part", v.spectrum.min_real_part},
                     {"diagnostic", v.spectrum.diagnostic},
                     {"tol_cluster", v.spectrum.tol_cluster}};

  json blocks = {{"applicable", v.blocks.has_value()}};
  if (v.blocks) {
    blocks["d_even"] = v.blocks->d_even;
    blocks["blocks_commute"] = v.blocks->blocks_commute;
    blocks["m1_invertible"] = v.blocks->m1_invertible;
    blocks["m4_invertible"] = v.blocks->m4_invertible;
  } else {
    blocks["d_even"] = report.matrix.dim() % 2 == 0;
  }
  doc["block_conditions"] = blocks;

  if (report.kouachi) {
    const auto& k = *report.kouachi;
    json kj = {{"alpha", k.params.alpha},
               {"beta", k.params.beta},
               {"gamma", k.params.gamma},
               {"sigma", k.params.sigma},
               {"rho", k.params.rho},
               {"f", k.params.f_name},
               {"closed_form_eigenvalues", k.closed_form_eigenvalues},
               {"mean_dominance", k.conditions.mean_dominance},
               {"geomean_dominance", k.conditions.geomean_dominance},
               {"f_origin_zero", k.f_origin_zero},
               {"strict", k.strict}};
    if (k.cross_term_min) kj["cross_term_min"] = *k.cross_term_min;
    doc["kouachi"] = kj;
  }
  std::vector<std::string> notes = v.notes;
  notes.insert(notes.end(), report.notes.begin(), report.notes.end());
  doc["notes"] = notes;
  return doc;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string frame_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d.csv", index);
  return buf;
}

std::string frame_csv(const SpectralBasis& basis, const FrameOutput& frame) {
  if (frame.values.rows() != basis.size()) {
    throw Error(ErrorKind::InvalidArgument, "frame does not match the basis grid");
  }
  const bool two_d = basis.space_dim() == 2;
  const bool with_q = frame.diagnostics.balance.has_value();
  std::string out = two_d ? "x,y" : "x";
  for (Eigen::Index c = 0; c < frame.values.cols(); ++c) out += ",u" + std::to_string(c + 1);
  if (with_q) out += ",Q";
  out += "\n";
  const std::string q = with_q ? format_double(*frame.diagnostics.balance) : std::string();
  for (int i = 0; i < basis.size(); ++i) {
    const auto p = basis.node(i);
    out += format_double(p[0]);
    if (two_d) out += "," + format_double(p[1]);
    for (Eigen::Index c = 0; c < frame.values.cols(); ++c) out += "," + format_double(frame.values(i, c));
    if (with_q) out += "," + q;
    out += "\n";
  }
  return out;
}

std::string diagnostics_csv(const std::vector<FrameOutput>& frames, int components) {
  const bool with_q = !frames.empty() && frames.front().diagnostics.balance.has_value();
  std::string out = "index,step,time";
  for (const char* stat : {"l2", "min", "max"}) {
    for (int c = 0; c < components; ++c) out += std::string(",") + stat + "_u" + std::to_string(c + 1);
  }
  if (with_q) out += ",Q";
  out += "\n";
  for (const auto& f : frames) {
    out += std::to_string(f.index) + "," + std::to_string(f.step) + "," + format_double(f.time);
    for (const Eigen::VectorXd* v : {&f.diagnostics.l2_norms, &f.diagnostics.min, &f.diagnostics.max}) {
      for (int c = 0; c < components; ++c) out += "," + format_double((*v)(c));
    }
    if (with_q) out += "," + format_double(f.diagnostics.balance.value_or(0.0));
    out += "\n";
  }
  return out;
}

std::string render_report(const AnalysisReport& report) {
  const json doc = report_document(report);
  auto problems = detail::validate_json(doc, detail::report_schema());
  if (!problems.empty()) {
    throw Error(ErrorKind::ValidationError, "report does not satisfy its schema", std::move(problems));
  }
  return doc.dump(2) + "\n";
}

std::vector<std::string> validate_report(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("report is not valid JSON: ") + e.what());
  }
  return detail::validate_json(doc, detail::report_schema());
}

std::string report_schema_text() { return detail::report_schema().dump(2) + "\n"; }

std::string render_error(const Error& error, int exit_status) {
  const json doc = {{"kind", std::string(to_string(error.kind()))},
                    {"message", error.what()},
                    {"details", error.details()},
                    {"exit_status", exit_status}};
  return doc.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

}  // namespace crd
