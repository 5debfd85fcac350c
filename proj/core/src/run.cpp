#include "crd/run.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "crd/evolution.hpp"
#include "crd/kouachi.hpp"
#include "crd/output.hpp"
#include "crd/semigroup.hpp"

namespace crd {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void log_line(const RunOptions& options, const std::string& text) {
  if (options.log) *options.log << text << "\n";
}

struct Analysis {
  AnalysisReport report;
  json document;
};

KouachiBoxConfig box_of(const SimulationConfig& config) {
  return {config.domain.space_dim, config.domain.lengths, config.grid.modes};
}

SampleBox sample_box_of(const SimulationConfig& config) {
  return {config.probe.lo, config.probe.hi, config.probe.pairs, config.probe.seed};
}

// Runs the matrix (and preset) analysis, writes report.json and throws the
// analyzer refusal, if any, afterwards.
Analysis analyze(Command command, const SimulationConfig& config, const RunOptions& options, const fs::path& out) {
  const DiffusionMatrix matrix = make_matrix(config);
  const bool strict = options.strict || (config.kouachi && config.kouachi->strict);
  AnalysisReport report{std::string(to_string(command)), matrix, block_conditions(matrix), std::nullopt, {}};

  std::optional<Error> refusal;
  if (config.kouachi) {
    const auto& p = config.kouachi->params;
    const KouachiBuild build = build_kouachi(p, box_of(config), false, sample_box_of(config));
    report.kouachi = KouachiSummary{p,
                                    build.closed_form_eigenvalues,
                                    build.conditions,
                                    build.f_origin_zero,
                                    build.cross_term_min,
                                    strict};
    for (const auto& note : build.notes) {
      if (!strict || note.rfind("lenient mode", 0) != 0) report.notes.push_back(note);
    }
    if (strict && !build.conditions.mean_dominance) {
      refusal = Error(ErrorKind::ConditionFailed, "strict mode: 2 alpha > beta + gamma fails",
                      {"alpha = " + format_double(p.alpha), "beta = " + format_double(p.beta),
                       "gamma = " + format_double(p.gamma)});
    } else if (strict && !build.f_origin_zero) {
      refusal = Error(ErrorKind::ConditionFailed, "strict mode: the coupling field does not vanish at the origin");
    }
  }
  if (!report.verdicts.h0_pass) {
    if (options.allow_h0_violation) {
      report.notes.push_back("H0 fails (min real part " + format_double(report.verdicts.spectrum.min_real_part) +
                             "); continuing because the override flag is set");
    } else if (!refusal) {
      refusal = Error(ErrorKind::H0Violation, "M has an eigenvalue with negative real part",
                      {"min real part = " + format_double(report.verdicts.spectrum.min_real_part),
                       "tol_eig = " + format_double(report.verdicts.tol_eig)});
    }
  }

  const std::string text = render_report(report);
  write_text(out / "report.json", text);
  log_line(options, "wrote " + (out / "report.json").string());
  if (refusal) throw *refusal;
  return {std::move(report), json::parse(text)};
}

json config_echo(const SimulationConfig& config) { return serialize_config(config); }

void run_evolution(Command command, const SimulationConfig& config, const RunOptions& options, const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  Analysis analysis = analyze(command, config, options, out);

  const BasisPtr basis = make_basis(config);
  const DiffusionMatrix& matrix = analysis.report.matrix;
  const ReactionSpec reaction = make_reaction(config);
  const FieldState initial = make_initial_field(config, basis);
  if (initial.components() != matrix.dim()) {
    throw Error(ErrorKind::ValidationError, "initial data has " + std::to_string(initial.components()) +
                                                " components but d = " + std::to_string(matrix.dim()));
  }

  SplitScheme scheme = SplitScheme::for_interval(config.time->scheme, config.time->t_final, config.time->dt);
  scheme.newton.newton_tol = config.solver.newton_tol;
  scheme.newton.newton_max_iter = config.solver.newton_max_iter;

  std::optional<BalanceWeights> balance;
  if (config.kouachi) balance = BalanceWeights{config.kouachi->params.rho, config.kouachi->params.sigma};

  EvolutionProblem problem{matrix,
                           reaction,
                           scheme,
                           initial,
                           config.time->frame_stride,
                           balance,
                           StepOptions{options.allow_h0_violation, ExpmMethod::ScalingSquaring}};

  std::vector<FrameOutput> frames;
  json frame_list = json::array();
  solve_evolution(problem, [&](const FrameOutput& frame) {
    const std::string name = frame_file_name(frame.index);
    write_text(out / name, frame_csv(*basis, frame));
    FrameOutput light = frame;
    light.values.resize(0, 0);
    frames.push_back(std::move(light));
    frame_list.push_back({{"index", frame.index}, {"step", frame.step}, {"time", frame.time}, {"file", name}});
  });
  write_text(out / "diagnostics.csv", diagnostics_csv(frames, matrix.dim()));

  const ModalPropagator full(matrix, basis->mu(), scheme.dt);
  json meta;
  meta["command"] = std::string(to_string(command));
  meta["config"] = config_echo(config);
  meta["report"] = analysis.document;
  meta["scheme"] = {{"order", std::string(to_string(scheme.order))},
                    {"dt", scheme.dt},
                    {"steps", scheme.steps},
                    {"t_final", scheme.final_time()}};
  meta["frames"] = frame_list;
  meta["propagator"] = {{"max_spectral_radius", full.max_spectral_radius()},
                        {"max_operator_norm", full.max_operator_norm()}};
  if (config.kouachi && !frames.empty()) {
    const double q0 = *frames.front().diagnostics.balance;
    double drift = 0.0;
    for (const auto& f : frames) drift = std::max(drift, std::abs(*f.diagnostics.balance - q0));
    const auto& k = *analysis.report.kouachi;
    meta["kouachi"] = {{"eigenvalues", k.closed_form_eigenvalues},
                       {"mean_dominance", k.conditions.mean_dominance},
                       {"geomean_dominance", k.conditions.geomean_dominance},
                       {"f_origin_zero", k.f_origin_zero},
                       {"balance_initial", q0},
                       {"balance_final", *frames.back().diagnostics.balance},
                       {"balance_max_drift", drift}};
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  meta["wall_time_seconds"] = wall;
  write_text(out / "meta.json", meta.dump(2) + "\n");
  log_line(options, "wrote " + std::to_string(frames.size()) + " frames to " + out.string());
}

void run_stationary(const SimulationConfig& config, const RunOptions& options, const fs::path& out) {
  const auto start = std::chrono::steady_clock::now();
  Analysis analysis = analyze(Command::Stationary, config, options, out);

  const BasisPtr basis = make_basis(config);
  const DiffusionMatrix& matrix = analysis.report.matrix;
  const ReactionSpec reaction = make_reaction(config);
  const FieldState rhs = make_initial_field(config, basis);
  if (rhs.components() != matrix.dim()) {
    throw Error(ErrorKind::ValidationError, "right-hand side has " + std::to_string(rhs.components()) +
                                                " components but d = " + std::to_string(matrix.dim()));
  }

  StationaryProblem problem{config.stationary->epsilon, config.stationary->lambda, rhs};
  StationaryOptions solver;
  solver.allow_nonaccretive = options.allow_h0_violation;
  const StationaryResult result = solve_stationary(problem, matrix, reaction, solver);

  write_text(out / "solution.csv", frame_csv(*basis, make_frame(result.solution, 0, 0, 0.0, std::nullopt)));
  const json bound = {{"epsilon", problem.epsilon},
                      {"lambda", problem.lambda},
                      {"solution_norm", result.solution_norm},
                      {"rhs_norm", result.rhs_norm},
                      {"bound", result.bound},
                      {"tolerance", 1e-8},
                      {"satisfied", result.solution_norm <= result.bound + 1e-8},
                      {"residual_norm", result.residual_norm},
                      {"newton_iterations", result.newton_iterations},
                      {"krylov_iterations", result.krylov_iterations}};
  write_text(out / "bound.json", bound.dump(2) + "\n");

  json meta;
  meta["command"] = "stationary";
  meta["config"] = config_echo(config);
  meta["report"] = analysis.document;
  meta["bound"] = bound;
  meta["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text(out / "meta.json", meta.dump(2) + "\n");
  log_line(options, "wrote solution.csv, bound.json to " + out.string());
}

int fail(const Error& error, const fs::path& out, const RunOptions& options) {
  const int status = exit_status_for(error.kind());
  if (options.log) {
    *options.log << "error [" << to_string(error.kind()) << "]: " << error.what() << "\n";
    for (const auto& d : error.details()) *options.log << "  - " << d << "\n";
  }
  try {
    write_text(out / "error.json", render_error(error, status));
  } catch (const std::exception& e) {
    log_line(options, std::string("could not write error.json: ") + e.what());
  }
  return status;
}

template <typename Body>
int guarded(const fs::path& out, const RunOptions& options, Body&& body) {
  try {
    body();
    return 0;
  } catch (const Error& e) {
    return fail(e, out, options);
  } catch (const fs::filesystem_error& e) {
    return fail(Error(ErrorKind::IoError, e.what()), out, options);
  } catch (const std::exception& e) {
    return fail(Error(ErrorKind::InvalidArgument, e.what()), out, options);
  }
}

}  // namespace

int exit_status_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::H0Violation:
    case ErrorKind::ZeroMatrix:
    case ErrorKind::ConditionFailed:
      return 2;
    default:
      return 1;
  }
}

int run(Command command, const SimulationConfig& config, const RunOptions& options) {
  const fs::path out = options.out_dir.value_or(fs::path(config.output.directory));
  return guarded(out, options, [&] {
    auto missing = command_requirements(config, command);
    if (!missing.empty()) {
      throw Error(ErrorKind::ValidationError,
                  "configuration is incomplete for '" + std::string(to_string(command)) + "'", std::move(missing));
    }
    fs::create_directories(out);
    switch (command) {
      case Command::Analyze:
        analyze(command, config, options, out);
        break;
      case Command::Simulate:
      case Command::Kouachi:
        run_evolution(command, config, options, out);
        break;
      case Command::Stationary:
        run_stationary(config, options, out);
        break;
    }
  });
}

int run_file(Command command, const fs::path& config_path, const RunOptions& options) {
  std::optional<SimulationConfig> config;
  const fs::path fallback = options.out_dir.value_or(fs::path("out"));
  const int status = guarded(fallback, options, [&] {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot read " + config_path.string());
    std::ostringstream text;
    text << in.rdbuf();
    config = parse_config(text.str());
  });
  if (status != 0) return status;
  return run(command, *config, options);
}

}  // namespace crd
