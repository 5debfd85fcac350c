#pragma once

// Run configuration: a flat INI-style grammar of `[section]` headers and
// `key = value` lines ('#' starts a comment).
//
//   [domain]     space_dim = 1|2, lengths = <list>, bc = dirichlet|neumann
//   [grid]       modes = <list of ints>                      (default 32)
//   [matrix]     d = <int>, entries = <d*d numbers, row-major>
//   [reaction]   name = zero|linear_decay|cubic_decay, orientation =
//                dissipative|literal, plus numeric parameters
//                (linear_decay: rate, cubic_decay: coefficient)
//   [kouachi]    alpha, beta, gamma, sigma, rho, f = uv|uv_power, m,
//                strict = true|false; expands to [matrix] and [reaction]
//   [time]       dt, t_final, frame_stride (10), scheme = lie|strang (strang)
//   [stationary] epsilon, lambda
//   [solver]     newton_tol (1e-12), newton_max_iter (50)
//   [probe]      lo, hi, pairs, seed   (monotonicity sample box)
//   [initial]    seed, u1 .. ud = <expression> | [v0, v1, ...]
//   [output]     directory, formats
//
// Numbers accept a trailing "pi" factor ("pi", "2pi", "0.5*pi").
// Initial-data expressions are sums of catalogue terms, each optionally
// scaled by a leading "c*": sin(k[,k2]), cos(k[,k2]), gauss(x0[,y0],w),
// const(c), noise(), or a bare number.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crd/evolution.hpp"
#include "crd/kouachi.hpp"
#include "crd/reaction.hpp"
#include "crd/spectral_domain.hpp"

namespace crd {

enum class Command { Analyze, Simulate, Stationary, Kouachi };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command c) noexcept;

struct InitialTerm {
  /// sin | cos | gauss | const | noise
  std::string kind;
  double coefficient = 1.0;
  std::vector<double> args;

  bool operator==(const InitialTerm&) const = default;
};

struct InitialComponent {
  std::vector<InitialTerm> terms;
  /// Non-empty for inline grid values.
  std::vector<double> values;

  bool is_inline() const noexcept { return !values.empty(); }
  bool operator==(const InitialComponent&) const = default;
};

struct SimulationConfig {
  struct Domain {
    int space_dim = 1;
    std::vector<double> lengths;
    BoundaryKind bc = BoundaryKind::Dirichlet;
    bool operator==(const Domain&) const = default;
  };
  struct Grid {
    std::vector<int> modes;
    bool operator==(const Grid&) const = default;
  };
  struct Matrix {
    int d = 0;
    std::vector<double> entries;
    bool operator==(const Matrix&) const = default;
  };
  struct Reaction {
    std::string name = "zero";
    std::map<std::string, double> params;
    Orientation orientation = Orientation::Dissipative;
    bool operator==(const Reaction&) const = default;
  };
  struct Kouachi {
    KouachiParams params;
    bool strict = false;
    bool operator==(const Kouachi&) const = default;
  };
  struct Time {
    double dt = 0.0;
    double t_final = 0.0;
    int frame_stride = 10;
    SplitOrder scheme = SplitOrder::Strang;
    bool operator==(const Time&) const = default;
  };
  struct Stationary {
    double epsilon = 1.0;
    double lambda = 1.0;
    bool operator==(const Stationary&) const = default;
  };
  struct Solver {
    double newton_tol = 1e-12;
    int newton_max_iter = 50;
    bool operator==(const Solver&) const = default;
  };
  struct Probe {
    double lo = -1.0;
    double hi = 1.0;
    int pairs = 256;
    unsigned long long seed = 20240611ULL;
    bool operator==(const Probe&) const = default;
  };
  struct Initial {
    unsigned long long seed = 0;
    std::vector<InitialComponent> components;
    bool operator==(const Initial&) const = default;
  };
  struct Output {
    std::string directory = "out";
    std::vector<std::string> formats{"csv"};
    bool operator==(const Output&) const = default;
  };

  Domain domain;
  Grid grid;
  std::optional<Matrix> matrix;
  Reaction reaction;
  std::optional<Kouachi> kouachi;
  std::optional<Time> time;
  std::optional<Stationary> stationary;
  Solver solver;
  Probe probe;
  std::optional<Initial> initial;
  Output output;

  bool operator==(const SimulationConfig&) const = default;
};

/// Parses and validates. Throws ParseError (syntax) or ValidationError
/// (semantics); both carry every violation found in `details()`.
SimulationConfig parse_config(const std::string& text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SimulationConfig& config);

/// Section requirements of one command, as a list of violations.
std::vector<std::string> command_requirements(const SimulationConfig& config, Command command);

/// Domain/grid of the config as a basis.
BasisPtr make_basis(const SimulationConfig& config);
DiffusionMatrix make_matrix(const SimulationConfig& config);
ReactionSpec make_reaction(const SimulationConfig& config);
/// Evaluates [initial] on the basis grid (nodes x d).
FieldState make_initial_field(const SimulationConfig& config, const BasisPtr& basis);

/// Parses one number, allowing a trailing pi factor.
std::optional<double> parse_number(std::string_view text);

}  // namespace crd
