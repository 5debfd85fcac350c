#pragma once

// Command orchestration: analyze | simulate | stationary | kouachi.
//
// Exit status 0 on success, 2 when the analyzer refuses the configuration
// (H0Violation, ZeroMatrix, ConditionFailed) and 1 for every other failure.
// Every failure also leaves error.json in the output directory.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "crd/config.hpp"
#include "crd/error.hpp"

namespace crd {

struct RunOptions {
  /// Overrides [output] directory.
  std::optional<std::filesystem::path> out_dir;
  bool strict = false;
  bool allow_h0_violation = false;
  /// Progress and error messages; null for silence.
  std::ostream* log = nullptr;
};

int exit_status_for(ErrorKind kind) noexcept;

int run(Command command, const SimulationConfig& config, const RunOptions& options = {});

/// Reads and parses the file, then runs. Parse and I/O failures follow the
/// same exit-status and error.json rules.
int run_file(Command command, const std::filesystem::path& config_path, const RunOptions& options = {});

}  // namespace crd
