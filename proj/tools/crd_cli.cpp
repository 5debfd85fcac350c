// crd: analyze | simulate | stationary | kouachi --config <path> [--out <dir>]
//      [--strict] [--allow-h0-violation]

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crd/config.hpp"
#include "crd/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver for strongly coupled reaction-diffusion systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool strict = false;
  bool allow_h0 = false;
  bool quiet = false;

  const std::pair<const char*, const char*> commands[] = {
      {"analyze", "Spectral and well-posedness report for the diffusion matrix"},
      {"simulate", "Time-step the system and write frames"},
      {"stationary", "Solve the regularized stationary problem"},
      {"kouachi", "Run the two-species preset with its balance diagnostics"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config,-c", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out,-o", out_dir, "Output directory (overrides [output] directory)");
    sub->add_flag("--strict", strict, "Refuse presets that fail 2 alpha > beta + gamma");
    sub->add_flag("--allow-h0-violation", allow_h0, "Run even when M has eigenvalues with negative real part");
    sub->add_flag("--quiet,-q", quiet, "Suppress progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  crd::RunOptions options;
  if (!out_dir.empty()) options.out_dir = std::filesystem::path(out_dir);
  options.strict = strict;
  options.allow_h0_violation = allow_h0;
  options.log = quiet ? nullptr : &std::cerr;
  return crd::run_file(*crd::parse_command(name), config_path, options);
}
