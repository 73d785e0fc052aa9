#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace wavenorm {

enum ExitCode : int { kExitPass = 0, kExitFailure = 1, kExitConfig = 2 };

struct CommandOptions {
  std::optional<std::string> config_path;
  /// Overrides output.dir from the config.
  std::optional<std::string> out_dir;
  unsigned threads = 1;
  std::uint64_t seed = 1;
  /// config subcommand: print the embedded default instead of validating.
  bool print_default = false;
};

/// Example reproduction plus the invariant checks on the configured data.
int cmd_verify(const CommandOptions& opt, std::ostream& out, std::ostream& err);
/// norm_curve.csv, rate_fit.json, bounds.csv
int cmd_rates(const CommandOptions& opt, std::ostream& out, std::ostream& err);
/// bounds.csv
int cmd_bounds(const CommandOptions& opt, std::ostream& out, std::ostream& err);
/// local_energy.csv, local_energy.json
int cmd_local_energy(const CommandOptions& opt, std::ostream& out, std::ostream& err);
/// Validates the config (or prints the default one).
int cmd_config(const CommandOptions& opt, std::ostream& out, std::ostream& err);

/// Dispatch by subcommand name; unknown names give kExitConfig.
int run_command(const std::string& name, const CommandOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace wavenorm
