#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "latticeqfi/config.hpp"

namespace latticeqfi {

struct CommandOptions {
  /// Overrides RunConfig::output_dir.
  std::optional<std::filesystem::path> out_dir;
  unsigned threads = 1;
  bool emit_plot = false;
};

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitDimensionCap = 4,
};

// Each command writes <out>/<name>.csv, a JSON summary <out>/<name>.json
// (evolve has none) and, with emit_plot, <out>/<name>.gp.
void cmd_evolve(const RunConfig& config, const CommandOptions& options);
void cmd_qfi(const RunConfig& config, const CommandOptions& options);
void cmd_scan(const RunConfig& config, const CommandOptions& options);
void cmd_scaling(const RunConfig& config, const CommandOptions& options);
void cmd_spectrum(const RunConfig& config, const CommandOptions& options);

/// Loads the config, dispatches on `command` and maps failures to exit
/// codes; diagnostics go to `err`.
int run_command(std::string_view command, const std::string& config_path,
                const CommandOptions& options, std::ostream& err);

}  // namespace latticeqfi
