#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latticeqfi/fock.hpp"
#include "latticeqfi/metro.hpp"
#include "latticeqfi/model.hpp"

namespace latticeqfi {

/**
 * One run, read from a single JSON document. Unknown keys are rejected.
 *
 * Axes ("times", "U_axis") accept an array of numbers, {"start", "stop",
 * "points"}, {"start", "stop", "step"} or {"end", "points"} for points
 * evenly spaced on (0, end].
 */
struct RunConfig {
  ModelKind kind = ModelKind::effective;
  ModelParams params;
  InitialStateSpec initial;
  QfiMethod method = QfiMethod::generator;
  std::vector<double> times;   // default: default_time_axis(M)
  std::vector<double> U_axis;  // default: 0..4 step 0.04
  std::vector<int> M_axis;     // default: 2..M
  int steps_per_period = 40;
  std::optional<double> dgamma;
  double T_end_per_mode = 1.5;
  std::size_t time_points = 400;
  std::string output_dir = ".";
  /// Normalized JSON (sorted keys, defaults filled in); hashed for provenance.
  std::string canonical;
};

/// Throws ConfigError naming the offending key, or the line and column of a
/// syntax error.
RunConfig parse_config(std::string_view text, std::string_view origin = "config");
RunConfig load_config(const std::string& path);

}  // namespace latticeqfi
