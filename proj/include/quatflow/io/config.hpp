#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "quatflow/solver.hpp"

namespace quatflow::io {

/// Run options that sit next to the solver configuration.
struct RunOptions {
  /// Named preset for the initial field (ignored when `initial_snapshot` is set).
  std::string preset;
  std::string initial_snapshot;
  /// Multiplies the initial field.
  double initial_amplitude = 1.0;
  /// Steps between field snapshots; 0 writes only the initial and final fields.
  int snapshot_every = 0;
};

struct ParsedConfig {
  SimConfig sim;
  RunOptions run;
};

/// Parses a YAML configuration. Recognized layout (all keys optional,
/// SimConfig defaults fill the rest):
///
///   grid: {dim: 2, sizes: [32, 32], domain_length: 1.0}   # length may be a list
///   nu: 0.1
///   t_end: 0.1
///   dt: 0.001
///   nonlinearity_mode: advective        # or hamilton
///   nonlinear: true
///   diag_every: 10
///   r_exponent: 2
///   besov: {s: 2, p: 2, q_idx: 2}       # p, q_idx accept "inf"
///   forcing: {kind: none, amplitude: 0, mode: [1, 0], decay_rate: 0}
///   initial: {preset: taylor-green-2d, snapshot: path, amplitude: 1}
///   output: {snapshot_every: 0}
///
/// Unknown keys are rejected with their line number and, when one is close,
/// a suggested key. Throws ConfigurationError.
ParsedConfig parse_config(const std::filesystem::path& path);
ParsedConfig parse_config_string(const std::string& text, const std::string& source = "<string>");

/// Known key closest to `key` within edit distance 2 (aliases such as
/// "viscosity" map to their key), if any.
std::optional<std::string> suggest_key(const std::string& key, const std::string& section = "");

std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace quatflow::io
