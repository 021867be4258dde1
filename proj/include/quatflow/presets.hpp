#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quatflow/field.hpp"
#include "quatflow/solver.hpp"

namespace quatflow {

/// u = A sin(x) cos(y), v = -A cos(x) sin(y) in components x, y, with
/// coordinates scaled by 2 pi / L. Physical representation.
QField taylor_green_2d(const GridSpec& grid, double amplitude = 1.0);

/// amplitude * cos(xi_k . x) (or sin) in one component. Physical representation.
QField single_mode_field(const GridSpec& grid, const IntVec& k, int component, double amplitude = 1.0,
                         bool cosine = true);

struct RandomFieldOptions {
  /// Gaussian envelope exp(-(|k| / width)^2) on integer wavenumbers; <= 0 selects a power law.
  double envelope_width = 4.0;
  /// Coefficient magnitude ~ |k|^-power_law when envelope_width <= 0.
  double power_law = 1.0;
  bool solenoidal = true;
  /// Fill the scalar component w as well as the velocity components.
  bool scalar_part = false;
  /// Root-mean-square magnitude of the result.
  double rms = 1.0;
  /// Zero modes beyond the two-thirds cutoff.
  bool dealiased = true;
};

/// Real-valued random field with a smooth spectral envelope, seeded.
/// Physical representation.
QField random_field(const GridSpec& grid, std::uint64_t seed, const RandomFieldOptions& options = {});

/// Uncorrelated Gaussian samples in all four components. Physical representation.
QField white_noise_field(const GridSpec& grid, std::uint64_t seed);

struct Preset {
  std::string name;
  SimConfig config;
  QField initial;
};

const std::vector<std::string>& preset_names();

/// Throws ConfigurationError for an unknown name.
Preset make_preset(const std::string& name);

}  // namespace quatflow
