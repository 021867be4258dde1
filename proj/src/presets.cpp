#include "quatflow/presets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "quatflow/errors.hpp"

namespace quatflow {

QField taylor_green_2d(const GridSpec& grid, double amplitude) {
  if (grid.dim != 2) throw ConfigurationError("taylor-green-2d needs a 2-D grid");
  QField out(grid, Representation::physical);
  const double sx = 2.0 * std::numbers::pi / grid.lengths[0];
  const double sy = 2.0 * std::numbers::pi / grid.lengths[1];
  for_each_point(grid, [&](Index s, const std::array<double, 3>& x) {
    out.real(1)[s] = amplitude * std::sin(sx * x[0]) * std::cos(sy * x[1]);
    out.real(2)[s] = -amplitude * std::cos(sx * x[0]) * std::sin(sy * x[1]);
  });
  return out;
}

QField single_mode_field(const GridSpec& grid, const IntVec& k, int component, double amplitude, bool cosine) {
  QField out(grid, Representation::physical);
  for_each_point(grid, [&](Index s, const std::array<double, 3>& x) {
    double phase = 0.0;
    for (int a = 0; a < grid.dim; ++a) phase += grid.xi(a, k[a]) * x[a];
    out.real(component)[s] = amplitude * (cosine ? std::cos(phase) : std::sin(phase));
  });
  return out;
}

QField white_noise_field(const GridSpec& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  QField out(grid, Representation::physical);
  for (int c = 0; c < QField::kComponents; ++c) {
    for (Index s = 0; s < out.size(); ++s) out.real(c)[s] = normal(rng);
  }
  return out;
}

QField random_field(const GridSpec& grid, std::uint64_t seed, const RandomFieldOptions& options) {
  QField noise = white_noise_field(grid, seed);
  if (!options.scalar_part) noise.real(0).setZero();
  for (int c = grid.dim + 1; c < QField::kComponents; ++c) noise.real(c).setZero();

  Eigen::ArrayXd envelope(grid.points());
  for_each_mode(grid, [&](Index s, const IntVec& k) {
    double k2 = 0.0;
    bool inside = true;
    for (int a = 0; a < grid.dim; ++a) {
      k2 += static_cast<double>(k[a]) * k[a];
      inside = inside && (!options.dealiased || std::abs(k[a]) <= grid.dealias_cutoff(a));
    }
    double e = 0.0;
    if (inside && k2 > 0.0) {
      e = options.envelope_width > 0.0 ? std::exp(-k2 / (options.envelope_width * options.envelope_width))
                                       : std::pow(k2, -0.5 * options.power_law);
    }
    envelope[s] = e;
  });
  QField spec = apply_multiplier(forward_transform(noise), envelope);
  if (options.solenoidal) spec = leray_project(spec);
  QField out = inverse_transform(spec);
  const double rms = std::sqrt(l2_norm_sq(out) / grid.volume());
  if (rms > 0.0) out *= options.rms / rms;
  return out;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"taylor-green-2d", "broadband-3d", "forced-low-mode"};
  return names;
}

Preset make_preset(const std::string& name) {
  const double two_pi = 2.0 * std::numbers::pi;
  Preset p;
  p.name = name;
  if (name == "taylor-green-2d") {
    p.config.grid = make_grid(2, 64, two_pi);
    p.config.nu = 0.1;
    p.config.dt = 1e-3;
    p.config.t_end = 0.1;
    p.config.diag_every = 10;
    p.initial = taylor_green_2d(p.config.grid);
  } else if (name == "broadband-3d") {
    p.config.grid = make_grid(3, 32, two_pi);
    p.config.nu = 0.05;
    p.config.dt = 2e-3;
    p.config.t_end = 0.05;
    p.config.diag_every = 5;
    RandomFieldOptions opts;
    opts.envelope_width = 0.0;
    opts.power_law = 1.5;
    p.initial = random_field(p.config.grid, 7, opts);
  } else if (name == "forced-low-mode") {
    p.config.grid = make_grid(2, 32, two_pi);
    p.config.nu = 0.1;
    p.config.dt = 1e-2;
    p.config.t_end = 1.0;
    p.config.diag_every = 10;
    p.config.forcing.kind = ForcingKind::steady_low_mode;
    p.config.forcing.amplitude = 1e-3;
    p.config.forcing.mode = {1, 2, 0};
    RandomFieldOptions opts;
    opts.envelope_width = 2.0;
    opts.rms = 1e-3;
    p.initial = random_field(p.config.grid, 11, opts);
  } else {
    throw ConfigurationError("unknown preset '" + name + "'");
  }
  return p;
}

}  // namespace quatflow
