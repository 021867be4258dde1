#pragma once

#include <array>
#include <cstddef>
#include <cstdlib>
#include <string>

#include <Eigen/Core>

namespace quatflow {

using Index = Eigen::Index;
using IntVec = std::array<int, 3>;

/// Periodic grid on the torus [0, L_0) x ... x [0, L_{dim-1}).
///
/// Samples are stored row-major: the last axis varies fastest.
struct GridSpec {
  int dim = 2;
  IntVec sizes{0, 0, 1};
  std::array<double, 3> lengths{1.0, 1.0, 1.0};

  /// Throws ConfigurationError unless dim is 2 or 3 and every size is a power of two >= 8.
  void validate() const;

  Index points() const;
  double volume() const;
  double cell_volume() const { return volume() / static_cast<double>(points()); }

  /// Signed integer wavenumber of storage slot `i` along `axis`. The Nyquist slot maps to -N/2.
  int wavenumber(int axis, int i) const {
    const int n = sizes[axis];
    return i < n / 2 ? i : i - n;
  }
  bool is_nyquist(int axis, int k) const { return 2 * std::abs(k) == sizes[axis]; }

  /// Physical frequency 2 pi k / L along `axis`.
  double xi(int axis, int k) const;

  /// Storage slot for a signed wavenumber vector (entries beyond dim ignored).
  Index slot(const IntVec& k) const;

  /// Largest wavenumber kept by the two-thirds rule along `axis`.
  int dealias_cutoff(int axis) const { return sizes[axis] / 3; }

  std::string shape_string() const;

  friend bool operator==(const GridSpec& a, const GridSpec& b);
};

/// Convenience: an isotropic grid with `n` points and period `length` on every axis.
GridSpec make_grid(int dim, int n, double length = 1.0);

/// Per-slot |xi|^2 with xi = 2 pi k / L.
Eigen::ArrayXd xi_squared(const GridSpec& grid);

/// Per-slot component `axis` of the derivative wavenumber: 2 pi k / L, zero on the Nyquist slot.
Eigen::ArrayXd derivative_wavenumber(const GridSpec& grid, int axis);

/// Calls fn(slot, k) for every storage slot, in storage order.
template <typename Fn>
void for_each_mode(const GridSpec& grid, Fn&& fn) {
  const int n0 = grid.sizes[0];
  const int n1 = grid.dim > 1 ? grid.sizes[1] : 1;
  const int n2 = grid.dim > 2 ? grid.sizes[2] : 1;
  Index slot = 0;
  for (int a = 0; a < n0; ++a)
    for (int b = 0; b < n1; ++b)
      for (int c = 0; c < n2; ++c, ++slot)
        fn(slot, IntVec{grid.wavenumber(0, a), grid.dim > 1 ? grid.wavenumber(1, b) : 0,
                        grid.dim > 2 ? grid.wavenumber(2, c) : 0});
}

/// Calls fn(slot, x) for every sample with its physical coordinates.
template <typename Fn>
void for_each_point(const GridSpec& grid, Fn&& fn) {
  const int n0 = grid.sizes[0];
  const int n1 = grid.dim > 1 ? grid.sizes[1] : 1;
  const int n2 = grid.dim > 2 ? grid.sizes[2] : 1;
  const double h0 = grid.lengths[0] / n0;
  const double h1 = grid.lengths[1] / n1;
  const double h2 = grid.lengths[2] / n2;
  Index slot = 0;
  for (int a = 0; a < n0; ++a)
    for (int b = 0; b < n1; ++b)
      for (int c = 0; c < n2; ++c, ++slot)
        fn(slot, std::array<double, 3>{a * h0, b * h1, c * h2});
}

}  // namespace quatflow
