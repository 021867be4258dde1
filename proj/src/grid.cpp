#include "quatflow/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "quatflow/errors.hpp"

namespace quatflow {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

void GridSpec::validate() const {
  if (dim != 2 && dim != 3) {
    throw ConfigurationError("grid dim must be 2 or 3, got " + std::to_string(dim));
  }
  for (int a = 0; a < dim; ++a) {
    if (sizes[a] < 8 || !is_power_of_two(sizes[a])) {
      throw ConfigurationError("grid size along axis " + std::to_string(a) +
                               " must be a power of two >= 8, got " + std::to_string(sizes[a]));
    }
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
      throw ConfigurationError("domain length along axis " + std::to_string(a) + " must be positive");
    }
  }
}

Index GridSpec::points() const {
  Index n = 1;
  for (int a = 0; a < dim; ++a) n *= sizes[a];
  return n;
}

double GridSpec::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= lengths[a];
  return v;
}

double GridSpec::xi(int axis, int k) const { return 2.0 * std::numbers::pi * k / lengths[axis]; }

Index GridSpec::slot(const IntVec& k) const {
  Index s = 0;
  for (int a = 0; a < dim; ++a) {
    const int n = sizes[a];
    s = s * n + ((k[a] % n) + n) % n;
  }
  return s;
}

std::string GridSpec::shape_string() const {
  std::ostringstream os;
  for (int a = 0; a < dim; ++a) os << (a ? "x" : "") << sizes[a];
  return os.str();
}

bool operator==(const GridSpec& a, const GridSpec& b) {
  if (a.dim != b.dim) return false;
  for (int i = 0; i < a.dim; ++i) {
    if (a.sizes[i] != b.sizes[i] || a.lengths[i] != b.lengths[i]) return false;
  }
  return true;
}

GridSpec make_grid(int dim, int n, double length) {
  GridSpec g;
  g.dim = dim;
  g.sizes = {1, 1, 1};
  g.lengths = {1.0, 1.0, 1.0};
  for (int a = 0; a < dim; ++a) {
    g.sizes[a] = n;
    g.lengths[a] = length;
  }
  g.validate();
  return g;
}

Eigen::ArrayXd xi_squared(const GridSpec& grid) {
  Eigen::ArrayXd out(grid.points());
  for_each_mode(grid, [&](Index s, const IntVec& k) {
    double r2 = 0.0;
    for (int a = 0; a < grid.dim; ++a) {
      const double x = grid.xi(a, k[a]);
      r2 += x * x;
    }
    out[s] = r2;
  });
  return out;
}

Eigen::ArrayXd derivative_wavenumber(const GridSpec& grid, int axis) {
  Eigen::ArrayXd out(grid.points());
  for_each_mode(grid, [&](Index s, const IntVec& k) {
    out[s] = grid.is_nyquist(axis, k[axis]) ? 0.0 : grid.xi(axis, k[axis]);
  });
  return out;
}

}  // namespace quatflow
