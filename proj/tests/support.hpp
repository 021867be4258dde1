#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "quatflow/field.hpp"
#include "quatflow/quaternion.hpp"

namespace qf_test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline quatflow::Quat random_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return {n(rng), n(rng), n(rng), n(rng)};
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double max_abs_diff(const quatflow::Quat& a, const quatflow::Quat& b) {
  double m = 0.0;
  for (int c = 0; c < 4; ++c) m = std::max(m, std::abs(a[c] - b[c]));
  return m;
}

// ||a - b|| / ||b|| in L2, either representation (both the same).
inline double rel_l2(const quatflow::QField& a, const quatflow::QField& b) {
  const double nb = std::sqrt(quatflow::l2_norm_sq(b));
  const double d = std::sqrt(quatflow::l2_norm_sq(a - b));
  return nb == 0.0 ? d : d / nb;
}

inline double max_abs(const quatflow::QField& f) {
  double m = 0.0;
  for (int c = 0; c < 4; ++c) {
    m = std::max(m, f.is_physical() ? f.real(c).abs().maxCoeff() : f.coeff(c).abs().maxCoeff());
  }
  return m;
}

}  // namespace qf_test
