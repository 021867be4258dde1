#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "quatflow/grid.hpp"
#include "quatflow/quaternion.hpp"

namespace quatflow {

enum class Representation : std::uint8_t { physical = 0, spectral = 1 };

const char* to_string(Representation r);

/// Quaternion-valued field on a periodic grid.
///
/// In the physical representation each of the four components (w, x, y, z)
/// holds real samples; in the spectral representation each holds complex
/// Fourier-series coefficients c_k with f(x) = sum_k c_k exp(i xi_k . x), so a
/// unit cosine has coefficients 1/2 at +k and -k.
class QField {
 public:
  static constexpr int kComponents = 4;

  QField() = default;
  QField(const GridSpec& grid, Representation repr);

  static QField zeros(const GridSpec& grid, Representation repr) { return QField(grid, repr); }

  const GridSpec& grid() const { return grid_; }
  Representation repr() const { return repr_; }
  bool is_physical() const { return repr_ == Representation::physical; }
  bool is_spectral() const { return repr_ == Representation::spectral; }
  Index size() const { return grid_.points(); }

  Eigen::ArrayXd& real(int c);
  const Eigen::ArrayXd& real(int c) const;
  Eigen::ArrayXcd& coeff(int c);
  const Eigen::ArrayXcd& coeff(int c) const;

  Quat at(Index slot) const;
  void set(Index slot, const Quat& q);

  /// Throws RepresentationError unless the field is in `expected`.
  void require(Representation expected, const char* op) const;

  QField& operator+=(const QField& o);
  QField& operator-=(const QField& o);
  QField& operator*=(double s);

  bool all_finite() const;

 private:
  void require_compatible(const QField& o) const;

  GridSpec grid_{};
  Representation repr_ = Representation::physical;
  std::array<Eigen::ArrayXd, kComponents> real_;
  std::array<Eigen::ArrayXcd, kComponents> coeff_;
};

inline QField operator+(QField a, const QField& b) { return a += b; }
inline QField operator-(QField a, const QField& b) { return a -= b; }
inline QField operator*(double s, QField a) { return a *= s; }
inline QField operator*(QField a, double s) { return a *= s; }

/// Storage component holding velocity axis `axis` (the imaginary parts x, y, z).
constexpr int velocity_component(int axis) { return axis + 1; }

QField forward_transform(const QField& f);

/// Throws SymmetryError when coefficients deviate from Hermitian symmetry by
/// more than 1e-10 (relative to max(1, largest coefficient)).
QField inverse_transform(const QField& f);

/// Returns f in `repr`, transforming if needed.
QField to_representation(const QField& f, Representation repr);

/// Largest |c(-k) - conj(c(k))| over all components and modes.
double hermitian_defect(const QField& f);

/// d/dx_m for m = 0..dim-1, as multiplication by i 2 pi k_m / L_m with the
/// Nyquist slot zeroed.
std::vector<QField> gradient(const QField& f);

/// Removes the gradient part of the advecting velocity (components x..,
/// one per axis): u <- u - kappa (kappa . u) / |kappa|^2, with kappa the
/// derivative wavenumber. Other components pass through.
QField leray_project(const QField& f);

/// Two-thirds rule: zero every mode with some |k_m| > floor(N_m / 3).
QField dealias(const QField& f);

/// max_k |kappa . u(k)| over the advecting velocity.
double max_divergence(const QField& f);

/// Multiplies every spectral component by a real per-slot multiplier.
QField apply_multiplier(const QField& f, const Eigen::ArrayXd& multiplier);

/// Squared L2 norm over the torus (all four components). Either representation.
double l2_norm_sq(const QField& f);

/// Squared L2 norm of one component.
double component_l2_norm_sq(const QField& f, int c);

/// L2 inner product summed over components. Both fields in the same representation.
double inner_product(const QField& a, const QField& b);

/// sum_m ||d_m f||^2 using the symmetric multiplier |xi|^2 (the Nyquist slot
/// counts with its full magnitude). Spectral input.
double gradient_norm_sq(const QField& f);
double component_gradient_norm_sq(const QField& f, int c);

/// Pointwise Hamilton product a(x) b(x); physical inputs, physical output.
QField hamilton_product(const QField& a, const QField& b);

/// Constant field with value q everywhere.
QField constant_field(const GridSpec& grid, const Quat& q);

}  // namespace quatflow
