#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "quatflow/field.hpp"

namespace quatflow {

/// Smooth radial profiles of the dyadic filter bank.
///
/// chi is C-infinity, equal to 1 on [0, 3/4] and 0 on [4/3, inf). The band
/// profile phi(r) = chi(r/2) - chi(r) is supported in [3/4, 8/3], and the
/// sum of phi(2^-j r) over j telescopes, so partition of unity holds by
/// construction.
namespace lp_profile {
inline constexpr double kInner = 3.0 / 4.0;
inline constexpr double kOuter = 8.0 / 3.0;
inline constexpr double kChiEdge = 4.0 / 3.0;

/// e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}) on (0, 1), clamped outside.
double smooth_step(double t);
double chi(double r);
double phi(double r);
}  // namespace lp_profile

/// Min and max over grid modes of low(k)^2 + sum_j phi_j(k)^2. These bound
/// the ratio between the summed band energies and the field energy.
struct FrameBounds {
  double lower = 1.0;
  double upper = 1.0;
};

/// Discrete Littlewood-Paley filter bank on a periodic grid, with frequency
/// xi = 2 pi k / L. Bands j_min..j_max carry phi(2^-j |xi|); the low block
/// carries chi(2^-j_min |xi|) and always holds the mean mode. Immutable; the
/// per-slot multipliers are computed once and shared between copies.
class FilterBank {
 public:
  FilterBank(const GridSpec& grid, int j_min, int j_max);

  const GridSpec& grid() const { return grid_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int band_count() const { return j_max_ - j_min_ + 1; }

  const Eigen::ArrayXd& band_multiplier(int j) const;
  const Eigen::ArrayXd& low_multiplier() const { return cache_->low; }
  const Eigen::ArrayXd& xi_magnitude() const { return cache_->radius; }

  /// Frequencies where the band sum alone (no low block) is exactly one.
  double covered_min() const;
  double covered_max() const;

  /// max |sum_j phi(2^-j |xi|) - 1| over grid modes with covered_min <= |xi| <= covered_max.
  double partition_defect() const;

  FrameBounds frame_bounds() const;

 private:
  struct Cache {
    Eigen::ArrayXd radius;
    Eigen::ArrayXd low;
    std::vector<Eigen::ArrayXd> bands;
  };

  GridSpec grid_;
  int j_min_;
  int j_max_;
  std::shared_ptr<const Cache> cache_;
};

/// Chooses j_min so every nonzero grid frequency lies at or above
/// 2^j_min * 4/3 (the low block then holds only the mean), and j_max so every
/// grid frequency lies at or below 2^j_max * 3/2 (reconstruction is exact).
/// `j_min_override` trades low bands for a wider low block. Throws
/// ConfigurationError when fewer than 2 bands remain.
FilterBank build_filter_bank(const GridSpec& grid, std::optional<int> j_min_override = std::nullopt);

/// Delta_j f. Output has the representation of the input. Throws RangeError
/// for j outside [j_min, j_max].
QField project_band(const QField& f, const FilterBank& bank, int j);

/// Low-frequency remainder chi(2^-j_min |xi|) applied to f.
QField project_low(const QField& f, const FilterBank& bank);

struct BandDecomposition {
  std::map<int, QField> bands;
  QField low_block;
  GridSpec source_grid;

  /// low_block + sum_j bands[j].
  QField reconstruct() const;
};

/// All bands plus the low block, each in the representation of `f`.
BandDecomposition decompose(const QField& f, const FilterBank& bank);

}  // namespace quatflow
