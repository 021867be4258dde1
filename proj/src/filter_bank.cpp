#include "quatflow/filter_bank.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quatflow/errors.hpp"

namespace quatflow {

namespace lp_profile {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

double chi(double r) { return 1.0 - smooth_step((r - kInner) / (kChiEdge - kInner)); }

double phi(double r) { return chi(0.5 * r) - chi(r); }

}  // namespace lp_profile

FilterBank::FilterBank(const GridSpec& grid, int j_min, int j_max) : grid_(grid), j_min_(j_min), j_max_(j_max) {
  auto cache = std::make_shared<Cache>();
  cache->radius = xi_squared(grid).sqrt();
  cache->low = cache->radius.unaryExpr([j_min](double r) { return lp_profile::chi(std::ldexp(r, -j_min)); });
  for (int j = j_min; j <= j_max; ++j) {
    cache->bands.push_back(cache->radius.unaryExpr([j](double r) { return lp_profile::phi(std::ldexp(r, -j)); }));
  }
  cache_ = std::move(cache);
}

const Eigen::ArrayXd& FilterBank::band_multiplier(int j) const {
  if (j < j_min_ || j > j_max_) {
    throw RangeError("band " + std::to_string(j) + " outside [" + std::to_string(j_min_) + ", " +
                     std::to_string(j_max_) + "]");
  }
  return cache_->bands[static_cast<std::size_t>(j - j_min_)];
}

double FilterBank::covered_min() const { return std::ldexp(lp_profile::kChiEdge, j_min_); }
double FilterBank::covered_max() const { return std::ldexp(2.0 * lp_profile::kInner, j_max_); }

double FilterBank::partition_defect() const {
  const Eigen::ArrayXd& r = cache_->radius;
  double defect = 0.0;
  for (Index s = 0; s < r.size(); ++s) {
    if (r[s] < covered_min() || r[s] > covered_max()) continue;
    double sum = 0.0;
    for (const auto& band : cache_->bands) sum += band[s];
    defect = std::max(defect, std::abs(sum - 1.0));
  }
  return defect;
}

FrameBounds FilterBank::frame_bounds() const {
  Eigen::ArrayXd total = cache_->low.square();
  for (const auto& band : cache_->bands) total += band.square();
  return {total.minCoeff(), total.maxCoeff()};
}

FilterBank build_filter_bank(const GridSpec& grid, std::optional<int> j_min_override) {
  grid.validate();
  double xi_min = grid.xi(0, 1);
  double xi_max_sq = 0.0;
  for (int a = 0; a < grid.dim; ++a) {
    xi_min = std::min(xi_min, grid.xi(a, 1));
    const double top = grid.xi(a, grid.sizes[a] / 2);
    xi_max_sq += top * top;
  }
  // Small slack keeps modes that sit exactly on a threshold inside.
  const double slack = 1e-12;
  const int j_min_auto = static_cast<int>(std::floor(std::log2(xi_min / lp_profile::kChiEdge) + slack));
  const int j_max = static_cast<int>(std::ceil(std::log2(std::sqrt(xi_max_sq) / (2.0 * lp_profile::kInner)) - slack));
  const int j_min = j_min_override.value_or(j_min_auto);
  if (j_max - j_min + 1 < 2) {
    throw ConfigurationError("filter bank on grid " + grid.shape_string() + " with j_min = " + std::to_string(j_min) +
                             " and j_max = " + std::to_string(j_max) + " hosts fewer than 2 bands");
  }
  return FilterBank(grid, j_min, j_max);
}

QField project_band(const QField& f, const FilterBank& bank, int j) {
  const Eigen::ArrayXd& m = bank.band_multiplier(j);
  if (f.is_spectral()) return apply_multiplier(f, m);
  return inverse_transform(apply_multiplier(forward_transform(f), m));
}

QField project_low(const QField& f, const FilterBank& bank) {
  if (f.is_spectral()) return apply_multiplier(f, bank.low_multiplier());
  return inverse_transform(apply_multiplier(forward_transform(f), bank.low_multiplier()));
}

QField BandDecomposition::reconstruct() const {
  QField sum = low_block;
  for (const auto& [j, band] : bands) sum += band;
  return sum;
}

BandDecomposition decompose(const QField& f, const FilterBank& bank) {
  if (!(f.grid() == bank.grid())) {
    throw ParameterError("decompose: field grid " + f.grid().shape_string() + " does not match bank grid " +
                         bank.grid().shape_string());
  }
  const QField spec = to_representation(f, Representation::spectral);
  BandDecomposition out;
  out.source_grid = f.grid();
  out.low_block = to_representation(apply_multiplier(spec, bank.low_multiplier()), f.repr());
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
    out.bands.emplace(j, to_representation(apply_multiplier(spec, bank.band_multiplier(j)), f.repr()));
  }
  return out;
}

}  // namespace quatflow
