#include <doctest.h>

#include <cmath>

#include "quatflow/errors.hpp"
#include "quatflow/filter_bank.hpp"
#include "quatflow/presets.hpp"
#include "support.hpp"

using namespace quatflow;
using namespace qf_test;

namespace {

// Profiles rebuilt from the smooth step, independently of the library.
double step_ref(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}
double chi_ref(double r) { return 1.0 - step_ref((r - 0.75) / (4.0 / 3.0 - 0.75)); }
double phi_ref(double r) { return chi_ref(r / 2.0) - chi_ref(r); }

double band_sum(const FilterBank& bank, Index slot) {
  double s = 0.0;
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) s += bank.band_multiplier(j)[slot];
  return s;
}

}  // namespace

TEST_CASE("profile matches the smooth-step construction") {
  for (double r = 0.0; r <= 4.0; r += 0.01) CHECK(std::abs(lp_profile::phi(r) - phi_ref(r)) <= 1e-15);
  CHECK(lp_profile::phi(0.5) == 0.0);
  CHECK(lp_profile::phi(0.75) == 0.0);
  CHECK(lp_profile::phi(8.0 / 3.0) == 0.0);
  CHECK(lp_profile::phi(3.0) == 0.0);
  CHECK(lp_profile::phi(1.4) == 1.0);
  CHECK(lp_profile::phi(0.8) > 0.0);
  CHECK(lp_profile::phi(2.6) > 0.0);
  CHECK(lp_profile::chi(0.5) == 1.0);
  CHECK(lp_profile::chi(1.34) == 0.0);
}

TEST_CASE("partition of unity along a 64-point axis") {
  const GridSpec g = make_grid(2, 64, 1.0);
  const FilterBank bank = build_filter_bank(g);
  for (int k = 1; k <= 21; ++k) {
    const Index slot = g.slot({k, 0, 0});
    REQUIRE(bank.xi_magnitude()[slot] >= bank.covered_min());
    CHECK(std::abs(band_sum(bank, slot) - 1.0) <= 1e-12);
    // and against the profile evaluated directly
    double direct = 0.0;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) direct += phi_ref(std::ldexp(kTwoPi * k, -j));
    CHECK(std::abs(direct - 1.0) <= 1e-12);
  }
  CHECK(bank.partition_defect() <= 1e-12);
}

TEST_CASE("partition of unity over every covered mode") {
  for (const GridSpec& g : {make_grid(2, 64), make_grid(3, 32), make_grid(2, 64, kTwoPi), GridSpec{2, {32, 64, 1}, {1.0, 2.0, 1.0}}}) {
    const FilterBank bank = build_filter_bank(g);
    double worst = 0.0;
    int covered = 0;
    for (Index s = 0; s < g.points(); ++s) {
      const double r = bank.xi_magnitude()[s];
      if (r < bank.covered_min() || r > bank.covered_max()) continue;
      ++covered;
      worst = std::max(worst, std::abs(band_sum(bank, s) - 1.0));
    }
    CHECK(covered == g.points() - 1);  // everything but the mean
    CHECK(worst <= 1e-12);
    // low block plus bands is one everywhere
    for (Index s = 0; s < g.points(); ++s) CHECK(std::abs(bank.low_multiplier()[s] + band_sum(bank, s) - 1.0) <= 1e-12);
  }
}

TEST_CASE("band support stays in the annulus") {
  const GridSpec g = make_grid(2, 64);
  const FilterBank bank = build_filter_bank(g);
  const QField F = forward_transform(white_noise_field(g, 3));
  for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
    const QField b = project_band(F, bank, j);
    for (Index s = 0; s < g.points(); ++s) {
      const double r = std::ldexp(bank.xi_magnitude()[s], -j);
      if (r <= 0.75 || r >= 8.0 / 3.0) {
        for (int c = 0; c < 4; ++c) CHECK(b.coeff(c)[s] == std::complex<double>(0.0, 0.0));
      }
    }
  }
}

TEST_CASE("plateau mode lands in one band") {
  // xi = 1.4 * 2^2 sits on the plateau of band 2
  const double L = kTwoPi * 4.0 / 5.6;
  const GridSpec g = make_grid(2, 32, L);
  const FilterBank bank = build_filter_bank(g);
  const QField f = single_mode_field(g, {4, 0, 0}, 1);
  const BandDecomposition d = decompose(f, bank);
  const double total = l2_norm_sq(f);
  CHECK(l2_norm_sq(d.bands.at(2)) >= 0.99 * total);
  for (const auto& [j, b] : d.bands) {
    if (std::abs(j - 2) >= 2) CHECK(l2_norm_sq(b) <= 1e-28 * total);
  }
  CHECK(l2_norm_sq(d.low_block) <= 1e-28 * total);
}

TEST_CASE("constant field lives in the low block") {
  const GridSpec g = make_grid(3, 16);
  const FilterBank bank = build_filter_bank(g);
  const QField c = constant_field(g, Quat{1, 2, 3, 4});
  const BandDecomposition d = decompose(c, bank);
  for (const auto& [j, b] : d.bands) CHECK(max_abs(b) <= 1e-15);
  CHECK(rel_l2(d.low_block, c) <= 1e-14);
  CHECK(l2_norm_sq(decompose(QField(g, Representation::physical), bank).reconstruct()) == 0.0);
}

TEST_CASE("reconstruction is exact") {
  for (const GridSpec& g : {make_grid(2, 64), make_grid(3, 16, kTwoPi)}) {
    const FilterBank bank = build_filter_bank(g);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const QField f = white_noise_field(g, seed);
      const BandDecomposition d = decompose(f, bank);
      CHECK(f.is_physical());
      CHECK(d.low_block.is_physical());
      CHECK(rel_l2(d.reconstruct(), f) <= 1e-10);
      CHECK(rel_l2(decompose(forward_transform(f), bank).reconstruct(), forward_transform(f)) <= 1e-10);
    }
  }
}

TEST_CASE("band energies sit inside the frame bracket") {
  const GridSpec g = make_grid(2, 64);
  const FilterBank bank = build_filter_bank(g);
  const FrameBounds fb = bank.frame_bounds();
  // independent min/max of low^2 + sum phi^2
  double lo = 1e300, hi = 0.0;
  for (Index s = 0; s < g.points(); ++s) {
    double v = std::pow(bank.low_multiplier()[s], 2);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) v += std::pow(bank.band_multiplier(j)[s], 2);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(fb.lower == doctest::Approx(lo).epsilon(1e-14));
  CHECK(fb.upper == doctest::Approx(hi).epsilon(1e-14));
  CHECK(fb.lower >= 0.5);
  CHECK(fb.upper <= 1.0 + 1e-12);

  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const QField f = forward_transform(white_noise_field(g, seed));
    const BandDecomposition d = decompose(f, bank);
    double sum = l2_norm_sq(d.low_block);
    for (const auto& [j, b] : d.bands) sum += l2_norm_sq(b);
    const double total = l2_norm_sq(f);
    CHECK(sum >= fb.lower * total * (1 - 1e-12));
    CHECK(sum <= fb.upper * total * (1 + 1e-12));
  }
}

TEST_CASE("bank construction") {
  const FilterBank a = build_filter_bank(make_grid(2, 64, 1.0));
  CHECK(a.j_min() == 2);
  CHECK(a.j_max() == 8);
  const FilterBank b = build_filter_bank(make_grid(2, 64, kTwoPi));
  CHECK(b.j_min() == -1);
  CHECK(b.low_multiplier()[0] == 1.0);
  for (Index s = 1; s < b.grid().points(); ++s) CHECK(b.low_multiplier()[s] == 0.0);

  const FilterBank wide = build_filter_bank(make_grid(2, 64, kTwoPi), 2);
  CHECK(wide.j_min() == 2);
  CHECK(wide.low_multiplier()[make_grid(2, 64, kTwoPi).slot({2, 0, 0})] == 1.0);

  CHECK_THROWS_AS(build_filter_bank(make_grid(2, 8, kTwoPi), 2), ConfigurationError);
  CHECK_THROWS_AS(project_band(QField(a.grid(), Representation::spectral), a, a.j_max() + 1), RangeError);
  CHECK_THROWS_AS(project_band(QField(a.grid(), Representation::spectral), a, a.j_min() - 1), RangeError);
}
