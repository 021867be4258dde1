#include <doctest.h>

#include <cmath>

#include "quatflow/errors.hpp"
#include "quatflow/filter_bank.hpp"
#include "quatflow/presets.hpp"
#include "quatflow/simulation.hpp"
#include "quatflow/solver.hpp"
#include "support.hpp"

using namespace quatflow;
using namespace qf_test;

namespace {

SimConfig base_config(int n = 32, double L = kTwoPi) {
  SimConfig cfg;
  cfg.grid = make_grid(2, n, L);
  cfg.nu = 0.1;
  cfg.dt = 1e-2;
  cfg.t_end = 0.1;
  return cfg;
}

}  // namespace

TEST_CASE("heat semigroup") {
  const GridSpec g = make_grid(2, 32, 3.0);
  const QField F = forward_transform(white_noise_field(g, 1));
  CHECK(max_abs(heat_semigroup(F, 0.0, 0.3) - F) == 0.0);
  CHECK_THROWS_AS(heat_semigroup(F, -1e-3, 0.3), ParameterError);
  CHECK_THROWS_AS(heat_semigroup(forward_transform(white_noise_field(g, 1)), 0.1, 0.0), ParameterError);

  const double nu = 0.3, t = 0.05;
  const QField H = heat_semigroup(F, t, nu);
  double worst = 0.0;
  for_each_mode(g, [&](Index s, const IntVec& k) {
    const double kx = kTwoPi * k[0] / 3.0, ky = kTwoPi * k[1] / 3.0;
    const double factor = std::exp(-nu * t * (kx * kx + ky * ky));
    for (int c = 0; c < 4; ++c) worst = std::max(worst, std::abs(H.coeff(c)[s] - factor * F.coeff(c)[s]));
  });
  CHECK(worst <= 1e-14);

  const QField two = heat_semigroup(heat_semigroup(F, 0.02, nu), 0.03, nu);
  CHECK(max_abs(two - heat_semigroup(F, 0.05, nu)) <= 1e-13 * max_abs(F));

  const FilterBank bank = build_filter_bank(g);
  const BandDecomposition before = decompose(F, bank), after = decompose(H, bank);
  for (const auto& [j, b] : before.bands) CHECK(l2_norm_sq(after.bands.at(j)) <= l2_norm_sq(b));
}

TEST_CASE("Taylor-Green advection term") {
  const GridSpec g = make_grid(2, 32, kTwoPi);
  const QField tg = forward_transform(taylor_green_2d(g, 1.0));
  const QField N = inverse_transform(nonlinear_term(tg, NonlinearityMode::advective));
  // -(u . grad) u = -(sin 2x / 2, sin 2y / 2)
  double worst = 0.0;
  for_each_point(g, [&](Index s, const auto& x) {
    worst = std::max(worst, std::abs(N.real(1)[s] + 0.5 * std::sin(2 * x[0])));
    worst = std::max(worst, std::abs(N.real(2)[s] + 0.5 * std::sin(2 * x[1])));
    worst = std::max(worst, std::abs(N.real(0)[s]) + std::abs(N.real(3)[s]));
  });
  CHECK(worst <= 1e-13);
  CHECK(max_abs(leray_project(nonlinear_term(tg, NonlinearityMode::advective))) <= 1e-13);
}

TEST_CASE("nonlinear term is quadratic in both modes") {
  const GridSpec g = make_grid(3, 16, kTwoPi);
  const QField q = forward_transform(random_field(g, 2, {.scalar_part = true}));
  CHECK(max_abs(nonlinear_term(QField(g, Representation::spectral), NonlinearityMode::advective)) == 0.0);
  for (NonlinearityMode mode : {NonlinearityMode::advective, NonlinearityMode::hamilton}) {
    const QField n1 = nonlinear_term(q, mode);
    const QField n2 = nonlinear_term(2.0 * q, mode);
    CHECK(max_abs(n2 - 4.0 * n1) <= 1e-12 * max_abs(n2));
    CHECK(hermitian_defect(n1) <= 1e-13);
  }
  // with no scalar part the readings coincide
  const QField v = forward_transform(random_field(g, 3));
  CHECK(max_abs(nonlinear_term(v, NonlinearityMode::hamilton) - nonlinear_term(v, NonlinearityMode::advective)) <=
        1e-13 * max_abs(nonlinear_term(v, NonlinearityMode::advective)));
  CHECK(max_abs(nonlinear_term(q, NonlinearityMode::hamilton) - nonlinear_term(q, NonlinearityMode::advective)) > 1e-3);
}

TEST_CASE("forcing") {
  const GridSpec g = make_grid(2, 32, kTwoPi);
  ForcingSpec none;
  CHECK(max_abs(forcing_eval(none, 1.0, g)) == 0.0);

  ForcingSpec steady{ForcingKind::steady_low_mode, 0.5, {1, 2, 0}, 0.0};
  const QField f0 = forcing_eval(steady, 0.0, g), f5 = forcing_eval(steady, 5.0, g);
  CHECK(max_abs(f0 - f5) == 0.0);
  CHECK(max_divergence(f0) <= 1e-15);
  // amplitude * cos with a unit direction: ||f||^2 = A^2 V / 2
  CHECK(rel_diff(l2_norm_sq(f0), 0.25 * g.volume() / 2.0) <= 1e-14);
  CHECK(hermitian_defect(f0) == 0.0);

  ForcingSpec decaying{ForcingKind::time_decaying_low_mode, 2.0, {0, 3, 0}, 0.7};
  const double n1 = std::sqrt(l2_norm_sq(forcing_eval(decaying, 0.4, g)));
  const double n2 = std::sqrt(l2_norm_sq(forcing_eval(decaying, 1.9, g)));
  CHECK(std::abs(n2 / n1 - std::exp(-0.7 * 1.5)) <= 1e-12);

  CHECK_THROWS_AS(forcing_eval({ForcingKind::steady_low_mode, 1.0, {11, 0, 0}, 0.0}, 0.0, g), ConfigurationError);
  CHECK_THROWS_AS(forcing_eval({ForcingKind::steady_low_mode, 1.0, {0, 0, 0}, 0.0}, 0.0, g), ConfigurationError);
}

TEST_CASE("stepping") {
  SimConfig cfg = base_config();
  SolverState zero{0.0, QField(cfg.grid, Representation::spectral), 0};
  for (int n = 0; n < 5; ++n) zero = step(zero, cfg);
  CHECK(max_abs(zero.q_hat) == 0.0);
  CHECK(zero.step_index == 5);
  CHECK(zero.t == doctest::Approx(0.05));

  // heat only: exact decay of a single mode
  cfg.nonlinear = false;
  const QField mode = forward_transform(single_mode_field(cfg.grid, {2, 3, 0}, 0, 1.3));
  SolverState s{0.0, mode, 0};
  for (int n = 0; n < 10; ++n) s = step(s, cfg);
  CHECK(max_abs(s.q_hat - std::exp(-cfg.nu * s.t * 13.0) * mode) <= 1e-12);

  // nonlinear: divergence stays down and energy never grows
  cfg.nonlinear = true;
  cfg.dt = 5e-3;
  SolverState r{0.0, prepare_initial(random_field(cfg.grid, 4, {.rms = 2.0}), cfg), 0};
  double e = l2_norm_sq(r.q_hat);
  for (int n = 0; n < 40; ++n) {
    r = step(r, cfg);
    CHECK(max_divergence(r.q_hat) <= 1e-10);
    const double en = l2_norm_sq(r.q_hat);
    CHECK(en <= e);
    e = en;
  }
}

TEST_CASE("blow-up is reported, not hidden") {
  SimConfig cfg = base_config();
  cfg.nu = 1e-4;
  cfg.dt = 0.05;
  cfg.t_end = 5.0;
  cfg.diag_every = 1;
  const SimulationResult res = simulate(cfg, random_field(cfg.grid, 9, {.rms = 1e4}));
  CHECK(res.blow_up);
  CHECK(res.blow_up_step > 0);
  REQUIRE(!res.records.empty());
  CHECK(res.records.back().blow_up);
  CHECK(std::isfinite(res.records.back().besov_norm));
  CHECK(std::isfinite(res.last_finite_besov));

  SolverState bad{0.0, forward_transform(random_field(cfg.grid, 9)), 3};
  bad.q_hat.coeff(1)[5] = std::complex<double>(std::nan(""), 0.0);
  try {
    step(bad, cfg);
    CHECK(false);
  } catch (const BlowUpError& e) {
    CHECK(e.step_index() == 4);
  }
}

TEST_CASE("simulate") {
  SimConfig cfg = base_config(32);
  cfg.t_end = 0.0;
  std::vector<DiagnosticsRecord> seen;
  SimulationResult r0 = simulate(cfg, taylor_green_2d(cfg.grid), [&](const DiagnosticsRecord& r) { seen.push_back(r); });
  CHECK(r0.records.size() == 1);
  CHECK(seen.size() == 1);
  CHECK(r0.records[0].t == 0.0);

  cfg.t_end = 0.2;
  cfg.dt = 1e-2;
  cfg.diag_every = 3;
  const SimulationResult tg = simulate(cfg, taylor_green_2d(cfg.grid));
  CHECK_FALSE(tg.blow_up);
  CHECK(tg.final_state.t == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(tg.final_state.step_index == 20);
  // records at 0, 3, ..., 18 and the final step
  REQUIRE(tg.records.size() == 8);
  CHECK(tg.records.back().step_index == 20);
  for (std::size_t i = 1; i < tg.records.size(); ++i) CHECK(tg.records[i].total_energy < tg.records[i - 1].total_energy);

  // a t_end that is not a multiple of dt ends exactly at t_end
  cfg.t_end = 0.105;
  CHECK(simulate(cfg, taylor_green_2d(cfg.grid)).final_state.t == doctest::Approx(0.105).epsilon(1e-14));

  const Preset forced = make_preset("forced-low-mode");
  const SimulationResult fr = simulate(forced.config, forced.initial);
  CHECK_FALSE(fr.blow_up);
  double peak = 0.0;
  for (const auto& r : fr.records) peak = std::max(peak, r.besov_norm);
  CHECK(std::isfinite(peak));
  CHECK(peak < 1.0);
}

TEST_CASE("energy-balance residual is second order") {
  double prev = 0.0;
  for (double dt : {0.02, 0.01, 0.005}) {
    SimConfig cfg = base_config(32);
    cfg.dt = dt;
    cfg.t_end = 0.2;
    cfg.nu = 0.05;
    SolverState s{0.0, prepare_initial(taylor_green_2d(cfg.grid), cfg), 0};
    double worst = 0.0;
    while (s.step_index < std::lround(cfg.t_end / dt)) {
      SolverState n = step(s, cfg);
      worst = std::max(worst, energy_balance_residual(s, n, cfg));
      s = std::move(n);
    }
    if (prev > 0.0) {
      const double order = std::log2(prev / worst);
      CHECK(order >= 1.8);
      CHECK(order <= 2.2);
    }
    prev = worst;
  }
}

TEST_CASE("Picard iteration") {
  SimConfig cfg = base_config(16);
  cfg.t_end = 0.1;
  cfg.dt = 1e-2;
  const PicardReport z = picard_iterate(cfg, QField(cfg.grid, Representation::physical), 10, 1e-8);
  CHECK(z.converged);
  CHECK(z.iterations == 1);

  const PicardReport small = picard_iterate(cfg, taylor_green_2d(cfg.grid, 1e-2), 10, 1e-8);
  CHECK(small.converged);
  CHECK(small.contraction_factor < 1.0);
  CHECK(small.iterations <= 10);

  const PicardReport mixed = picard_iterate(cfg, random_field(cfg.grid, 5, {.rms = 1e-2}), 10, 1e-8);
  CHECK(mixed.converged);
  CHECK(mixed.contraction_factor < 1.0);

  const PicardReport large = picard_iterate(cfg, random_field(cfg.grid, 5, {.rms = 1e3}), 10, 1e-8);
  CHECK_FALSE(large.converged);
  CHECK(large.non_contraction);
}
