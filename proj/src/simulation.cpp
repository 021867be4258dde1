#include "quatflow/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "quatflow/errors.hpp"

namespace quatflow {

namespace {

long step_count(const SimConfig& cfg) {
  if (cfg.t_end <= 0.0) return 0;
  return static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
}

double step_time(const SimConfig& cfg, long n, long total) {
  return n == total ? cfg.t_end : std::min(cfg.t_end, static_cast<double>(n) * cfg.dt);
}

}  // namespace

SimulationResult simulate(const SimConfig& cfg, const QField& q0, const RecordSink& sink, const StateSink& on_step) {
  cfg.validate();
  DiagnosticsRecorder recorder(cfg, build_filter_bank(cfg.grid));
  SimulationResult result;
  auto emit = [&](DiagnosticsRecord r) {
    if (sink) sink(r);
    result.records.push_back(std::move(r));
  };

  SolverState state{0.0, prepare_initial(q0, cfg), 0};
  if (on_step) on_step(state);
  emit(recorder.record(state, nullptr));

  double reference_energy = 0.5 * l2_norm_sq(state.q_hat);
  const long total = step_count(cfg);
  for (long n = 1; n <= total; ++n) {
    const double t_next = step_time(cfg, n, total);
    SolverState next;
    std::string reason;
    try {
      next = step(state, cfg, t_next - state.t);
      next.t = t_next;
    } catch (const BlowUpError& e) {
      reason = e.what();
      result.last_finite_besov = e.last_finite_norm();
    }

    if (reason.empty()) {
      const double energy = 0.5 * l2_norm_sq(next.q_hat);
      if (reference_energy == 0.0) reference_energy = energy;
      if (energy > kBlowUpEnergyFactor * reference_energy) {
        reason = "energy " + std::to_string(energy) + " exceeds blow-up threshold at step " + std::to_string(n);
      }
    }

    if (!reason.empty()) {
      // Diagnostics of the failing step come from the last finite state.
      const bool finite = next.q_hat.size() > 0 && next.q_hat.all_finite();
      DiagnosticsRecord r = recorder.record(finite ? next : state, nullptr);
      r.t = t_next;
      r.step_index = n;
      r.blow_up = true;
      if (finite) result.last_finite_besov = r.besov_norm;
      result.blow_up = true;
      result.blow_up_step = n;
      result.blow_up_reason = reason;
      emit(std::move(r));
      result.final_state = finite ? std::move(next) : std::move(state);
      return result;
    }

    if (on_step) on_step(next);
    if (n % cfg.diag_every == 0 || n == total) emit(recorder.record(next, &state));
    state = std::move(next);
  }
  result.last_finite_besov = result.records.back().besov_norm;
  result.final_state = std::move(state);
  return result;
}

PicardReport picard_iterate(const SimConfig& cfg, const QField& q0, int max_iter, double tol) {
  cfg.validate();
  if (max_iter < 1) throw ParameterError("picard_iterate: max_iter must be >= 1");
  const FilterBank bank = build_filter_bank(cfg.grid);
  const long total = step_count(cfg);
  std::vector<double> times(static_cast<std::size_t>(total + 1), 0.0);
  for (long n = 1; n <= total; ++n) times[static_cast<std::size_t>(n)] = step_time(cfg, n, total);

  const QField start = prepare_initial(q0, cfg);
  std::vector<QField> current(times.size(), start);
  PicardReport report;
  int growth_streak = 0;

  for (int m = 1; m <= max_iter; ++m) {
    std::vector<QField> next;
    next.reserve(times.size());
    next.push_back(start);
    QField g_prev = duhamel_integrand(current[0], times[0], cfg);
    for (std::size_t n = 1; n < times.size(); ++n) {
      const double h = times[n] - times[n - 1];
      QField g = duhamel_integrand(current[n], times[n], cfg);
      QField q = heat_semigroup(next.back() + (0.5 * h) * g_prev, h, cfg.nu) + (0.5 * h) * g;
      next.push_back(leray_project(q));
      g_prev = std::move(g);
    }

    double distance = 0.0;
    for (std::size_t n = 0; n < times.size(); ++n) {
      const QField diff = next[n] - current[n];
      const double d = diff.all_finite() ? besov_norm(diff, bank, cfg.besov) : kInfinity;
      distance = std::max(distance, std::isnan(d) ? kInfinity : d);
    }
    report.iterations = m;
    report.distances.push_back(distance);
    current = std::move(next);

    if (!std::isfinite(distance)) {
      report.non_contraction = true;
      report.contraction_factor = kInfinity;
      report.reason = "iterate lost finiteness at iteration " + std::to_string(m);
      return report;
    }
    if (m >= 2) {
      const double previous = report.distances[static_cast<std::size_t>(m - 2)];
      const double ratio = previous > 0.0 ? distance / previous : 0.0;
      report.contraction_factor = std::max(report.contraction_factor, ratio);
      growth_streak = distance > previous ? growth_streak + 1 : 0;
    }
    if (distance < tol) {
      report.converged = true;
      report.reason = "converged";
      return report;
    }
    if (growth_streak >= 3) {
      report.non_contraction = true;
      report.reason = "distance grew for 3 consecutive iterations";
      return report;
    }
  }
  report.non_contraction = report.contraction_factor >= 1.0;
  report.reason = report.non_contraction ? "contraction factor >= 1" : "max_iter reached";
  return report;
}

}  // namespace quatflow
