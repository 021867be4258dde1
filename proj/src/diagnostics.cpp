#include "quatflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "quatflow/errors.hpp"

namespace quatflow {

double BandValues::total() const {
  double sum = low;
  for (const auto& [j, v] : bands) sum += v;
  return sum;
}

namespace {

double energy_of(const QField& f, int component) {
  return 0.5 * (component < 0 ? l2_norm_sq(f) : component_l2_norm_sq(f, component));
}

double dissipation_of(const QField& f, double nu, int component) {
  const QField spec = to_representation(f, Representation::spectral);
  return nu * (component < 0 ? gradient_norm_sq(spec) : component_gradient_norm_sq(spec, component));
}

}  // namespace

BandValues band_energy(const BandDecomposition& decomp, int component) {
  BandValues out;
  out.low = energy_of(decomp.low_block, component);
  for (const auto& [j, band] : decomp.bands) out.bands[j] = energy_of(band, component);
  return out;
}

BandValues dissipation_rate(const BandDecomposition& decomp, double nu, int component) {
  if (!(nu > 0.0)) throw ParameterError("dissipation_rate: nu must be > 0");
  BandValues out;
  out.low = dissipation_of(decomp.low_block, nu, component);
  for (const auto& [j, band] : decomp.bands) out.bands[j] = dissipation_of(band, nu, component);
  return out;
}

std::array<double, 4> besov_weighted_energy(const BandDecomposition& decomp, int j_min, double s) {
  std::array<double, 4> out{};
  for (int c = 0; c < QField::kComponents; ++c) {
    double sum = std::exp2(j_min * s) * component_l2_norm_sq(decomp.low_block, c);
    for (const auto& [j, band] : decomp.bands) sum += std::exp2(j * s) * component_l2_norm_sq(band, c);
    out[static_cast<std::size_t>(c)] = sum;
  }
  return out;
}

ScalingFit dissipation_scaling_fit(const std::vector<DiagnosticsRecord>& records, double nu) {
  if (!(nu > 0.0)) throw ParameterError("dissipation_scaling_fit: nu must be > 0");
  std::vector<std::pair<double, double>> points;
  std::map<int, BandBracket> worst;
  std::set<int> usable;
  for (const DiagnosticsRecord& r : records) {
    if (r.blow_up) continue;
    const double total = r.band_energy.total();
    for (const auto& [j, e] : r.band_energy.bands) {
      if (!(e > 1e-12 * total)) continue;
      const auto it = r.band_dissipation.bands.find(j);
      if (it == r.band_dissipation.bands.end()) continue;
      const double ratio = it->second / (2.0 * nu * e);
      if (!(ratio > 0.0) || !std::isfinite(ratio)) continue;
      BandBracket b;
      b.j = j;
      b.ratio = ratio;
      b.lower = std::pow(lp_profile::kInner, 2) * std::exp2(2.0 * j);
      b.upper = std::pow(lp_profile::kOuter, 2) * std::exp2(2.0 * j);
      // Relative slack for rounding on modes that sit on the annulus edge.
      b.inside = ratio >= b.lower * (1.0 - 1e-12) && ratio <= b.upper * (1.0 + 1e-12);
      auto [pos, fresh] = worst.emplace(j, b);
      if (!fresh && pos->second.inside && !b.inside) pos->second = b;
      points.emplace_back(static_cast<double>(j), std::log2(ratio));
      usable.insert(j);
    }
  }
  if (usable.size() < 3) {
    throw InsufficientDataError("dissipation scaling fit needs at least 3 bands with energy, found " +
                                std::to_string(usable.size()));
  }
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  ScalingFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (const auto& [x, y] : points) {
    const double e = y - (fit.intercept + fit.slope * x);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  fit.all_inside = true;
  for (const auto& [j, b] : worst) {
    fit.bands.push_back(b);
    fit.all_inside = fit.all_inside && b.inside;
  }
  fit.usable_bands = static_cast<int>(usable.size());
  fit.slope_in_range = fit.slope >= kSlopeLow && fit.slope <= kSlopeHigh;
  return fit;
}

GronwallReport gronwall_monitor(const std::vector<DiagnosticsRecord>& records) {
  GronwallReport report;
  std::vector<const DiagnosticsRecord*> used;
  for (const DiagnosticsRecord& r : records) {
    if (r.blow_up || !std::isfinite(r.gronwall_lhs)) {
      report.censored = true;
      break;
    }
    used.push_back(&r);
  }
  report.records_used = static_cast<int>(used.size());
  if (used.empty()) {
    report.lhs_identically_zero = true;
    return report;
  }

  const std::size_t n = used.size();
  const double a0 = used.front()->gronwall_rhs_terms.initial_norm;
  std::vector<double> lhs(n), forcing(n, 0.0), exponent(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    lhs[i] = used[i]->gronwall_lhs;
    if (i > 0) {
      const double h = used[i]->t - used[i - 1]->t;
      forcing[i] = forcing[i - 1] +
                   0.5 * h * (used[i]->gronwall_rhs_terms.forcing_norm + used[i - 1]->gronwall_rhs_terms.forcing_norm);
      exponent[i] = exponent[i - 1] + 0.5 * h * (lhs[i] + lhs[i - 1]);
    }
  }

  if (std::all_of(lhs.begin(), lhs.end(), [](double v) { return v == 0.0; })) {
    report.lhs_identically_zero = true;
    return report;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (lhs[i] > 0.0 && a0 + forcing[i] == 0.0) {
      report.unbounded = true;
      report.min_c = kInfinity;
      report.contact_time = used[i]->t;
      return report;
    }
  }

  auto rhs = [&](double c, std::size_t i) { return c * (a0 + forcing[i]) * std::exp(c * exponent[i]); };
  auto feasible = [&](double c) {
    for (std::size_t i = 0; i < n; ++i) {
      if (lhs[i] > rhs(c, i)) return false;
    }
    return true;
  };

  double lo = 0.0, hi = 1.0;
  while (!feasible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) {
      report.unbounded = true;
      report.min_c = kInfinity;
      return report;
    }
  }
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) hi = mid;
    else lo = mid;
  }
  report.min_c = hi;

  double tightest = kInfinity;
  for (std::size_t i = 0; i < n; ++i) {
    if (lhs[i] <= 0.0) continue;
    const double slack = rhs(hi, i) / lhs[i];
    if (slack < tightest) {
      tightest = slack;
      report.contact_time = used[i]->t;
    }
  }
  return report;
}

double energy_balance_residual(const SolverState& prev, const SolverState& next, const SimConfig& cfg) {
  const double dt = next.t - prev.t;
  if (dt <= 0.0) return 0.0;
  const double de = 0.5 * (l2_norm_sq(next.q_hat) - l2_norm_sq(prev.q_hat));
  const double dissipation = 0.5 * cfg.nu * (gradient_norm_sq(prev.q_hat) + gradient_norm_sq(next.q_hat));
  double work = 0.0;
  if (cfg.forcing.kind != ForcingKind::none) {
    work = 0.5 * (inner_product(forcing_eval(cfg.forcing, prev.t, cfg.grid), prev.q_hat) +
                  inner_product(forcing_eval(cfg.forcing, next.t, cfg.grid), next.q_hat));
  }
  return std::abs(de / dt + dissipation - work);
}

DiagnosticsRecorder::DiagnosticsRecorder(const SimConfig& cfg, FilterBank bank) : cfg_(cfg), bank_(std::move(bank)) {}

DiagnosticsRecord DiagnosticsRecorder::record(const SolverState& state, const SolverState* prev) {
  const QField spec = to_representation(state.q_hat, Representation::spectral);
  const BandDecomposition decomp = decompose(spec, bank_);

  DiagnosticsRecord r;
  r.t = state.t;
  r.step_index = state.step_index;
  r.total_energy = 0.5 * l2_norm_sq(spec);
  r.band_energy = band_energy(decomp);
  r.band_dissipation = dissipation_rate(decomp, cfg_.nu);
  r.besov_weighted_energy = besov_weighted_energy(decomp, bank_.j_min(), cfg_.besov.s);
  r.besov_norm = cfg_.besov.p == 2.0 ? besov_breakdown(decomp, bank_.j_min(), cfg_.besov).norm
                                     : besov_norm(spec, bank_, cfg_.besov);
  r.gronwall_lhs = r.besov_norm;

  double f_norm = 0.0;
  if (cfg_.forcing.kind != ForcingKind::none) {
    f_norm = besov_norm(forcing_eval(cfg_.forcing, state.t, cfg_.grid), bank_, cfg_.besov);
  }
  if (!initial_norm_) {
    initial_norm_ = r.besov_norm;
  } else {
    const double h = state.t - last_t_;
    forcing_integral_ += 0.5 * h * (f_norm + last_f_norm_);
    exponent_integral_ += 0.5 * h * (r.besov_norm + last_q_norm_);
    forcing_lr_integral_ += 0.5 * h * (std::pow(f_norm, cfg_.r_exponent) + std::pow(last_f_norm_, cfg_.r_exponent));
  }
  last_t_ = state.t;
  last_q_norm_ = r.besov_norm;
  last_f_norm_ = f_norm;

  r.gronwall_rhs_terms = {*initial_norm_, forcing_integral_, exponent_integral_, f_norm, forcing_lr_integral_};
  r.energy_balance_residual = prev != nullptr ? energy_balance_residual(*prev, state, cfg_) : 0.0;
  return r;
}

}  // namespace quatflow
