#include "quatflow/besov.hpp"

#include <cmath>
#include <string>

#include "quatflow/errors.hpp"

namespace quatflow {

void BesovParams::validate() const {
  if (!(p >= 1.0)) throw ParameterError("Besov integrability index p must be >= 1, got " + std::to_string(p));
  if (!(q_idx >= 1.0)) {
    throw ParameterError("Besov summability index q_idx must be >= 1, got " + std::to_string(q_idx));
  }
  if (!std::isfinite(s)) throw ParameterError("Besov smoothness s must be finite");
}

namespace {

void check_p(double p) {
  if (!(p >= 1.0)) throw ParameterError("L^p exponent must be >= 1, got " + std::to_string(p));
}

double quadrature(const Eigen::ArrayXd& magnitude, double p, double cell) {
  if (magnitude.size() == 0) return 0.0;
  if (std::isinf(p)) return magnitude.maxCoeff();
  if (p == 2.0) return std::sqrt(magnitude.square().sum() * cell);
  if (p == 1.0) return magnitude.sum() * cell;
  // Scale by the maximum so large p does not overflow.
  const double peak = magnitude.maxCoeff();
  if (peak == 0.0) return 0.0;
  return peak * std::pow((magnitude / peak).pow(p).sum() * cell, 1.0 / p);
}

Eigen::ArrayXd pointwise_magnitude(const QField& f) {
  Eigen::ArrayXd sq = f.real(0).square();
  for (int c = 1; c < QField::kComponents; ++c) sq += f.real(c).square();
  return sq.sqrt();
}

double lq_sum(const BesovBreakdown& b, double q) {
  if (std::isinf(q)) {
    double m = b.low_term;
    for (const auto& [j, t] : b.band_terms) m = std::max(m, t);
    return m;
  }
  double peak = b.low_term;
  for (const auto& [j, t] : b.band_terms) peak = std::max(peak, t);
  if (peak == 0.0) return 0.0;
  double sum = std::pow(b.low_term / peak, q);
  for (const auto& [j, t] : b.band_terms) sum += std::pow(t / peak, q);
  return peak * std::pow(sum, 1.0 / q);
}

}  // namespace

double lp_norm(const QField& f, double p) {
  check_p(p);
  if (f.is_spectral() && p == 2.0) return std::sqrt(l2_norm_sq(f));
  const QField phys = to_representation(f, Representation::physical);
  return quadrature(pointwise_magnitude(phys), p, phys.grid().cell_volume());
}

double component_lp_norm(const QField& f, int c, double p) {
  check_p(p);
  if (f.is_spectral() && p == 2.0) return std::sqrt(component_l2_norm_sq(f, c));
  const QField phys = to_representation(f, Representation::physical);
  return quadrature(phys.real(c).abs(), p, phys.grid().cell_volume());
}

BesovBreakdown besov_breakdown(const BandDecomposition& decomp, int j_min, const BesovParams& params, int component) {
  params.validate();
  auto norm = [&](const QField& g) {
    return component < 0 ? lp_norm(g, params.p) : component_lp_norm(g, component, params.p);
  };
  BesovBreakdown out;
  out.low_term = std::exp2(j_min * params.s) * norm(decomp.low_block);
  for (const auto& [j, band] : decomp.bands) {
    out.band_terms.emplace_back(j, std::exp2(j * params.s) * norm(band));
  }
  out.norm = lq_sum(out, params.q_idx);
  return out;
}

BesovBreakdown besov_breakdown(const QField& f, const FilterBank& bank, const BesovParams& params, int component) {
  params.validate();
  // p = 2 is evaluated spectrally; other p need the bands on the grid.
  const Representation work = params.p == 2.0 ? Representation::spectral : Representation::physical;
  const BandDecomposition decomp = decompose(to_representation(f, Representation::spectral), bank);
  if (work == Representation::spectral) return besov_breakdown(decomp, bank.j_min(), params, component);
  BandDecomposition phys;
  phys.source_grid = decomp.source_grid;
  phys.low_block = inverse_transform(decomp.low_block);
  for (const auto& [j, band] : decomp.bands) phys.bands.emplace(j, inverse_transform(band));
  return besov_breakdown(phys, bank.j_min(), params, component);
}

double besov_norm(const QField& f, const FilterBank& bank, const BesovParams& params, int component) {
  return besov_breakdown(f, bank, params, component).norm;
}

EmbeddingReport check_embedding(const QField& f, const FilterBank& bank, const BesovParams& a, const BesovParams& b) {
  a.validate();
  b.validate();
  if (!(a.s >= b.s) || !(a.p <= b.p)) {
    throw ParameterError("embedding needs s_a >= s_b and p_a <= p_b");
  }
  const BesovBreakdown ba = besov_breakdown(f, bank, a);
  const BesovBreakdown bb = besov_breakdown(f, bank, b);
  EmbeddingReport r;
  r.norm_a = ba.norm;
  r.norm_b = bb.norm;
  r.ratio = ba.norm > 0.0 ? bb.norm / ba.norm : (bb.norm == 0.0 ? 1.0 : kInfinity);
  r.structural_constant = std::exp2(bank.j_min() * (b.s - a.s));
  r.structural = a.p == b.p && a.q_idx <= b.q_idx;
  const double k = r.structural_constant;
  const double tol = 1e-12;
  bool termwise = bb.low_term <= k * ba.low_term * (1.0 + tol);
  for (std::size_t i = 0; i < ba.band_terms.size(); ++i) {
    termwise = termwise && bb.band_terms[i].second <= k * ba.band_terms[i].second * (1.0 + tol);
  }
  r.termwise_monotone = termwise;
  r.bounded = r.norm_b <= k * r.norm_a * (1.0 + tol);
  return r;
}

double product_ratio(const QField& f, const QField& g, const FilterBank& bank, const BesovParams& params) {
  params.validate();
  const int n = bank.grid().dim;
  if (!(params.s > n / params.p)) {
    throw ParameterError("product estimate needs s > n/p; got s = " + std::to_string(params.s) +
                         ", n/p = " + std::to_string(n / params.p));
  }
  const QField fg = dealias(forward_transform(
      hamilton_product(to_representation(f, Representation::physical), to_representation(g, Representation::physical))));
  const double denom = besov_norm(f, bank, params) * besov_norm(g, bank, params);
  if (denom == 0.0) throw ParameterError("product_ratio: a factor has zero Besov norm");
  return besov_norm(fg, bank, params) / denom;
}

}  // namespace quatflow
