#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "quatflow/field.hpp"
#include "quatflow/filter_bank.hpp"

namespace quatflow {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Besov indices (s, p, q_idx). p and q_idx may be kInfinity.
struct BesovParams {
  double s = 0.0;
  double p = 2.0;
  double q_idx = 2.0;

  /// Throws ParameterError unless p >= 1 and q_idx >= 1.
  void validate() const;
};

/// (sum_x |f(x)|^p * cell volume)^(1/p) with |f(x)| the quaternion magnitude;
/// p = inf gives the largest magnitude. Spectral input is transformed first,
/// except for p = 2 where Parseval gives the same value directly.
double lp_norm(const QField& f, double p);

/// Same quadrature on a single component.
double component_lp_norm(const QField& f, int c, double p);

/// Weighted band terms 2^{js} ||Delta_j f||_{L^p}, the low block weighted as
/// band j_min, and their l^{q_idx} sum. Terms are summed low block first,
/// then by increasing j.
struct BesovBreakdown {
  double low_term = 0.0;
  std::vector<std::pair<int, double>> band_terms;
  double norm = 0.0;
};

/// `component` < 0 selects the whole-field quaternion magnitude.
BesovBreakdown besov_breakdown(const BandDecomposition& decomp, int j_min, const BesovParams& params,
                               int component = -1);
BesovBreakdown besov_breakdown(const QField& f, const FilterBank& bank, const BesovParams& params,
                               int component = -1);

double besov_norm(const QField& f, const FilterBank& bank, const BesovParams& params, int component = -1);

struct EmbeddingReport {
  double norm_a = 0.0;
  double norm_b = 0.0;
  /// norm_b / norm_a (1 when both vanish).
  double ratio = 1.0;
  /// 2^{j_min (s_b - s_a)}.
  double structural_constant = 1.0;
  /// True when p and q_idx allow the term-by-term bound norm_b <= K norm_a.
  bool structural = false;
  /// Every weighted term of b is at most K times the matching term of a.
  bool termwise_monotone = false;
  bool bounded = false;
};

/// Compares the B^{s_b}_{p_b,q} and B^{s_a}_{p_a,q} norms of f. Requires
/// a.s >= b.s and a.p <= b.p; otherwise ParameterError.
EmbeddingReport check_embedding(const QField& f, const FilterBank& bank, const BesovParams& a, const BesovParams& b);

/// ||f g|| / (||f|| ||g||) in B^s_{p,q}, where f g is the pointwise Hamilton
/// product, dealiased. Requires s > n/p.
double product_ratio(const QField& f, const QField& g, const FilterBank& bank, const BesovParams& params);

}  // namespace quatflow
