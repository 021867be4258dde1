#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "quatflow/besov.hpp"
#include "quatflow/filter_bank.hpp"
#include "quatflow/solver.hpp"

namespace quatflow {

/// Per-band scalars keyed by dyadic index, plus the low-block entry.
struct BandValues {
  double low = 0.0;
  std::map<int, double> bands;

  double total() const;
};

/// Terms of the Gronwall envelope at one record time. The integrals are
/// trapezoid sums over the record times up to and including this one.
struct GronwallTerms {
  double initial_norm = 0.0;
  /// int_0^t ||f||_B
  double forcing_integral = 0.0;
  /// int_0^t ||q||_B
  double exponent_integral = 0.0;
  /// ||f(t)||_B
  double forcing_norm = 0.0;
  /// int_0^t ||f||_B^r with r the configured time-integrability exponent.
  double forcing_lr_integral = 0.0;
};

struct DiagnosticsRecord {
  double t = 0.0;
  long step_index = 0;
  double total_energy = 0.0;
  BandValues band_energy;
  BandValues band_dissipation;
  std::array<double, 4> besov_weighted_energy{0.0, 0.0, 0.0, 0.0};
  double besov_norm = 0.0;
  double gronwall_lhs = 0.0;
  GronwallTerms gronwall_rhs_terms;
  double energy_balance_residual = 0.0;
  bool blow_up = false;
};

/// E_j = ||Delta_j q||^2 / 2. `component` < 0 sums all four components.
BandValues band_energy(const BandDecomposition& decomp, int component = -1);

/// nu ||grad Delta_j q||^2 per band, a positive dissipation magnitude.
BandValues dissipation_rate(const BandDecomposition& decomp, double nu, int component = -1);

/// For each component k: sum_j 2^{js} ||Delta_j q_k||^2, low block at weight 2^{j_min s}.
std::array<double, 4> besov_weighted_energy(const BandDecomposition& decomp, int j_min, double s);

struct BandBracket {
  int j = 0;
  double ratio = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool inside = false;
};

/// Regression of log2(dissipation_j / (2 nu E_j)) on j, pooled over records,
/// with the per-band Bernstein bracket [(3/4)^2 4^j, (8/3)^2 4^j] checked on
/// every record (the worst case per band is kept).
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  std::vector<BandBracket> bands;
  bool all_inside = false;
  bool slope_in_range = false;
  int usable_bands = 0;
};

inline constexpr double kSlopeLow = 1.8;
inline constexpr double kSlopeHigh = 2.2;

/// Bands with E_j <= 1e-12 * total energy are skipped. Throws
/// InsufficientDataError with fewer than 3 usable bands.
ScalingFit dissipation_scaling_fit(const std::vector<DiagnosticsRecord>& records, double nu);

struct GronwallReport {
  /// Smallest C >= 0 with LHS(t) <= C (||q0|| + int ||f||) exp(C int ||q||) at every record.
  double min_c = 0.0;
  double contact_time = 0.0;
  bool lhs_identically_zero = false;
  /// True when records after a blow-up were dropped.
  bool censored = false;
  /// No finite C exists (LHS > 0 while ||q0|| + int ||f|| = 0).
  bool unbounded = false;
  int records_used = 0;
};

/// Time integrals are recomputed from the records by the trapezoid rule.
/// C is found by bisection to 1e-6; the upper end of the bracket is reported.
GronwallReport gronwall_monitor(const std::vector<DiagnosticsRecord>& records);

/// |(E_next - E_prev)/dt + nu ||grad q||^2 - <f, q>| with the last two terms
/// averaged over both states.
double energy_balance_residual(const SolverState& prev, const SolverState& next, const SimConfig& cfg);

/// Builds records for one trajectory, carrying the running Gronwall integrals.
class DiagnosticsRecorder {
 public:
  DiagnosticsRecorder(const SimConfig& cfg, FilterBank bank);

  /// `prev` is the state one step before `state`, when there is one.
  DiagnosticsRecord record(const SolverState& state, const SolverState* prev);

  const FilterBank& bank() const { return bank_; }

 private:
  SimConfig cfg_;
  FilterBank bank_;
  std::optional<double> initial_norm_;
  double last_t_ = 0.0;
  double last_q_norm_ = 0.0;
  double last_f_norm_ = 0.0;
  double forcing_integral_ = 0.0;
  double exponent_integral_ = 0.0;
  double forcing_lr_integral_ = 0.0;
};

}  // namespace quatflow
