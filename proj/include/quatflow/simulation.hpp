#pragma once

#include <functional>
#include <string>
#include <vector>

#include "quatflow/diagnostics.hpp"
#include "quatflow/solver.hpp"

namespace quatflow {

/// Energy above this multiple of the reference energy counts as blow-up.
inline constexpr double kBlowUpEnergyFactor = 1e6;

struct SimulationResult {
  SolverState final_state;
  std::vector<DiagnosticsRecord> records;
  bool blow_up = false;
  long blow_up_step = -1;
  double last_finite_besov = 0.0;
  std::string blow_up_reason;
};

using RecordSink = std::function<void(const DiagnosticsRecord&)>;
using StateSink = std::function<void(const SolverState&)>;

/// Runs from t = 0 to cfg.t_end. A record is emitted for the initial state,
/// every cfg.diag_every steps, and after the last step. The last step is
/// shortened so the run ends exactly at t_end.
///
/// Blow-up (a non-finite coefficient, or energy above kBlowUpEnergyFactor
/// times the first nonzero energy seen) ends the run with a final record
/// flagged blow_up; that record's values describe the last finite state.
/// `on_step` sees every accepted state, including the initial one.
SimulationResult simulate(const SimConfig& cfg, const QField& q0, const RecordSink& sink = {},
                          const StateSink& on_step = {});

struct PicardReport {
  bool converged = false;
  /// Iterates computed (each one a full trajectory).
  int iterations = 0;
  /// sup_t ||q^(m)(t) - q^(m-1)(t)||_B for m = 1..iterations.
  std::vector<double> distances;
  /// Largest ratio of successive distances (0 with fewer than two distances).
  double contraction_factor = 0.0;
  bool non_contraction = false;
  std::string reason;
};

/// Fixed-point iteration of the Duhamel map on [0, t_end]:
///   q^(m+1)(t) = E(t) q0 + int_0^t E(t - tau) G(q^(m)(tau), tau) dtau,
/// starting from q^(0)(t) = q0, with the integral taken by the trapezoid
/// rule on the step grid. Stops when the distance drops below `tol`, or
/// reports non-contraction when the distance grows three times in a row or
/// stops being finite.
PicardReport picard_iterate(const SimConfig& cfg, const QField& q0, int max_iter, double tol);

}  // namespace quatflow
