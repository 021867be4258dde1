#pragma once

#include "quatflow/besov.hpp"
#include "quatflow/field.hpp"

namespace quatflow {

/// How (q . grad) q is read for quaternion-valued q.
///
/// advective: the imaginary components x..(one per axis) form the advecting
/// velocity u, and all four components are transported: -(u . grad) q.
/// hamilton: the real weight u_m is replaced by the quaternion
/// w_m = -(q e_m + e_m q) / 2 = u_m - q_w e_m, and the term is
/// -(1/2) sum_m (w_m d_m q + d_m q w_m). Equal to the advective term when
/// the scalar part q_w vanishes.
enum class NonlinearityMode { advective, hamilton };

enum class ForcingKind { none, steady_low_mode, time_decaying_low_mode };

/// Divergence-free single-mode body force amplitude * a * cos(xi_k . x) on
/// the velocity components, with a a unit vector orthogonal to k.
struct ForcingSpec {
  ForcingKind kind = ForcingKind::none;
  double amplitude = 0.0;
  IntVec mode{1, 0, 0};
  double decay_rate = 0.0;
};

struct SimConfig {
  GridSpec grid = make_grid(2, 32);
  double nu = 0.1;
  double t_end = 0.1;
  double dt = 1e-3;
  NonlinearityMode nonlinearity_mode = NonlinearityMode::advective;
  /// false drops the quadratic term (pure heat flow plus forcing).
  bool nonlinear = true;
  ForcingSpec forcing{};
  int diag_every = 10;
  BesovParams besov{2.0, 2.0, 2.0};
  double r_exponent = 2.0;

  /// Throws ConfigurationError on nu <= 0, dt <= 0, t_end < 0, dt > t_end
  /// (when t_end > 0), diag_every < 1, r_exponent < 1, invalid grid or forcing.
  void validate() const;
};

struct SolverState {
  double t = 0.0;
  QField q_hat;
  long step_index = 0;
};

const char* to_string(NonlinearityMode m);
const char* to_string(ForcingKind k);

/// exp(-nu t |xi|^2) on every mode. Throws ParameterError for t < 0 or nu <= 0.
QField heat_semigroup(const QField& f, double t, double nu);

/// Quadratic term -(q . grad) q for spectral q, formed pointwise on the grid
/// and dealiased.
QField nonlinear_term(const QField& q_hat, NonlinearityMode mode);

/// Spectral forcing field at time t. Throws ConfigurationError when the mode
/// is zero or outside the dealiased range.
QField forcing_eval(const ForcingSpec& spec, double t, const GridSpec& grid);

/// P dealias(N(q)) + f(t), or just f(t) when the nonlinearity is off.
QField duhamel_integrand(const QField& q_hat, double t, const SimConfig& cfg);

/// Advances by `dt` (defaults to cfg.dt) with the second-order exponential
/// predictor-corrector:
///   a = G(q_n, t_n), q* = E(dt)(q_n + dt a), b = G(q*, t_n + dt),
///   q_{n+1} = E(dt)(q_n + dt/2 a) + dt/2 b,
/// i.e. the trapezoid rule on the Duhamel integral, with E the heat
/// semigroup and G the projected integrand. Only the quadratic term is
/// dealiased; the state is re-projected. Throws BlowUpError on non-finite
/// coefficients.
SolverState step(const SolverState& state, const SimConfig& cfg, double dt = 0.0);

/// Projects initial data onto divergence-free fields, checking the grid.
QField prepare_initial(const QField& q0, const SimConfig& cfg);

}  // namespace quatflow
