#include "quatflow/solver.hpp"

#include <cmath>
#include <string>

#include "quatflow/errors.hpp"
#include "quatflow/filter_bank.hpp"

namespace quatflow {

const char* to_string(NonlinearityMode m) { return m == NonlinearityMode::advective ? "advective" : "hamilton"; }

const char* to_string(ForcingKind k) {
  switch (k) {
    case ForcingKind::none: return "none";
    case ForcingKind::steady_low_mode: return "steady_low_mode";
    case ForcingKind::time_decaying_low_mode: return "time_decaying_low_mode";
  }
  return "none";
}

void SimConfig::validate() const {
  grid.validate();
  if (!(nu > 0.0)) throw ConfigurationError("nu must be > 0");
  if (!(dt > 0.0)) throw ConfigurationError("dt must be > 0");
  if (!(t_end >= 0.0)) throw ConfigurationError("t_end must be >= 0");
  if (t_end > 0.0 && dt > t_end) {
    throw ConfigurationError("dt (" + std::to_string(dt) + ") must not exceed t_end (" + std::to_string(t_end) + ")");
  }
  if (diag_every < 1) throw ConfigurationError("diag_every must be >= 1");
  if (!(r_exponent >= 1.0)) throw ConfigurationError("r_exponent must be >= 1");
  try {
    besov.validate();
  } catch (const ParameterError& e) {
    throw ConfigurationError(std::string("besov: ") + e.what());
  }
  if (forcing.kind != ForcingKind::none) {
    forcing_eval(forcing, 0.0, grid);
    if (!std::isfinite(forcing.amplitude)) throw ConfigurationError("forcing amplitude must be finite");
    if (!(forcing.decay_rate >= 0.0)) throw ConfigurationError("forcing decay_rate must be >= 0");
  }
}

QField heat_semigroup(const QField& f, double t, double nu) {
  f.require(Representation::spectral, "heat_semigroup");
  if (!(t >= 0.0)) throw ParameterError("heat_semigroup: t must be >= 0, got " + std::to_string(t));
  if (!(nu > 0.0)) throw ParameterError("heat_semigroup: nu must be > 0");
  if (t == 0.0) return f;
  return apply_multiplier(f, (-nu * t * xi_squared(f.grid())).exp());
}

namespace {

std::vector<QField> physical_gradient(const QField& q_hat) {
  std::vector<QField> grads = gradient(q_hat);
  for (auto& g : grads) g = inverse_transform(g);
  return grads;
}

}  // namespace

QField nonlinear_term(const QField& q_hat, NonlinearityMode mode) {
  q_hat.require(Representation::spectral, "nonlinear_term");
  const GridSpec& grid = q_hat.grid();
  const QField q = inverse_transform(q_hat);
  const std::vector<QField> dq = physical_gradient(q_hat);
  QField out(grid, Representation::physical);

  if (mode == NonlinearityMode::advective) {
    for (int c = 0; c < QField::kComponents; ++c) {
      Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(q.size());
      for (int m = 0; m < grid.dim; ++m) acc += q.real(velocity_component(m)) * dq[m].real(c);
      out.real(c) = -acc;
    }
  } else {
    const Quat basis[3] = {Quat::i(), Quat::j(), Quat::k()};
    for (Index s = 0; s < q.size(); ++s) {
      const Quat qs = q.at(s);
      Quat acc;
      for (int m = 0; m < grid.dim; ++m) {
        const Quat weight = -0.5 * (qs * basis[m] + basis[m] * qs);
        const Quat d = dq[m].at(s);
        acc += weight * d + d * weight;
      }
      out.set(s, -0.5 * acc);
    }
  }
  return dealias(forward_transform(out));
}

QField forcing_eval(const ForcingSpec& spec, double t, const GridSpec& grid) {
  QField out(grid, Representation::spectral);
  if (spec.kind == ForcingKind::none) return out;

  const IntVec& k = spec.mode;
  double k2 = 0.0;
  for (int a = 0; a < grid.dim; ++a) {
    if (std::abs(k[a]) > grid.dealias_cutoff(a)) {
      throw ConfigurationError("forcing mode component " + std::to_string(k[a]) + " on axis " + std::to_string(a) +
                               " exceeds the dealiased range " + std::to_string(grid.dealias_cutoff(a)));
    }
    const double x = grid.xi(a, k[a]);
    k2 += x * x;
  }
  if (k2 == 0.0) throw ConfigurationError("forcing mode must be nonzero");

  // Direction orthogonal to xi_k.
  std::array<double, 3> xi{grid.xi(0, k[0]), grid.xi(1, k[1]), grid.dim > 2 ? grid.xi(2, k[2]) : 0.0};
  std::array<double, 3> dir{0.0, 0.0, 0.0};
  if (grid.dim == 2) {
    dir = {-xi[1], xi[0], 0.0};
  } else {
    // xi x e_a with e_a the axis least aligned with xi.
    int axis = 0;
    for (int a = 1; a < 3; ++a) {
      if (std::abs(xi[a]) < std::abs(xi[axis])) axis = a;
    }
    std::array<double, 3> e{0.0, 0.0, 0.0};
    e[axis] = 1.0;
    dir = {xi[1] * e[2] - xi[2] * e[1], xi[2] * e[0] - xi[0] * e[2], xi[0] * e[1] - xi[1] * e[0]};
  }
  const double len = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
  double amp = spec.amplitude;
  if (spec.kind == ForcingKind::time_decaying_low_mode) amp *= std::exp(-spec.decay_rate * t);

  const Index plus = grid.slot(k);
  const Index minus = grid.slot({-k[0], -k[1], -k[2]});
  for (int m = 0; m < grid.dim; ++m) {
    const double c = 0.5 * amp * dir[m] / len;
    out.coeff(velocity_component(m))[plus] += c;
    out.coeff(velocity_component(m))[minus] += c;
  }
  return out;
}

QField duhamel_integrand(const QField& q_hat, double t, const SimConfig& cfg) {
  QField g = forcing_eval(cfg.forcing, t, cfg.grid);
  if (cfg.nonlinear) g += leray_project(nonlinear_term(q_hat, cfg.nonlinearity_mode));
  return g;
}

SolverState step(const SolverState& state, const SimConfig& cfg, double dt) {
  if (dt <= 0.0) dt = cfg.dt;
  const QField& q = state.q_hat;
  const QField a = duhamel_integrand(q, state.t, cfg);
  const QField predicted = heat_semigroup(q + dt * a, dt, cfg.nu);
  const QField b = duhamel_integrand(predicted, state.t + dt, cfg);
  QField next = heat_semigroup(q + (0.5 * dt) * a, dt, cfg.nu) + (0.5 * dt) * b;
  next = leray_project(next);

  const long index = state.step_index + 1;
  if (!next.all_finite()) {
    double last = kInfinity;
    if (q.all_finite()) last = besov_norm(q, build_filter_bank(cfg.grid), cfg.besov);
    throw BlowUpError(index, last, "non-finite coefficient at step " + std::to_string(index));
  }
  return {state.t + dt, std::move(next), index};
}

QField prepare_initial(const QField& q0, const SimConfig& cfg) {
  if (!(q0.grid() == cfg.grid)) {
    throw ConfigurationError("initial field grid " + q0.grid().shape_string() + " does not match configured grid " +
                             cfg.grid.shape_string());
  }
  return leray_project(to_representation(q0, Representation::spectral));
}

}  // namespace quatflow
