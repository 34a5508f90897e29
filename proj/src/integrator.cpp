#include "pouhydro/integrator.hpp"

#include "pouhydro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <string>

namespace pouhydro {

namespace {

void permute(std::vector<double>& field, std::span<const std::size_t> order) {
  const auto copy = field;
  for (std::size_t k = 0; k < order.size(); ++k) {
    field[k] = copy[order[k]];
  }
}

void apply_order(Derivatives& d, std::span<const std::size_t> order) {
  for (auto* field : {&d.dV_dt, &d.drho_dt, &d.dv_dt, &d.de_dt, &d.dh_dt, &d.dalpha_dt}) {
    permute(*field, order);
  }
}

} // namespace

void validate(const StepControls& controls) {
  if (!(controls.cfl > 0.0 && controls.cfl < 1.0)) {
    throw UsageError("cfl must lie in (0, 1)");
  }
  if (!(controls.resync_tolerance > 0.0)) {
    throw UsageError("resync tolerance must be positive");
  }
  if (!(controls.t_end > 0.0)) {
    throw UsageError("t_end must be positive");
  }
}

void write_log_line(std::ostream& out, const StepDiagnostics& d) {
  const auto precision = out.precision();
  out << std::setprecision(17) << d.step << ' ' << d.t << ' ' << d.dt << ' ' << d.resync_count
      << ' ' << d.mass << ' ' << d.momentum << ' ' << d.energy << ' ' << d.wall_impulse << '\n';
  out.precision(precision);
}

std::vector<double> update_h(const ParticleSystem& state, const SchemeConfig& scheme,
                             const Derivatives& rates) {
  const std::size_t n = state.size();
  std::vector<double> dh(n, 0.0);
  switch (scheme.scheme) {
  case Scheme::mls:
    for (std::size_t i = 0; i < n; ++i) {
      dh[i] = scheme.h_constant * rates.dV_dt[i];
    }
    break;
  case Scheme::sph:
    for (std::size_t i = 0; i < n; ++i) {
      dh[i] = -scheme.h_constant * state.m[i] / (state.rho[i] * state.rho[i]) * rates.drho_dt[i];
    }
    break;
  case Scheme::rbf:
    break;
  }
  return dh;
}

Derivatives compute_derivatives(const ParticleSystem& state, const SchemeConfig& scheme,
                                const ShapeTable& table) {
  Derivatives rates = hydro_rates(state, scheme, table);
  rates.dh_dt = update_h(state, scheme, rates);
  return rates;
}

double timestep(const ParticleSystem& state, const SchemeConfig& scheme, const ShapeTable& table,
                double cfl) {
  const auto ell = resolution_lengths(state, scheme);
  const auto c = sound_speeds(state, scheme.eos);
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.size(); ++i) {
    double margin = 0.0;
    for (std::size_t j = table.row_first(i); j < table.row_end(i); ++j) {
      margin = std::max(margin, 3.0 * std::abs(state.v[i] - state.v[j]));
    }
    dt = std::min(dt, ell[i] / (c[i] + std::abs(state.v[i]) + margin));
  }
  return cfl * dt;
}

std::size_t volume_resync(ParticleSystem& state, const ShapeTable& table, double tolerance) {
  if (!table.has_volumes() || table.size() != state.size()) {
    throw UsageError("volume_resync needs a table with shape integrals");
  }
  const auto& integral = table.volumes();
  std::size_t count = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.fixed[i]) {
      continue;
    }
    if (!(integral[i] > 0.0)) {
      throw IllPosedGeometry("non-positive shape integral", i);
    }
    if (std::abs(state.V[i] - integral[i]) / state.V[i] >= tolerance) {
      state.V[i] = integral[i];
      state.rho[i] = state.m[i] / state.V[i];
      ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------

Integrator::Integrator(ParticleSystem state, SchemeConfig scheme, StepControls controls)
    : state_(std::move(state)), scheme_(scheme), controls_(controls) {
  validate(controls_);
  check_consistent(state_);
  check_physical(state_);
  if (scheme_.eos.gamma <= 1.0) {
    throw DomainError("gamma must exceed 1");
  }
  table_ = build_shape_table(state_, scheme_, false);
}

double Integrator::next_timestep() const {
  return timestep(state_, scheme_, table_, controls_.cfl);
}

void Integrator::clamp_alpha(ParticleSystem& s) const {
  if (!scheme_.dissipation.enabled) {
    return;
  }
  for (double& a : s.alpha) {
    a = std::clamp(a, scheme_.dissipation.alpha_min, scheme_.dissipation.alpha_max);
  }
}

ParticleSystem Integrator::advance(const ParticleSystem& base, const Derivatives& r,
                                   double dt) const {
  ParticleSystem s = base;
  const bool evolve_density = scheme_.scheme == Scheme::sph;
  for (std::size_t i = 0; i < s.size(); ++i) {
    s.x[i] = base.x[i] + dt * base.v[i];
    if (base.fixed[i]) {
      continue;
    }
    s.v[i] = base.v[i] + dt * r.dv_dt[i];
    s.e[i] = base.e[i] + dt * r.de_dt[i];
    s.h[i] = base.h[i] + dt * r.dh_dt[i];
    s.alpha[i] = base.alpha[i] + dt * r.dalpha_dt[i];
    if (evolve_density) {
      s.rho[i] = base.rho[i] + dt * r.drho_dt[i];
      s.V[i] = s.m[i] / s.rho[i];
    } else {
      s.V[i] = base.V[i] + dt * r.dV_dt[i];
      s.rho[i] = s.m[i] / s.V[i];
    }
  }
  s.time = base.time + dt;
  clamp_alpha(s);
  return s;
}

ParticleSystem Integrator::correct(const ParticleSystem& base, const ParticleSystem& predicted,
                                   const Derivatives& r0, const Derivatives& r1,
                                   double dt) const {
  ParticleSystem s = base;
  const double half = 0.5 * dt;
  const bool evolve_density = scheme_.scheme == Scheme::sph;
  for (std::size_t i = 0; i < s.size(); ++i) {
    s.x[i] = base.x[i] + half * (base.v[i] + predicted.v[i]);
    if (base.fixed[i]) {
      continue;
    }
    s.v[i] = base.v[i] + half * (r0.dv_dt[i] + r1.dv_dt[i]);
    s.e[i] = base.e[i] + half * (r0.de_dt[i] + r1.de_dt[i]);
    s.h[i] = base.h[i] + half * (r0.dh_dt[i] + r1.dh_dt[i]);
    s.alpha[i] = base.alpha[i] + half * (r0.dalpha_dt[i] + r1.dalpha_dt[i]);
    if (evolve_density) {
      s.rho[i] = base.rho[i] + half * (r0.drho_dt[i] + r1.drho_dt[i]);
      s.V[i] = s.m[i] / s.rho[i];
    } else {
      s.V[i] = base.V[i] + half * (r0.dV_dt[i] + r1.dV_dt[i]);
      s.rho[i] = s.m[i] / s.V[i];
    }
  }
  s.time = base.time + dt;
  clamp_alpha(s);
  return s;
}

StepDiagnostics Integrator::step() {
  const double remaining = controls_.t_end - state_.time;
  double dt = std::min(next_timestep(), remaining);
  if (!(dt > 1e-12 * controls_.t_end)) {
    throw StepFailure("timestep underflow at t = " + std::to_string(state_.time));
  }
  // Avoid leaving a sliver of time for a final step.
  if (remaining - dt < 1e-9 * controls_.t_end) {
    dt = remaining;
  }
  StepDiagnostics diag = step(dt);
  if (controls_.t_end - state_.time < 1e-9 * controls_.t_end) {
    state_.time = controls_.t_end;
    diag.t = state_.time;
  }
  return diag;
}

StepDiagnostics Integrator::step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw UsageError("dt must be positive and finite");
  }
  const Derivatives initial = compute_derivatives(state_, scheme_, table_);

  int rejections = 0;
  std::string cause;
  for (;;) {
    try {
      ParticleSystem predicted = advance(state_, initial, dt);
      check_physical(predicted);
      ParticleSystem base = state_;
      Derivatives base_rates = initial;
      if (scheme_.scheme == Scheme::sph &&
          !std::is_sorted(predicted.x.begin(), predicted.x.end())) {
        // Kernel particles may pass each other; carry the start-of-step
        // state along in the same order.
        const auto order = position_order(predicted);
        apply_order(predicted, order);
        apply_order(base, order);
        apply_order(base_rates, order);
      }
      const ShapeTable predicted_table = build_shape_table(predicted, scheme_, false);
      const Derivatives final_rates = compute_derivatives(predicted, scheme_, predicted_table);

      ParticleSystem next = correct(base, predicted, base_rates, final_rates, dt);
      check_physical(next);
      sort_by_position(next);

      const bool need_volumes = controls_.resync && scheme_.scheme != Scheme::sph;
      ShapeTable next_table = build_shape_table(next, scheme_, need_volumes);
      std::size_t resynced = 0;
      if (need_volumes) {
        resynced = volume_resync(next, next_table, controls_.resync_tolerance);
        if (resynced > 0 && scheme_.scheme == Scheme::mls) {
          next_table = build_shape_table(next, scheme_, false);
        }
      }

      state_ = std::move(next);
      table_ = std::move(next_table);
      ++steps_;
      resyncs_ += resynced;
      wall_impulse_ += 0.5 * dt * (initial.boundary_force + final_rates.boundary_force);

      StepDiagnostics diag;
      diag.step = steps_;
      diag.t = state_.time;
      diag.dt = dt;
      diag.resync_count = resynced;
      diag.rejections = rejections;
      diag.mass = total_mass(state_);
      diag.momentum = total_momentum(state_);
      diag.wall_impulse = wall_impulse_;
      diag.energy = total_energy(state_);
      return diag;
    } catch (const StateCorruption& err) {
      cause = err.what();
    } catch (const IllPosedGeometry& err) {
      cause = err.what();
    }
    if (++rejections > controls_.max_retries) {
      throw StepFailure("step rejected " + std::to_string(rejections) + " times at t = " +
                        std::to_string(state_.time) + " (" + cause + ")");
    }
    dt *= 0.5;
  }
}

std::vector<StepDiagnostics> Integrator::run(std::ostream* log) {
  std::vector<StepDiagnostics> history;
  while (state_.time < controls_.t_end) {
    if (steps_ >= controls_.max_steps) {
      throw StepFailure("max_steps reached before t_end");
    }
    history.push_back(step());
    if (log) {
      write_log_line(*log, history.back());
    }
  }
  return history;
}

} // namespace pouhydro
