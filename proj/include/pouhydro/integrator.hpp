/**
 * @file integrator.hpp
 * @brief Predictor-corrector time stepping with volume resynchronisation.
 */
#pragma once

#include "pouhydro/dynamics.hpp"
#include "pouhydro/fluid_state.hpp"
#include "pouhydro/shape_functions.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace pouhydro {

struct StepControls {
  double cfl = 0.3;
  /// Relative mismatch |V - int phi| / V that triggers a volume reset.
  double resync_tolerance = 1.0e-3;
  bool resync = true;
  double t_end = 0.2;
  std::size_t max_steps = 1000000;
  int max_retries = 8;
};

void validate(const StepControls& controls);

struct StepDiagnostics {
  std::size_t step = 0;
  double t = 0.0;
  double dt = 0.0;
  std::size_t resync_count = 0;
  int rejections = 0;
  double mass = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
  /// Momentum delivered to the fixed particles so far; momentum plus this
  /// is conserved.
  double wall_impulse = 0.0;
};

/// One plain-text log line: step, t, dt, resyncs, mass, momentum, energy,
/// wall impulse.
void write_log_line(std::ostream& out, const StepDiagnostics& diag);

/// dh/dt: h_constant dV/dt for MLS, -(h_constant m / rho^2) drho/dt for SPH,
/// zero for B-splines (no smoothing length).
std::vector<double> update_h(const ParticleSystem& state, const SchemeConfig& scheme,
                             const Derivatives& rates);

/// hydro_rates() plus the smoothing-length rate.
Derivatives compute_derivatives(const ParticleSystem& state, const SchemeConfig& scheme,
                                const ShapeTable& table);

/// cfl * min_i l_i / (c_i + |v_i| + 3 max_j |v_i - v_j|), j over the
/// particles in row i of the table.
double timestep(const ParticleSystem& state, const SchemeConfig& scheme, const ShapeTable& table,
                double cfl);

/// Replaces V_i by the shape integral where they differ by at least
/// `tolerance` relative to V_i and keeps rho = m/V. Smoothing lengths keep
/// following their own rate equation.
/// Fixed particles are skipped. Returns the number of particles updated.
std::size_t volume_resync(ParticleSystem& state, const ShapeTable& table, double tolerance);

/**
 * @brief Second-order predictor-corrector (Heun) driver.
 *
 * The predictor advances every field by dt with the rates at the start of the
 * step; the corrector restarts from the initial state with the average of the
 * initial and predicted rates. Steps that produce a non-positive volume or
 * energy, or tangled particles, are retried with half the step. Fixed
 * particles keep every field except x, which coasts at their frozen velocity
 * (so a boosted tube carries its ends along).
 */
class Integrator {
public:
  Integrator(ParticleSystem state, SchemeConfig scheme, StepControls controls);

  const ParticleSystem& state() const { return state_; }
  const SchemeConfig& scheme() const { return scheme_; }
  const StepControls& controls() const { return controls_; }
  const ShapeTable& table() const { return table_; }
  std::size_t steps_taken() const { return steps_; }
  std::size_t total_resyncs() const { return resyncs_; }
  /// Time integral of the force on the fixed particles.
  double wall_impulse() const { return wall_impulse_; }

  double next_timestep() const;

  /// Step with the CFL timestep, clipped so that t does not pass t_end.
  StepDiagnostics step();
  /// Step with an explicit dt (halved on rejection).
  StepDiagnostics step(double dt);

  /// Steps until t_end; appends one log line per step when log is set.
  std::vector<StepDiagnostics> run(std::ostream* log = nullptr);

private:
  ParticleSystem advance(const ParticleSystem& base, const Derivatives& rates, double dt) const;
  ParticleSystem correct(const ParticleSystem& base, const ParticleSystem& predicted,
                         const Derivatives& initial, const Derivatives& final_rates,
                         double dt) const;
  void clamp_alpha(ParticleSystem& s) const;

  ParticleSystem state_;
  SchemeConfig scheme_;
  StepControls controls_;
  ShapeTable table_;
  std::size_t steps_ = 0;
  std::size_t resyncs_ = 0;
  double wall_impulse_ = 0.0;
};

} // namespace pouhydro
