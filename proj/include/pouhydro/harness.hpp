/**
 * @file harness.hpp
 * @brief Sod shock-tube setup, run orchestration, error norms and
 * convergence fits.
 */
#pragma once

#include "pouhydro/dynamics.hpp"
#include "pouhydro/fluid_state.hpp"
#include "pouhydro/integrator.hpp"
#include "pouhydro/riemann.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pouhydro {

struct RunConfig {
  Scheme scheme = Scheme::mls;
  std::size_t n_particles = 450;
  double x_min = -0.5;
  double x_max = 0.5;
  double diaphragm = 0.0;
  double t_end = 0.2;
  RiemannState left{1.0, 1.0, 0.0};
  RiemannState right{0.1, 0.125, 0.0};
  double gamma = 1.4;
  int mls_degree = 1;
  /// Wendland support radius in smoothing lengths (MLS only).
  double mls_support = 1.5;
  double h_constant = 2.0;
  bool dissipation = true;
  StepControls controls;
  /// Frozen particles at each end of the tube.
  std::size_t fixed_per_side = 6;
  /// Half-width of the excluded band around each wave, in local spacings.
  double mask_buffer_spacings = 10.0;
  /// Output directory; empty for no files.
  std::string out_dir;
  /// Write a snapshot every k steps (0: final snapshot only).
  std::size_t snapshot_every = 0;
};

void validate(const RunConfig& config);

SchemeConfig scheme_config(const RunConfig& config);

/**
 * @brief Equal-mass particles for the two-state tube, no smoothing at the
 * diaphragm.
 *
 * m = (total mass) / N. Each side receives its mass share of the particles
 * (the rounding remainder goes to the left) at uniform spacing m / rho,
 * packed outwards from the diaphragm.
 */
ParticleSystem setup_sod(const RunConfig& config);

struct FieldErrors {
  double linf = 0.0;
  double l1 = 0.0;
};

struct ErrorNorms {
  FieldErrors pressure;
  FieldErrors density;
  FieldErrors velocity;
  std::size_t count = 0;
};

/// Particles away from fixed ends and outside `buffer_spacings` local
/// spacings of every wave.
std::vector<std::uint8_t> smooth_region_mask(const ParticleSystem& state,
                                             const WavePositions& waves, double buffer_spacings,
                                             double diaphragm = 0.0);

/// L-infinity and volume-weighted mean absolute errors against the exact
/// solution over the masked particles.
ErrorNorms error_norms(const ParticleSystem& state, const Eos& eos,
                       const RiemannSolution& exact, double t,
                       std::span<const std::uint8_t> mask, double diaphragm = 0.0);

/// Position where density first drops through the mean of the two star
/// densities, scanning rightwards from the rarefaction tail. NaN if absent.
double detect_contact(const ParticleSystem& state, const RiemannSolution& exact, double t,
                      double diaphragm = 0.0);

/// max |rho_i - target| / target over particles with lo <= x_i <= hi.
double max_relative_deviation(const ParticleSystem& state, double lo, double hi, double target);

struct RunReport {
  RunConfig config;
  ParticleSystem final_state;
  std::vector<StepDiagnostics> history;
  RiemannSolution exact;
  ErrorNorms errors;
  double contact_position = 0.0;
  double contact_position_exact = 0.0;
  double contact_position_error = 0.0;
  double initial_momentum = 0.0;
  double initial_energy = 0.0;
  /// Change of the gas momentum sum(m v); the frozen ends push on the gas, so
  /// this equals minus the wall impulse, not zero.
  double momentum_change = 0.0;
  /// Impulse absorbed by the fixed particles over the run.
  double wall_impulse = 0.0;
  /// |momentum_change + wall_impulse|: drift of the total including the walls.
  double momentum_drift = 0.0;
  /// Relative change of the total energy.
  double energy_drift = 0.0;
  std::size_t steps = 0;
  std::size_t resyncs = 0;
};

/// Runs the tube to t_end. When out_dir is set, writes final.csv,
/// reference.csv, run.log and report.txt there.
RunReport run(const RunConfig& config);

void write_report(std::ostream& out, const RunReport& report);

struct ConvergenceResult {
  std::vector<std::size_t> sizes;
  std::vector<double> linf_pressure;
  std::vector<double> l1_pressure;
  double fitted_order = 0.0;
};

/// Least-squares slope of log(error) against log(N), negated.
double fit_order(std::span<const std::size_t> sizes, std::span<const double> errors);

ConvergenceResult convergence_study(const RunConfig& config, std::span<const std::size_t> sizes);

void write_convergence_report(std::ostream& out, const RunConfig& config,
                              const ConvergenceResult& result);

} // namespace pouhydro
