/**
 * @file fluid_state.hpp
 * @brief Particle state container and the ideal-gas closure.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace pouhydro {

struct Eos {
  double gamma = 1.4;
};

/// P = (gamma - 1) rho e
double pressure(double rho, double e, const Eos& eos);

/// c = sqrt(gamma P / rho)
double sound_speed(double rho, double e, const Eos& eos);

/// Specific energy of a gas at the given pressure and density.
double specific_energy(double P, double rho, const Eos& eos);

/**
 * @brief Structure-of-arrays particle state.
 *
 * Masses are constant. Density and volume are kept consistent, rho = m / V;
 * the generic scheme evolves V and the SPH scheme evolves rho.
 */
struct ParticleSystem {
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> m;
  std::vector<double> V;
  std::vector<double> rho;
  std::vector<double> e;
  std::vector<double> h;
  std::vector<double> alpha;
  std::vector<std::uint8_t> fixed;
  double time = 0.0;

  std::size_t size() const { return x.size(); }
  void resize(std::size_t n);
};

/// Throws UsageError if the field arrays differ in length.
void check_consistent(const ParticleSystem& state);

/// Throws StateCorruption if any rho, V or e is not positive and finite.
void check_physical(const ParticleSystem& state);

/// Stable ordering of particle indices by position.
std::vector<std::size_t> position_order(const ParticleSystem& state);

/// Reorders every per-particle field: entry k takes the old entry order[k].
void apply_order(ParticleSystem& state, std::span<const std::size_t> order);

/// Reorders every per-particle field so that x is non-decreasing.
/// Returns true if anything moved.
bool sort_by_position(ParticleSystem& state);

std::vector<double> pressures(const ParticleSystem& state, const Eos& eos);
std::vector<double> sound_speeds(const ParticleSystem& state, const Eos& eos);

double total_mass(const ParticleSystem& state);
double total_momentum(const ParticleSystem& state);
/// sum m (v^2/2 + e)
double total_energy(const ParticleSystem& state);

/// CSV with header `x,rho,v,P,e,h,V`, 17 significant digits.
void write_snapshot_csv(std::ostream& out, const ParticleSystem& state, const Eos& eos);

} // namespace pouhydro
