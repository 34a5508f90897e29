/**
 * @file dynamics.hpp
 * @brief Right-hand sides of the particle equations of motion.
 *
 * Generic partition-of-unity scheme, for shape functions phi_j:
 *
 *   dV_i/dt = V_i sum_j (v_j - v_i) phi_j'(x_i)
 *   dv_i/dt = (1/m_i) sum_j V_j P_j phi_i'(x_j)
 *   de_i/dt = -(P_i/m_i) dV_i/dt
 *
 * The momentum equation reads column i of the gradient table, which makes it
 * the exact adjoint of the volume equation: total momentum and total energy
 * are conserved whenever the gradient rows sum to zero.
 *
 * The reference SPH scheme evolves density with the cubic spline kernel and
 * uses the two-smoothing-length symmetrised pressure force.
 */
#pragma once

#include "pouhydro/fluid_state.hpp"
#include "pouhydro/kernels.hpp"
#include "pouhydro/shape_functions.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pouhydro {

/// Discretisation choice for a run. `rbf` uses cubic B-spline shapes.
enum class Scheme { sph, mls, rbf };

const char* to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);
ShapeBackend backend_for(Scheme scheme);

struct DissipationParams {
  bool enabled = true;
  double alpha_min = 0.5;
  double alpha_max = 1.0;
  /// Conductivity coefficient.
  double alpha_u = 1.0;
  /// v_sig = c_i + c_j - beta * mu_ij
  double signal_beta = 3.0;
  /// tau_i = l_i / (switch_decay * c_i)
  double switch_decay = 0.2;
};

struct SchemeConfig {
  Scheme scheme = Scheme::mls;
  int mls_degree = 1;
  /// MLS weight. A support of 1.5 h keeps five nodes in each weight
  /// footprint at h = 2V; with 1 h the three-point stencil lets an odd-even
  /// velocity mode grow at a rate of order c / dx.
  KernelSpec weight = KernelSpec::wendland_c4(1.5);
  /// h = h_constant * V (mls) or h = h_constant * m / rho (sph).
  double h_constant = 2.0;
  Eos eos;
  DissipationParams dissipation;
};

struct Derivatives {
  std::vector<double> dV_dt;
  std::vector<double> drho_dt;
  std::vector<double> dv_dt;
  std::vector<double> de_dt;
  std::vector<double> dh_dt;
  std::vector<double> dalpha_dt;
  /// Sum of m_i dv_i/dt over fixed particles before their rates are zeroed:
  /// the force the gas exerts on the frozen ends.
  double boundary_force = 0.0;

  void resize(std::size_t n);
};

/// Builds the shape table matching the scheme at the current positions.
ShapeTable build_shape_table(const ParticleSystem& state, const SchemeConfig& scheme,
                             bool with_volumes);

/// Resolution length per particle: h for kernel and MLS shapes, V for B-splines.
std::vector<double> resolution_lengths(const ParticleSystem& state, const SchemeConfig& scheme);

/// sum_j (v_j - v_i) phi_j'(x_i)
std::vector<double> velocity_divergence(const ParticleSystem& state, const ShapeTable& table);

std::vector<double> generic_continuity_rhs(const ParticleSystem& state, const ShapeTable& table);
std::vector<double> volume_rhs(const ParticleSystem& state, const ShapeTable& table);
std::vector<double> generic_momentum_rhs(const ParticleSystem& state, const ShapeTable& table,
                                         std::span<const double> pressures);

/// (P_i / rho_i^2) drho_i/dt
std::vector<double> energy_rhs_from_density(const ParticleSystem& state,
                                            std::span<const double> pressures,
                                            std::span<const double> drho_dt);
/// -(P_i / m_i) dV_i/dt
std::vector<double> energy_rhs_from_volume(const ParticleSystem& state,
                                           std::span<const double> pressures,
                                           std::span<const double> dV_dt);

/// Kernel continuity equation with h_i taken from the state.
std::vector<double> sph_continuity_rhs(const ParticleSystem& state);
std::vector<double> sph_momentum_rhs(const ParticleSystem& state,
                                     std::span<const double> pressures);

/// Unordered particle pairs (i < j) whose shape supports overlap, in
/// lexicographic order.
std::vector<std::pair<std::size_t, std::size_t>> neighbor_pairs(const ShapeTable& table);

struct DissipationRates {
  std::vector<double> dv_dt;
  std::vector<double> de_dt;
};

/**
 * @brief Pairwise artificial viscosity and conductivity.
 *
 * Both use the symmetrised pair gradient G_ij = (phi_j'(x_i) - phi_i'(x_j)) / 2
 * and act on the two particles of a pair with opposite signs, so momentum and
 * total energy are conserved pair by pair.
 */
DissipationRates dissipation_rhs(const ParticleSystem& state, const ShapeTable& table,
                                 std::span<const double> pressures, const Eos& eos,
                                 const DissipationParams& params);

/// dalpha_i/dt = -(alpha_i - alpha_min)/tau_i + max(-div v_i, 0)
std::vector<double> switch_rhs(const ParticleSystem& state, const ShapeTable& table,
                               std::span<const double> resolution, const Eos& eos,
                               const DissipationParams& params);

/// All hydrodynamic rates of the scheme except dh/dt (see update_h).
/// Fixed particles get zero rates.
Derivatives hydro_rates(const ParticleSystem& state, const SchemeConfig& scheme,
                        const ShapeTable& table);

} // namespace pouhydro
