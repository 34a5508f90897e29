/**
 * @file riemann.hpp
 * @brief Exact solution of the 1D Riemann problem for an ideal gas.
 *
 * The star-region pressure solves f_L(p) + f_R(p) + (v_R - v_L) = 0 with the
 * usual shock (Rankine-Hugoniot) and rarefaction (isentropic) branches.
 */
#pragma once

#include <cstddef>
#include <iosfwd>

namespace pouhydro {

struct RiemannState {
  double P = 1.0;
  double rho = 1.0;
  double v = 0.0;
};

struct RiemannSolution {
  RiemannState left;
  RiemannState right;
  double gamma = 1.4;

  double p_star = 0.0;
  double v_star = 0.0;
  double rho_star_left = 0.0;
  double rho_star_right = 0.0;

  bool left_shock = false;
  bool right_shock = false;
  /// Wave speeds; a shock has head speed == tail speed == shock speed.
  double left_head_speed = 0.0;
  double left_tail_speed = 0.0;
  double right_tail_speed = 0.0;
  double right_head_speed = 0.0;

  /// Pressure-equation residual at p_star.
  double residual = 0.0;

  double contact_speed() const { return v_star; }
};

/// One branch f_K(p) of the pressure function.
double pressure_branch(double p, const RiemannState& side, double gamma);

/// f_L(p) + f_R(p) + (v_R - v_L)
double pressure_function(double p, const RiemannState& left, const RiemannState& right,
                         double gamma);

/// Throws VacuumError when the data generate a vacuum, DomainError for
/// non-positive states.
RiemannSolution solve_riemann(const RiemannState& left, const RiemannState& right,
                              double gamma);

/// State at similarity coordinate xi = (x - x_diaphragm) / t.
RiemannState sample(const RiemannSolution& solution, double xi);

struct WavePositions {
  double left_head = 0.0;
  double left_tail = 0.0;
  double contact = 0.0;
  double right_tail = 0.0;
  double right_head = 0.0;
};

/// Wave positions at time t relative to the diaphragm. For Sod data the
/// rarefaction occupies [left_head, left_tail] and the shock is right_head.
WavePositions wave_positions(const RiemannSolution& solution, double t);

/// Reference profile on `samples` points in [x_min, x_max] at time t,
/// written with the particle snapshot columns `x,rho,v,P,e,h,V`
/// (h = 0, V = sample spacing).
void write_reference_csv(std::ostream& out, const RiemannSolution& solution, double t,
                         double x_min, double x_max, std::size_t samples,
                         double diaphragm = 0.0);

} // namespace pouhydro
