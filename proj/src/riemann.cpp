#include "pouhydro/riemann.hpp"

#include "pouhydro/errors.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace pouhydro {

namespace {

double sound(const RiemannState& s, double gamma) { return std::sqrt(gamma * s.P / s.rho); }

void require_state(const RiemannState& s) {
  if (!(s.P > 0.0) || !(s.rho > 0.0)) {
    throw DomainError("Riemann states need positive pressure and density");
  }
}

double pressure_branch_derivative(double p, const RiemannState& s, double gamma) {
  if (p > s.P) {
    const double a = 2.0 / ((gamma + 1.0) * s.rho);
    const double b = (gamma - 1.0) / (gamma + 1.0) * s.P;
    const double root = std::sqrt(a / (p + b));
    return root * (1.0 - 0.5 * (p - s.P) / (p + b));
  }
  const double c = sound(s, gamma);
  return std::pow(p / s.P, -(gamma + 1.0) / (2.0 * gamma)) / (s.rho * c);
}

} // namespace

double pressure_branch(double p, const RiemannState& s, double gamma) {
  if (p > s.P) {
    const double a = 2.0 / ((gamma + 1.0) * s.rho);
    const double b = (gamma - 1.0) / (gamma + 1.0) * s.P;
    return (p - s.P) * std::sqrt(a / (p + b));
  }
  const double c = sound(s, gamma);
  return 2.0 * c / (gamma - 1.0) * (std::pow(p / s.P, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
}

double pressure_function(double p, const RiemannState& left, const RiemannState& right,
                         double gamma) {
  return pressure_branch(p, left, gamma) + pressure_branch(p, right, gamma) + (right.v - left.v);
}

RiemannSolution solve_riemann(const RiemannState& left, const RiemannState& right,
                              double gamma) {
  require_state(left);
  require_state(right);
  if (!(gamma > 1.0)) {
    throw DomainError("gamma must exceed 1");
  }
  const double cl = sound(left, gamma);
  const double cr = sound(right, gamma);
  if (2.0 * (cl + cr) / (gamma - 1.0) <= right.v - left.v) {
    throw VacuumError("Riemann data generate a vacuum");
  }

  auto g = [&](double p) { return pressure_function(p, left, right, gamma); };

  // g is increasing in p and g(0+) < 0 without vacuum; bracket the root.
  double lo = 0.0;
  double hi = std::max(left.P, right.P);
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  double p = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double value = g(p);
    if (value == 0.0) {
      lo = hi = p;
      break;
    }
    if (value < 0.0) {
      lo = p;
    } else {
      hi = p;
    }
    const double slope = pressure_branch_derivative(p, left, gamma) +
                         pressure_branch_derivative(p, right, gamma);
    double next = p - value / slope;
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    const double change = std::abs(next - p);
    p = next;
    if (change <= 1e-15 * p || hi - lo <= 1e-15 * p) {
      break;
    }
  }

  RiemannSolution sol;
  sol.left = left;
  sol.right = right;
  sol.gamma = gamma;
  sol.p_star = p;
  sol.residual = g(p);
  const double fl = pressure_branch(p, left, gamma);
  const double fr = pressure_branch(p, right, gamma);
  sol.v_star = 0.5 * (left.v + right.v) + 0.5 * (fr - fl);

  const double gm = (gamma - 1.0) / (gamma + 1.0);
  const double shock_factor_a = (gamma + 1.0) / (2.0 * gamma);
  const double shock_factor_b = (gamma - 1.0) / (2.0 * gamma);

  if (p > left.P) {
    const double ratio = p / left.P;
    sol.left_shock = true;
    sol.rho_star_left = left.rho * (ratio + gm) / (gm * ratio + 1.0);
    const double speed = left.v - cl * std::sqrt(shock_factor_a * ratio + shock_factor_b);
    sol.left_head_speed = sol.left_tail_speed = speed;
  } else {
    const double ratio = p / left.P;
    sol.rho_star_left = left.rho * std::pow(ratio, 1.0 / gamma);
    const double c_star = cl * std::pow(ratio, shock_factor_b);
    sol.left_head_speed = left.v - cl;
    sol.left_tail_speed = sol.v_star - c_star;
  }

  if (p > right.P) {
    const double ratio = p / right.P;
    sol.right_shock = true;
    sol.rho_star_right = right.rho * (ratio + gm) / (gm * ratio + 1.0);
    const double speed = right.v + cr * std::sqrt(shock_factor_a * ratio + shock_factor_b);
    sol.right_head_speed = sol.right_tail_speed = speed;
  } else {
    const double ratio = p / right.P;
    sol.rho_star_right = right.rho * std::pow(ratio, 1.0 / gamma);
    const double c_star = cr * std::pow(ratio, shock_factor_b);
    sol.right_head_speed = right.v + cr;
    sol.right_tail_speed = sol.v_star + c_star;
  }
  return sol;
}

RiemannState sample(const RiemannSolution& s, double xi) {
  const double gamma = s.gamma;
  const double g1 = gamma - 1.0;
  const double g2 = gamma + 1.0;
  if (xi <= s.v_star) {
    if (xi < s.left_head_speed) {
      return s.left;
    }
    if (xi >= s.left_tail_speed) {
      return {s.p_star, s.rho_star_left, s.v_star};
    }
    // Inside the left rarefaction fan.
    const double cl = sound(s.left, gamma);
    const double c = 2.0 / g2 * (cl + 0.5 * g1 * (s.left.v - xi));
    const double ratio = c / cl;
    return {s.left.P * std::pow(ratio, 2.0 * gamma / g1), s.left.rho * std::pow(ratio, 2.0 / g1),
            2.0 / g2 * (cl + 0.5 * g1 * s.left.v + xi)};
  }
  if (xi > s.right_head_speed) {
    return s.right;
  }
  if (xi <= s.right_tail_speed) {
    return {s.p_star, s.rho_star_right, s.v_star};
  }
  const double cr = sound(s.right, gamma);
  const double c = 2.0 / g2 * (cr - 0.5 * g1 * (s.right.v - xi));
  const double ratio = c / cr;
  return {s.right.P * std::pow(ratio, 2.0 * gamma / g1), s.right.rho * std::pow(ratio, 2.0 / g1),
          2.0 / g2 * (-cr + 0.5 * g1 * s.right.v + xi)};
}

WavePositions wave_positions(const RiemannSolution& s, double t) {
  if (!(t >= 0.0)) {
    throw DomainError("wave_positions: t must be non-negative");
  }
  return {s.left_head_speed * t, s.left_tail_speed * t, s.v_star * t, s.right_tail_speed * t,
          s.right_head_speed * t};
}

void write_reference_csv(std::ostream& out, const RiemannSolution& solution, double t,
                         double x_min, double x_max, std::size_t samples, double diaphragm) {
  if (!(t > 0.0)) {
    throw DomainError("reference profile needs t > 0");
  }
  if (samples < 2 || !(x_max > x_min)) {
    throw UsageError("reference profile needs at least two samples on a proper interval");
  }
  const auto flags = out.flags();
  const auto precision = out.precision();
  const double dx = (x_max - x_min) / static_cast<double>(samples - 1);
  out << "x,rho,v,P,e,h,V\n" << std::setprecision(17);
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = x_min + dx * static_cast<double>(k);
    const RiemannState q = sample(solution, (x - diaphragm) / t);
    const double e = q.P / ((solution.gamma - 1.0) * q.rho);
    out << x << ',' << q.rho << ',' << q.v << ',' << q.P << ',' << e << ',' << 0.0 << ',' << dx
        << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

} // namespace pouhydro
