/**
 * @file fixtures.hpp
 * @brief Small particle configurations shared by the unit tests.
 */
#pragma once

#include "oracles.hpp"

#include "pouhydro/dynamics.hpp"
#include "pouhydro/fluid_state.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace fixture {

using pouhydro::Eos;
using pouhydro::ParticleSystem;

/// Particles at the given positions with density rho(x), pressure P(x) and
/// velocity v(x). V_i is half the distance between the neighbours (the end
/// particles get a full neighbour gap), h = h_factor * V, alpha = 1.
inline ParticleSystem from_positions(const std::vector<double>& x,
                                     const std::function<double(double)>& rho,
                                     const std::function<double(double)>& P,
                                     const std::function<double(double)>& v,
                                     double h_factor = 2.0, Eos eos = {}) {
  const std::size_t n = x.size();
  ParticleSystem s;
  s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? x[i] - x[i - 1] : x[1] - x[0];
    const double right = i + 1 < n ? x[i + 1] - x[i] : x[n - 1] - x[n - 2];
    s.x[i] = x[i];
    s.V[i] = 0.5 * (left + right);
    s.rho[i] = rho(x[i]);
    s.m[i] = s.rho[i] * s.V[i];
    s.v[i] = v(x[i]);
    s.e[i] = pouhydro::specific_energy(P(x[i]), s.rho[i], eos);
    s.h[i] = h_factor * s.V[i];
    s.alpha[i] = 1.0;
    s.fixed[i] = 0;
  }
  return s;
}

inline std::vector<double> lattice(std::size_t n, double a = 0.0, double b = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return x;
}

inline double constant_one(double) { return 1.0; }
inline double at_rest(double) { return 0.0; }

/// Uniform gas at rest on a lattice.
inline ParticleSystem uniform_gas(std::size_t n, double rho = 1.0, double P = 1.0) {
  return from_positions(
      lattice(n), [rho](double) { return rho; }, [P](double) { return P; }, at_rest);
}

/// Random positions on [0, 1] with random smooth-ish fields; velocities are
/// multiples of 2^-20 so that adding a dyadic constant is exact.
inline ParticleSystem random_gas(std::size_t n, unsigned seed) {
  auto s = from_positions(
      oracle::random_nodes(n, seed), [](double x) { return 1.0 + 0.3 * std::sin(5.0 * x); },
      [](double x) { return 1.0 + 0.5 * x * x; }, at_rest);
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    s.v[i] = std::ldexp(std::round(std::ldexp(u(rng), 20)), -20);
    s.e[i] *= 1.0 + 0.2 * u(rng);
    s.alpha[i] = 0.5 + 0.25 * (1.0 + u(rng));
  }
  return s;
}

inline pouhydro::SchemeConfig scheme(pouhydro::Scheme kind, bool dissipation = true) {
  pouhydro::SchemeConfig c;
  c.scheme = kind;
  c.dissipation.enabled = dissipation;
  return c;
}

} // namespace fixture
