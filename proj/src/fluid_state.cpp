#include "pouhydro/fluid_state.hpp"

#include "pouhydro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

namespace pouhydro {

namespace {
void require_gas(double rho, double e) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw StateCorruption("density must be positive");
  }
  if (!(e > 0.0) || !std::isfinite(e)) {
    throw StateCorruption("specific energy must be positive");
  }
}
} // namespace

double pressure(double rho, double e, const Eos& eos) {
  require_gas(rho, e);
  return (eos.gamma - 1.0) * rho * e;
}

double sound_speed(double rho, double e, const Eos& eos) {
  return std::sqrt(eos.gamma * pressure(rho, e, eos) / rho);
}

double specific_energy(double P, double rho, const Eos& eos) {
  if (!(P > 0.0) || !(rho > 0.0)) {
    throw StateCorruption("pressure and density must be positive");
  }
  return P / ((eos.gamma - 1.0) * rho);
}

void ParticleSystem::resize(std::size_t n) {
  x.resize(n);
  v.resize(n);
  m.resize(n);
  V.resize(n);
  rho.resize(n);
  e.resize(n);
  h.resize(n);
  alpha.resize(n);
  fixed.resize(n);
}

void check_consistent(const ParticleSystem& s) {
  const std::size_t n = s.x.size();
  for (std::size_t len : {s.v.size(), s.m.size(), s.V.size(), s.rho.size(), s.e.size(),
                          s.h.size(), s.alpha.size(), s.fixed.size()}) {
    if (len != n) {
      throw UsageError("ParticleSystem: field arrays differ in length");
    }
  }
}

void check_physical(const ParticleSystem& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool ok = s.rho[i] > 0.0 && std::isfinite(s.rho[i]) && s.V[i] > 0.0 &&
                    std::isfinite(s.V[i]) && s.e[i] > 0.0 && std::isfinite(s.e[i]);
    if (!ok) {
      throw StateCorruption("non-positive density, volume or energy at particle " +
                            std::to_string(i));
    }
  }
}

std::vector<std::size_t> position_order(const ParticleSystem& s) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.x[a] < s.x[b]; });
  return order;
}

void apply_order(ParticleSystem& s, std::span<const std::size_t> order) {
  if (order.size() != s.size()) {
    throw UsageError("apply_order: permutation size mismatch");
  }
  auto permute = [&](auto& field) {
    auto copy = field;
    for (std::size_t k = 0; k < order.size(); ++k) {
      field[k] = copy[order[k]];
    }
  };
  permute(s.x);
  permute(s.v);
  permute(s.m);
  permute(s.V);
  permute(s.rho);
  permute(s.e);
  permute(s.h);
  permute(s.alpha);
  permute(s.fixed);
}

bool sort_by_position(ParticleSystem& s) {
  if (std::is_sorted(s.x.begin(), s.x.end())) {
    return false;
  }
  apply_order(s, position_order(s));
  return true;
}

std::vector<double> pressures(const ParticleSystem& s, const Eos& eos) {
  std::vector<double> P(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    P[i] = pressure(s.rho[i], s.e[i], eos);
  }
  return P;
}

std::vector<double> sound_speeds(const ParticleSystem& s, const Eos& eos) {
  std::vector<double> c(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    c[i] = sound_speed(s.rho[i], s.e[i], eos);
  }
  return c;
}

double total_mass(const ParticleSystem& s) {
  return std::accumulate(s.m.begin(), s.m.end(), 0.0);
}

double total_momentum(const ParticleSystem& s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sum += s.m[i] * s.v[i];
  }
  return sum;
}

double total_energy(const ParticleSystem& s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sum += s.m[i] * (0.5 * s.v[i] * s.v[i] + s.e[i]);
  }
  return sum;
}

void write_snapshot_csv(std::ostream& out, const ParticleSystem& s, const Eos& eos) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << "x,rho,v,P,e,h,V\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << s.x[i] << ',' << s.rho[i] << ',' << s.v[i] << ',' << pressure(s.rho[i], s.e[i], eos)
        << ',' << s.e[i] << ',' << s.h[i] << ',' << s.V[i] << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

} // namespace pouhydro
