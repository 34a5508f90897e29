#include "pouhydro/dynamics.hpp"

#include "pouhydro/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pouhydro {

const char* to_string(Scheme scheme) {
  switch (scheme) {
  case Scheme::sph:
    return "sph";
  case Scheme::mls:
    return "mls";
  case Scheme::rbf:
    return "rbf";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "sph") {
    return Scheme::sph;
  }
  if (name == "mls") {
    return Scheme::mls;
  }
  if (name == "rbf" || name == "bspline") {
    return Scheme::rbf;
  }
  throw UsageError("unknown scheme '" + name + "' (expected sph, mls or rbf)");
}

ShapeBackend backend_for(Scheme scheme) {
  switch (scheme) {
  case Scheme::sph:
    return ShapeBackend::sph;
  case Scheme::mls:
    return ShapeBackend::mls;
  case Scheme::rbf:
    return ShapeBackend::bspline;
  }
  return ShapeBackend::mls;
}

void Derivatives::resize(std::size_t n) {
  dV_dt.assign(n, 0.0);
  drho_dt.assign(n, 0.0);
  dv_dt.assign(n, 0.0);
  de_dt.assign(n, 0.0);
  dh_dt.assign(n, 0.0);
  dalpha_dt.assign(n, 0.0);
}

namespace {

void require_table(const ParticleSystem& state, const ShapeTable& table) {
  if (table.size() != state.size() || !table.complete()) {
    throw UsageError("shape table does not match the particle system");
  }
}

void require_size(std::span<const double> field, std::size_t n, const char* name) {
  if (field.size() != n) {
    throw UsageError(std::string(name) + ": size mismatch");
  }
}

} // namespace

ShapeTable build_shape_table(const ParticleSystem& state, const SchemeConfig& scheme,
                             bool with_volumes) {
  switch (scheme.scheme) {
  case Scheme::sph:
    return sph_shapes(NodeSet{state.x, state.h}, state.m, state.rho);
  case Scheme::mls:
    return mls_shapes(NodeSet{state.x, state.h}, scheme.mls_degree, scheme.weight,
                      with_volumes);
  case Scheme::rbf:
    return BsplineShapes(state.x).table();
  }
  throw UsageError("unknown scheme");
}

std::vector<double> resolution_lengths(const ParticleSystem& state, const SchemeConfig& scheme) {
  return scheme.scheme == Scheme::rbf ? state.V : state.h;
}

std::vector<double> velocity_divergence(const ParticleSystem& state, const ShapeTable& table) {
  require_table(state, table);
  const std::size_t n = state.size();
  const auto& v = state.v;
  std::vector<double> div(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto grad = table.row_gradients(i);
    const std::size_t first = table.row_first(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < grad.size(); ++k) {
      acc += (v[first + k] - v[i]) * grad[k];
    }
    div[i] = acc;
  }
  return div;
}

std::vector<double> generic_continuity_rhs(const ParticleSystem& state, const ShapeTable& table) {
  auto rate = velocity_divergence(state, table);
  for (std::size_t i = 0; i < rate.size(); ++i) {
    rate[i] = -state.rho[i] * rate[i];
  }
  return rate;
}

std::vector<double> volume_rhs(const ParticleSystem& state, const ShapeTable& table) {
  auto rate = velocity_divergence(state, table);
  for (std::size_t i = 0; i < rate.size(); ++i) {
    rate[i] = state.V[i] * rate[i];
  }
  return rate;
}

std::vector<double> generic_momentum_rhs(const ParticleSystem& state, const ShapeTable& table,
                                         std::span<const double> pressures) {
  require_table(state, table);
  const std::size_t n = state.size();
  require_size(pressures, n, "generic_momentum_rhs");
  std::vector<double> force(n, 0.0);
  // Row j holds phi_i'(x_j) for the particles i it touches; scatter into i.
  for (std::size_t j = 0; j < n; ++j) {
    const double load = state.V[j] * pressures[j];
    const auto grad = table.row_gradients(j);
    const std::size_t first = table.row_first(j);
    for (std::size_t k = 0; k < grad.size(); ++k) {
      force[first + k] += load * grad[k];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    force[i] /= state.m[i];
  }
  return force;
}

std::vector<double> energy_rhs_from_density(const ParticleSystem& state,
                                            std::span<const double> pressures,
                                            std::span<const double> drho_dt) {
  const std::size_t n = state.size();
  require_size(pressures, n, "energy_rhs");
  require_size(drho_dt, n, "energy_rhs");
  std::vector<double> rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    rate[i] = pressures[i] / (state.rho[i] * state.rho[i]) * drho_dt[i];
  }
  return rate;
}

std::vector<double> energy_rhs_from_volume(const ParticleSystem& state,
                                           std::span<const double> pressures,
                                           std::span<const double> dV_dt) {
  const std::size_t n = state.size();
  require_size(pressures, n, "energy_rhs");
  require_size(dV_dt, n, "energy_rhs");
  std::vector<double> rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    rate[i] = -pressures[i] / state.m[i] * dV_dt[i];
  }
  return rate;
}

std::vector<double> sph_continuity_rhs(const ParticleSystem& state) {
  check_consistent(state);
  const std::size_t n = state.size();
  const auto& x = state.x;
  const auto& v = state.v;
  const double radius_in_h = KernelSpec::cubic_spline().support_radius_in_h();
  std::vector<double> rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = state.h[i];
    const auto [lo, hi] = support_window(x, x[i], radius_in_h * h);
    double acc = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      const double grad = state.m[j] / state.rho[j] * cubic_spline_gradient(x[i] - x[j], h);
      acc += (v[j] - v[i]) * grad;
    }
    rate[i] = -state.rho[i] * acc;
  }
  return rate;
}

std::vector<double> sph_momentum_rhs(const ParticleSystem& state,
                                     std::span<const double> pressures) {
  check_consistent(state);
  const std::size_t n = state.size();
  require_size(pressures, n, "sph_momentum_rhs");
  const auto& x = state.x;
  const double radius_in_h = KernelSpec::cubic_spline().support_radius_in_h();
  const double h_max = n ? *std::max_element(state.h.begin(), state.h.end()) : 0.0;
  std::vector<double> rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [lo, hi] = support_window(x, x[i], radius_in_h * h_max);
    double acc = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      if (j == i) {
        continue;
      }
      const double dx = x[i] - x[j];
      const double volume = state.m[j] / state.rho[j];
      acc += volume * (pressures[i] * cubic_spline_gradient(dx, state.h[i]) +
                       pressures[j] * cubic_spline_gradient(dx, state.h[j]));
    }
    rate[i] = -acc / state.rho[i];
  }
  return rate;
}

std::vector<std::pair<std::size_t, std::size_t>> neighbor_pairs(const ShapeTable& table) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t n = table.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = table.row_first(i); j < table.row_end(i); ++j) {
      if (j > i) {
        pairs.emplace_back(i, j);
      } else if (j < i && (i < table.row_first(j) || i >= table.row_end(j))) {
        // Row j does not reach i, so the pair was not produced from row j.
        pairs.emplace_back(j, i);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

DissipationRates dissipation_rhs(const ParticleSystem& state, const ShapeTable& table,
                                 std::span<const double> pressures, const Eos& eos,
                                 const DissipationParams& params) {
  require_table(state, table);
  const std::size_t n = state.size();
  require_size(pressures, n, "dissipation_rhs");
  const auto c = sound_speeds(state, eos);

  // Accumulate forces (m dv/dt) and heating (m de/dt), divide by mass at the end.
  std::vector<double> force(n, 0.0);
  std::vector<double> heating(n, 0.0);
  for (const auto& [i, j] : neighbor_pairs(table)) {
    const double dx = state.x[i] - state.x[j];
    if (dx == 0.0) {
      continue;
    }
    const double unit = dx > 0.0 ? 1.0 : -1.0;
    const double pair_grad = std::abs(0.5 * (table.gradient(i, j) - table.gradient(j, i)));
    if (pair_grad == 0.0) {
      continue;
    }
    const double rho_bar = 0.5 * (state.rho[i] + state.rho[j]);
    const double volume_bar = 0.5 * (state.V[i] + state.V[j]);

    const double mu = (state.v[i] - state.v[j]) * unit;
    if (mu < 0.0) {
      const double alpha_bar = 0.5 * (state.alpha[i] + state.alpha[j]);
      const double v_sig = c[i] + c[j] - params.signal_beta * mu;
      // Viscous pressure, positive for approaching pairs.
      const double q = -0.5 * alpha_bar * v_sig * mu * rho_bar;
      const double f = volume_bar * q * pair_grad * unit;
      force[i] += f;
      force[j] -= f;
      // Work done against f turns into heat, shared equally.
      const double heat = -0.5 * f * (state.v[i] - state.v[j]);
      heating[i] += heat;
      heating[j] += heat;
    }

    const double v_sig_u = std::sqrt(std::abs(pressures[i] - pressures[j]) / rho_bar);
    const double flux =
        params.alpha_u * rho_bar * volume_bar * v_sig_u * (state.e[i] - state.e[j]) * pair_grad;
    heating[i] -= flux;
    heating[j] += flux;
  }

  DissipationRates rates{std::move(force), std::move(heating)};
  for (std::size_t i = 0; i < n; ++i) {
    rates.dv_dt[i] /= state.m[i];
    rates.de_dt[i] /= state.m[i];
  }
  return rates;
}

std::vector<double> switch_rhs(const ParticleSystem& state, const ShapeTable& table,
                               std::span<const double> resolution, const Eos& eos,
                               const DissipationParams& params) {
  const std::size_t n = state.size();
  require_size(resolution, n, "switch_rhs");
  const auto div = velocity_divergence(state, table);
  std::vector<double> rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = sound_speed(state.rho[i], state.e[i], eos);
    const double tau = resolution[i] / (params.switch_decay * c);
    const double source = std::max(-div[i], 0.0);
    rate[i] = -(state.alpha[i] - params.alpha_min) / tau + source;
  }
  return rate;
}

Derivatives hydro_rates(const ParticleSystem& state, const SchemeConfig& scheme,
                        const ShapeTable& table) {
  check_consistent(state);
  require_table(state, table);
  const std::size_t n = state.size();
  const auto P = pressures(state, scheme.eos);

  Derivatives d;
  d.resize(n);
  if (scheme.scheme == Scheme::sph) {
    d.drho_dt = sph_continuity_rhs(state);
    d.dv_dt = sph_momentum_rhs(state, P);
    d.de_dt = energy_rhs_from_density(state, P, d.drho_dt);
    for (std::size_t i = 0; i < n; ++i) {
      d.dV_dt[i] = -state.V[i] / state.rho[i] * d.drho_dt[i];
    }
  } else {
    d.dV_dt = volume_rhs(state, table);
    d.dv_dt = generic_momentum_rhs(state, table, P);
    d.de_dt = energy_rhs_from_volume(state, P, d.dV_dt);
    for (std::size_t i = 0; i < n; ++i) {
      d.drho_dt[i] = -state.rho[i] / state.V[i] * d.dV_dt[i];
    }
  }

  if (scheme.dissipation.enabled) {
    const auto diss = dissipation_rhs(state, table, P, scheme.eos, scheme.dissipation);
    for (std::size_t i = 0; i < n; ++i) {
      d.dv_dt[i] += diss.dv_dt[i];
      d.de_dt[i] += diss.de_dt[i];
    }
    d.dalpha_dt = switch_rhs(state, table, resolution_lengths(state, scheme), scheme.eos,
                             scheme.dissipation);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (state.fixed[i]) {
      d.boundary_force += state.m[i] * d.dv_dt[i];
      d.dV_dt[i] = d.drho_dt[i] = d.dv_dt[i] = d.de_dt[i] = d.dalpha_dt[i] = 0.0;
    }
  }
  return d;
}

} // namespace pouhydro
