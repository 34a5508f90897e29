#include "pouhydro/harness.hpp"

#include "pouhydro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace pouhydro {

void validate(const RunConfig& config) {
  if (config.n_particles < 20) {
    throw UsageError("n_particles must be at least 20");
  }
  if (!(config.t_end > 0.0)) {
    throw UsageError("t_end must be positive");
  }
  if (!(config.x_min < config.diaphragm && config.diaphragm < config.x_max)) {
    throw UsageError("diaphragm must lie inside the domain");
  }
  if (!(config.gamma > 1.0)) {
    throw UsageError("gamma must exceed 1");
  }
  if (2 * config.fixed_per_side >= config.n_particles) {
    throw UsageError("too many fixed particles");
  }
  StepControls controls = config.controls;
  controls.t_end = config.t_end;
  validate(controls);
}

SchemeConfig scheme_config(const RunConfig& config) {
  SchemeConfig scheme;
  scheme.scheme = config.scheme;
  scheme.mls_degree = config.mls_degree;
  scheme.weight = KernelSpec::wendland_c4(config.mls_support);
  scheme.h_constant = config.h_constant;
  scheme.eos.gamma = config.gamma;
  scheme.dissipation.enabled = config.dissipation;
  return scheme;
}

ParticleSystem setup_sod(const RunConfig& config) {
  validate(config);
  const Eos eos{config.gamma};
  const double left_length = config.diaphragm - config.x_min;
  const double right_length = config.x_max - config.diaphragm;
  const double left_mass = config.left.rho * left_length;
  const double right_mass = config.right.rho * right_length;
  const std::size_t n = config.n_particles;
  const double m = (left_mass + right_mass) / static_cast<double>(n);

  const auto n_right =
      std::min(n - 1, static_cast<std::size_t>(std::floor(right_mass / m + 1e-9)));
  const std::size_t n_left = n - n_right;
  const double dx_left = m / config.left.rho;
  const double dx_right = m / config.right.rho;

  ParticleSystem s;
  s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_left = i < n_left;
    const RiemannState& side = is_left ? config.left : config.right;
    if (is_left) {
      s.x[i] = config.diaphragm - (static_cast<double>(n_left - i) - 0.5) * dx_left;
    } else {
      s.x[i] = config.diaphragm + (static_cast<double>(i - n_left) + 0.5) * dx_right;
    }
    s.m[i] = m;
    s.rho[i] = side.rho;
    s.V[i] = m / side.rho;
    s.v[i] = side.v;
    s.e[i] = specific_energy(side.P, side.rho, eos);
    s.h[i] = config.h_constant * s.V[i];
    s.alpha[i] = DissipationParams{}.alpha_min;
    s.fixed[i] = (i < config.fixed_per_side || i >= n - config.fixed_per_side) ? 1 : 0;
  }
  return s;
}

std::vector<std::uint8_t> smooth_region_mask(const ParticleSystem& state,
                                             const WavePositions& waves, double buffer_spacings,
                                             double diaphragm) {
  const std::size_t n = state.size();
  std::vector<std::uint8_t> mask(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    mask[i] = state.fixed[i] ? 0 : 1;
  }
  if (n == 0) {
    return mask;
  }
  for (double offset : {waves.left_head, waves.left_tail, waves.contact, waves.right_tail,
                        waves.right_head}) {
    const double at = diaphragm + offset;
    // Local spacing: largest volume among the two particles on either side.
    const auto it = std::lower_bound(state.x.begin(), state.x.end(), at);
    const auto k = static_cast<std::ptrdiff_t>(it - state.x.begin());
    double spacing = 0.0;
    for (std::ptrdiff_t j = k - 2; j < k + 2; ++j) {
      if (j >= 0 && j < static_cast<std::ptrdiff_t>(n)) {
        spacing = std::max(spacing, state.V[static_cast<std::size_t>(j)]);
      }
    }
    const double half_width = buffer_spacings * spacing;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(state.x[i] - at) < half_width) {
        mask[i] = 0;
      }
    }
  }
  return mask;
}

ErrorNorms error_norms(const ParticleSystem& state, const Eos& eos,
                       const RiemannSolution& exact, double t,
                       std::span<const std::uint8_t> mask, double diaphragm) {
  if (!(t > 0.0)) {
    throw DomainError("error_norms: t must be positive");
  }
  if (mask.size() != state.size()) {
    throw UsageError("error_norms: mask size mismatch");
  }
  ErrorNorms norms;
  double weight = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (!mask[i]) {
      continue;
    }
    const RiemannState q = sample(exact, (state.x[i] - diaphragm) / t);
    const double dp = std::abs(pressure(state.rho[i], state.e[i], eos) - q.P);
    const double drho = std::abs(state.rho[i] - q.rho);
    const double dv = std::abs(state.v[i] - q.v);
    norms.pressure.linf = std::max(norms.pressure.linf, dp);
    norms.density.linf = std::max(norms.density.linf, drho);
    norms.velocity.linf = std::max(norms.velocity.linf, dv);
    norms.pressure.l1 += state.V[i] * dp;
    norms.density.l1 += state.V[i] * drho;
    norms.velocity.l1 += state.V[i] * dv;
    weight += state.V[i];
    ++norms.count;
  }
  if (norms.count == 0) {
    throw UsageError("error_norms: empty mask");
  }
  norms.pressure.l1 /= weight;
  norms.density.l1 /= weight;
  norms.velocity.l1 /= weight;
  return norms;
}

double detect_contact(const ParticleSystem& state, const RiemannSolution& exact, double t,
                      double diaphragm) {
  const WavePositions waves = wave_positions(exact, t);
  const double level = 0.5 * (exact.rho_star_left + exact.rho_star_right);
  const double from = diaphragm + waves.left_tail;
  const double to = diaphragm + waves.right_head;
  for (std::size_t i = 0; i + 1 < state.size(); ++i) {
    if (state.x[i] < from || state.x[i] > to) {
      continue;
    }
    const double a = state.rho[i];
    const double b = state.rho[i + 1];
    if (a >= level && b < level) {
      const double frac = (a - level) / (a - b);
      return state.x[i] + frac * (state.x[i + 1] - state.x[i]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double max_relative_deviation(const ParticleSystem& state, double lo, double hi, double target) {
  double worst = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.x[i] >= lo && state.x[i] <= hi) {
      worst = std::max(worst, std::abs(state.rho[i] - target) / target);
      ++count;
    }
  }
  if (count == 0) {
    throw UsageError("max_relative_deviation: no particles in range");
  }
  return worst;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw UsageError("cannot open " + path.string() + " for writing");
  }
  out << text;
}

std::string snapshot_text(const ParticleSystem& state, const Eos& eos) {
  std::ostringstream out;
  write_snapshot_csv(out, state, eos);
  return out.str();
}

} // namespace

RunReport run(const RunConfig& config) {
  validate(config);
  RunReport report;
  report.config = config;

  const SchemeConfig scheme = scheme_config(config);
  StepControls controls = config.controls;
  controls.t_end = config.t_end;

  ParticleSystem initial = setup_sod(config);
  report.initial_momentum = total_momentum(initial);
  report.initial_energy = total_energy(initial);

  const bool write_files = !config.out_dir.empty();
  std::filesystem::path dir(config.out_dir);
  if (write_files) {
    std::filesystem::create_directories(dir);
  }

  Integrator integrator(std::move(initial), scheme, controls);
  std::ostringstream log;
  while (integrator.state().time < config.t_end) {
    if (integrator.steps_taken() >= controls.max_steps) {
      throw StepFailure("max_steps reached before t_end");
    }
    report.history.push_back(integrator.step());
    write_log_line(log, report.history.back());
    if (write_files && config.snapshot_every > 0 &&
        integrator.steps_taken() % config.snapshot_every == 0) {
      std::ostringstream name;
      name << "snapshot_" << std::setw(6) << std::setfill('0') << integrator.steps_taken()
           << ".csv";
      write_file(dir / name.str(), snapshot_text(integrator.state(), scheme.eos));
    }
  }

  report.final_state = integrator.state();
  report.steps = integrator.steps_taken();
  report.resyncs = integrator.total_resyncs();
  report.momentum_change = total_momentum(report.final_state) - report.initial_momentum;
  report.wall_impulse = integrator.wall_impulse();
  report.momentum_drift = std::abs(report.momentum_change + report.wall_impulse);
  report.energy_drift = std::abs(total_energy(report.final_state) - report.initial_energy) /
                        std::abs(report.initial_energy);

  report.exact = solve_riemann(config.left, config.right, config.gamma);
  const double t = report.final_state.time;
  const WavePositions waves = wave_positions(report.exact, t);
  const auto mask =
      smooth_region_mask(report.final_state, waves, config.mask_buffer_spacings, config.diaphragm);
  report.errors = error_norms(report.final_state, scheme.eos, report.exact, t, mask,
                              config.diaphragm);
  report.contact_position = detect_contact(report.final_state, report.exact, t, config.diaphragm);
  report.contact_position_exact = config.diaphragm + waves.contact;
  report.contact_position_error =
      std::abs(report.contact_position - report.contact_position_exact);

  if (write_files) {
    write_file(dir / "final.csv", snapshot_text(report.final_state, scheme.eos));
    std::ostringstream reference;
    write_reference_csv(reference, report.exact, t, config.x_min, config.x_max, 2001,
                        config.diaphragm);
    write_file(dir / "reference.csv", reference.str());
    write_file(dir / "run.log", log.str());
    std::ostringstream text;
    write_report(text, report);
    write_file(dir / "report.txt", text.str());
  }
  return report;
}

void write_report(std::ostream& out, const RunReport& r) {
  const auto precision = out.precision();
  const RunConfig& c = r.config;
  out << std::setprecision(10);
  out << "scheme: " << to_string(c.scheme) << '\n'
      << "n_particles: " << c.n_particles << '\n'
      << "t_end: " << c.t_end << '\n'
      << "gamma: " << c.gamma << '\n'
      << "mls_degree: " << c.mls_degree << '\n'
      << "mls_weight: " << to_string(KernelKind::wendland_c4) << '\n'
      << "mls_support: " << c.mls_support << '\n'
      << "h_constant: " << c.h_constant << '\n'
      << "cfl: " << c.controls.cfl << '\n'
      << "resync_tolerance: " << c.controls.resync_tolerance << '\n'
      << "dissipation: " << (c.dissipation ? "on" : "off") << '\n'
      << "steps: " << r.steps << '\n'
      << "resyncs: " << r.resyncs << '\n'
      << "p_star: " << r.exact.p_star << '\n'
      << "v_star: " << r.exact.v_star << '\n'
      << "momentum_change: " << r.momentum_change << '\n'
      << "wall_impulse: " << r.wall_impulse << '\n'
      << "momentum_drift: " << r.momentum_drift << '\n'
      << "energy_drift: " << r.energy_drift << '\n'
      << "contact_position: " << r.contact_position << '\n'
      << "contact_position_exact: " << r.contact_position_exact << '\n'
      << "contact_position_error: " << r.contact_position_error << '\n'
      << "masked_particles: " << r.errors.count << '\n'
      << "linf_pressure: " << r.errors.pressure.linf << '\n'
      << "l1_pressure: " << r.errors.pressure.l1 << '\n'
      << "linf_density: " << r.errors.density.linf << '\n'
      << "l1_density: " << r.errors.density.l1 << '\n'
      << "linf_velocity: " << r.errors.velocity.linf << '\n'
      << "l1_velocity: " << r.errors.velocity.l1 << '\n';
  out.precision(precision);
}

double fit_order(std::span<const std::size_t> sizes, std::span<const double> errors) {
  if (sizes.size() != errors.size() || sizes.size() < 2) {
    throw UsageError("fit_order needs matching sizes and errors (at least two)");
  }
  const double count = static_cast<double>(sizes.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (!(errors[k] > 0.0)) {
      throw DomainError("fit_order: errors must be positive");
    }
    sx += std::log(static_cast<double>(sizes[k]));
    sy += std::log(errors[k]);
  }
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const double dx = std::log(static_cast<double>(sizes[k])) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errors[k]) - my);
  }
  return -sxy / sxx;
}

ConvergenceResult convergence_study(const RunConfig& config, std::span<const std::size_t> sizes) {
  if (sizes.size() < 3) {
    throw UsageError("convergence_study needs at least three sizes");
  }
  ConvergenceResult result;
  for (std::size_t n : sizes) {
    RunConfig c = config;
    c.n_particles = n;
    if (!config.out_dir.empty()) {
      c.out_dir = (std::filesystem::path(config.out_dir) / ("n" + std::to_string(n))).string();
    }
    const RunReport r = run(c);
    result.sizes.push_back(n);
    result.linf_pressure.push_back(r.errors.pressure.linf);
    result.l1_pressure.push_back(r.errors.pressure.l1);
  }
  result.fitted_order = fit_order(result.sizes, result.linf_pressure);
  if (!config.out_dir.empty()) {
    std::ostringstream text;
    write_convergence_report(text, config, result);
    write_file(std::filesystem::path(config.out_dir) / "convergence.txt", text.str());
  }
  return result;
}

void write_convergence_report(std::ostream& out, const RunConfig& config,
                              const ConvergenceResult& result) {
  const auto precision = out.precision();
  out << std::setprecision(10);
  out << "scheme: " << to_string(config.scheme) << '\n' << "t_end: " << config.t_end << '\n';
  for (std::size_t k = 0; k < result.sizes.size(); ++k) {
    out << "linf_pressure_n" << result.sizes[k] << ": " << result.linf_pressure[k] << '\n';
    out << "l1_pressure_n" << result.sizes[k] << ": " << result.l1_pressure[k] << '\n';
  }
  out << "fitted_order: " << result.fitted_order << '\n';
  out.precision(precision);
}

} // namespace pouhydro
