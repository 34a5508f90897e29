// Command-line driver: `run`, `converge` and `riemann` subcommands.
//
// Options may also come from a key=value file given with --config; values on
// the command line override the file.

#include "pouhydro/errors.hpp"
#include "pouhydro/harness.hpp"
#include "pouhydro/riemann.hpp"

#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) {
      sizes.push_back(static_cast<std::size_t>(std::stoul(item)));
    }
  }
  return sizes;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meshfree Lagrangian shock-tube solver"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file");

  std::string scheme = "mls";
  std::size_t n = 450;
  double t_end = 0.2;
  double cfl = 0.3;
  double gamma = 1.4;
  int mls_degree = 1;
  double h_constant = 2.0;
  double mls_support = 1.5;
  bool no_dissipation = false;
  bool no_resync = false;
  std::size_t snapshot_every = 0;
  std::string out;
  std::string sizes = "150,300,600";
  double riemann_t = 0.2;
  std::size_t samples = 1001;

  app.add_option("--scheme", scheme, "sph, mls or rbf")->check(CLI::IsMember({"sph", "mls", "rbf"}));
  app.add_option("--n", n, "number of particles");
  app.add_option("--t-end", t_end, "final time");
  app.add_option("--cfl", cfl, "Courant number");
  app.add_option("--gamma", gamma, "adiabatic index");
  app.add_option("--mls-degree", mls_degree, "MLS polynomial degree");
  app.add_option("--mls-support", mls_support, "Wendland support radius in smoothing lengths");
  app.add_option("--h-constant", h_constant, "smoothing length per unit volume");
  app.add_flag("--no-dissipation", no_dissipation, "disable artificial viscosity/conductivity");
  app.add_flag("--no-resync", no_resync, "never reset volumes to shape integrals");
  app.add_option("--snapshot-every", snapshot_every, "write a snapshot every k steps");
  app.add_option("--out", out, "output directory (run, converge) or file (riemann)");
  app.add_option("--sizes", sizes, "comma-separated particle counts for converge");
  app.add_option("--t", riemann_t, "time of the reference profile");
  app.add_option("--samples", samples, "number of reference samples");

  auto* run_cmd = app.add_subcommand("run", "single shock-tube run");
  auto* converge_cmd = app.add_subcommand("converge", "L-infinity pressure convergence study");
  auto* riemann_cmd = app.add_subcommand("riemann", "exact Sod reference profile");
  for (auto* sub : {run_cmd, converge_cmd, riemann_cmd}) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  try {
    pouhydro::RunConfig config;
    config.scheme = pouhydro::parse_scheme(scheme);
    config.n_particles = n;
    config.t_end = t_end;
    config.controls.cfl = cfl;
    config.gamma = gamma;
    config.mls_degree = mls_degree;
    config.h_constant = h_constant;
    config.mls_support = mls_support;
    config.dissipation = !no_dissipation;
    config.controls.resync = !no_resync;
    config.snapshot_every = snapshot_every;
    config.out_dir = out;

    if (*run_cmd) {
      const auto report = pouhydro::run(config);
      pouhydro::write_report(std::cout, report);
    } else if (*converge_cmd) {
      const auto list = parse_sizes(sizes);
      const auto result = pouhydro::convergence_study(config, list);
      pouhydro::write_convergence_report(std::cout, config, result);
    } else if (*riemann_cmd) {
      const auto solution = pouhydro::solve_riemann(config.left, config.right, config.gamma);
      if (out.empty()) {
        pouhydro::write_reference_csv(std::cout, solution, riemann_t, config.x_min, config.x_max,
                                      samples, config.diaphragm);
      } else {
        std::ofstream file(out);
        if (!file) {
          std::cerr << "error: cannot open " << out << '\n';
          return 1;
        }
        pouhydro::write_reference_csv(file, solution, riemann_t, config.x_min, config.x_max,
                                      samples, config.diaphragm);
      }
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
