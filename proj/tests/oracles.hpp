/**
 * @file oracles.hpp
 * @brief Independent reference computations for the unit and acceptance tests.
 *
 * Nothing here calls into the library: each oracle re-derives its quantity
 * by a different route (truncated powers instead of Cox-de Boor, a dense KKT
 * solve instead of the moment matrix, plain bisection instead of Newton).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

/// Composite Simpson rule with `panels` panels per unit interval [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t panels) {
  const double h = (b - a) / static_cast<double>(panels);
  double sum = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double x0 = a + h * static_cast<double>(k);
    sum += f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h);
  }
  return sum * h / 6.0;
}

/// Central difference with step s.
inline double central_difference(const std::function<double(double)>& f, double x, double s) {
  return (f(x + s) - f(x - s)) / (2.0 * s);
}

/// Dense Gaussian elimination with partial pivoting; solves A x = b in place.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
        pivot = r;
      }
    }
    if (a[pivot][col] == 0.0) {
      throw std::runtime_error("singular system");
    }
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) {
        a[r][c] -= factor * a[col][c];
      }
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t c = k + 1; c < n; ++c) {
      s -= a[k][c] * x[c];
    }
    x[k] = s / a[k][k];
  }
  return x;
}

/// 1D C4 Wendland function, written out again.
inline double wendland(double q) {
  return q >= 1.0 ? 0.0 : std::pow(1.0 - q, 5) * (8.0 * q * q + 5.0 * q + 1.0);
}

/**
 * Backus-Gilbert shape values at x from the KKT system of
 *   minimise sum_j phi_j^2 / w_j  subject to  sum_j phi_j x_j^a = x^a, a <= degree,
 * over the nodes with positive weight. Returns phi for every node (zero
 * outside the weight supports). Monomials are centred at x for conditioning.
 */
inline std::vector<double> mls_kkt(const std::vector<double>& nodes,
                                   const std::vector<double>& radii, int degree, double x) {
  std::vector<std::size_t> active;
  std::vector<double> w;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double q = std::abs(x - nodes[j]) / radii[j];
    if (q < 1.0) {
      active.push_back(j);
      w.push_back(wendland(q));
    }
  }
  const std::size_t n = active.size();
  const std::size_t m = static_cast<std::size_t>(degree) + 1;
  // Unknowns: phi (n), lambda (m). Stationarity: 2 phi_j / w_j + sum_a lambda_a p_a(x_j) = 0.
  std::vector<std::vector<double>> a(n + m, std::vector<double>(n + m, 0.0));
  std::vector<double> b(n + m, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    a[k][k] = 2.0 / w[k];
    double p = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
      a[k][n + r] = p;
      a[n + r][k] = p;
      p *= nodes[active[k]] - x;
    }
  }
  b[n] = 1.0; // centred monomials evaluate to (1, 0, 0, ...) at x
  const auto sol = solve_dense(a, b);
  std::vector<double> phi(nodes.size(), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    phi[active[k]] = sol[k];
  }
  return phi;
}

/**
 * Normalised cubic B-spline on five distinct knots t0 < ... < t4 through
 * the truncated-power divided difference
 *   N(x) = (t4 - t0) [t0, ..., t4] (. - x)^3_+ .
 */
inline double bspline_divided_difference(const double* t, double x) {
  double d[5];
  for (int k = 0; k < 5; ++k) {
    const double u = t[k] - x;
    d[k] = u > 0.0 ? u * u * u : 0.0;
  }
  for (int level = 1; level <= 4; ++level) {
    for (int k = 0; k + level <= 4; ++k) {
      d[k] = (d[k + 1] - d[k]) / (t[k + level] - t[k]);
    }
  }
  return (t[4] - t[0]) * d[0];
}

struct Star {
  double p = 0.0;
  double v = 0.0;
  double rho_left = 0.0;
  double rho_right = 0.0;
};

/// Star state of an ideal-gas Riemann problem by plain bisection on the
/// pressure function (no Newton steps, no initial guess heuristics).
inline Star riemann_bisection(double pl, double rl, double vl, double pr, double rr, double vr,
                              double g) {
  auto branch = [g](double p, double pk, double rk) {
    const double ck = std::sqrt(g * pk / rk);
    if (p > pk) {
      const double ak = 2.0 / ((g + 1.0) * rk);
      const double bk = (g - 1.0) / (g + 1.0) * pk;
      return (p - pk) * std::sqrt(ak / (p + bk));
    }
    return 2.0 * ck / (g - 1.0) * (std::pow(p / pk, (g - 1.0) / (2.0 * g)) - 1.0);
  };
  auto f = [&](double p) { return branch(p, pl, rl) + branch(p, pr, rr) + (vr - vl); };
  double lo = 1e-14;
  double hi = 10.0 * std::max(pl, pr);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  Star s;
  s.p = 0.5 * (lo + hi);
  s.v = 0.5 * (vl + vr) + 0.5 * (branch(s.p, pr, rr) - branch(s.p, pl, rl));
  auto star_density = [g](double p, double pk, double rk) {
    if (p > pk) {
      const double r = (g - 1.0) / (g + 1.0);
      return rk * (p / pk + r) / (r * p / pk + 1.0);
    }
    return rk * std::pow(p / pk, 1.0 / g);
  };
  s.rho_left = star_density(s.p, pl, rl);
  s.rho_right = star_density(s.p, pr, rr);
  return s;
}

/// Sorted random nodes on [0, 1] with spacing at least min_gap times the mean.
inline std::vector<double> random_nodes(std::size_t n, unsigned seed, double min_gap = 0.3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(min_gap, 1.0);
  std::vector<double> gaps(n - 1);
  double total = 0.0;
  for (auto& g : gaps) {
    g = u(rng);
    total += g;
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    x[i] = x[i - 1] + gaps[i - 1] / total;
  }
  x[n - 1] = 1.0;
  return x;
}

/// Smoothing lengths h_j = factor * (largest gap adjacent to node j).
inline std::vector<double> local_h(const std::vector<double>& x, double factor) {
  std::vector<double> h(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    double gap = 0.0;
    if (j > 0) {
      gap = std::max(gap, x[j] - x[j - 1]);
    }
    if (j + 1 < x.size()) {
      gap = std::max(gap, x[j + 1] - x[j]);
    }
    h[j] = factor * gap;
  }
  return h;
}

} // namespace oracle
