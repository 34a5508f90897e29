#include "pouhydro/kernels.hpp"

#include "pouhydro/errors.hpp"

#include <cmath>

namespace pouhydro {

const char* to_string(KernelKind kind) {
  switch (kind) {
  case KernelKind::cubic_spline:
    return "cubic_spline";
  case KernelKind::wendland_c4:
    return "wendland_c4";
  }
  return "unknown";
}

namespace {

void require_positive_h(double h) {
  if (!(h > 0.0)) {
    throw DomainError("smoothing length must be positive");
  }
}

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0)) {
    throw DomainError(std::string(name) + " must be non-negative");
  }
}

// Unnormalised M4 shape in q, support [0, 2).
double m4_shape(double q) {
  if (q < 1.0) {
    return 1.0 - 1.5 * q * q + 0.75 * q * q * q;
  }
  if (q < 2.0) {
    const double t = 2.0 - q;
    return 0.25 * t * t * t;
  }
  return 0.0;
}

double m4_shape_d(double q) {
  if (q < 1.0) {
    return -3.0 * q + 2.25 * q * q;
  }
  if (q < 2.0) {
    const double t = 2.0 - q;
    return -0.75 * t * t;
  }
  return 0.0;
}

} // namespace

double cubic_spline_w(double r, double h) {
  require_positive_h(h);
  require_nonnegative(r, "distance");
  const double sigma = 2.0 / (3.0 * h);
  return sigma * m4_shape(r / h);
}

double cubic_spline_dw(double r, double h) {
  require_positive_h(h);
  require_nonnegative(r, "distance");
  const double sigma = 2.0 / (3.0 * h);
  return sigma * m4_shape_d(r / h) / h;
}

double cubic_spline_gradient(double dx, double h) {
  const double dw = cubic_spline_dw(std::abs(dx), h);
  if (dx > 0.0) {
    return dw;
  }
  if (dx < 0.0) {
    return -dw;
  }
  return 0.0;
}

double wendland_c4(double q) {
  require_nonnegative(q, "q");
  if (q >= 1.0) {
    return 0.0;
  }
  const double t = 1.0 - q;
  const double t2 = t * t;
  return t2 * t2 * t * (8.0 * q * q + 5.0 * q + 1.0);
}

double wendland_c4_d(double q) {
  require_nonnegative(q, "q");
  if (q >= 1.0) {
    return 0.0;
  }
  // d/dq (1-q)^5 (8q^2+5q+1) = -14 q (1-q)^4 (4q+1)
  const double t = 1.0 - q;
  const double t2 = t * t;
  return -14.0 * q * t2 * t2 * (4.0 * q + 1.0);
}

double weight_value(const KernelSpec& spec, double q) {
  require_nonnegative(q, "q");
  return spec.scale * (spec.kind == KernelKind::cubic_spline ? m4_shape(q) : wendland_c4(q));
}

double weight_derivative(const KernelSpec& spec, double q) {
  require_nonnegative(q, "q");
  return spec.scale * (spec.kind == KernelKind::cubic_spline ? m4_shape_d(q) : wendland_c4_d(q));
}

} // namespace pouhydro
