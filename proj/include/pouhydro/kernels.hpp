/**
 * @file kernels.hpp
 * @brief Univariate smoothing kernels and MLS weight functions in 1D.
 *
 * The cubic spline is the usual M4 SPH kernel with support 2h, normalised so
 * that it integrates to one on the line. The Wendland function is the 1D C4
 * member (1-q)^5_+ (8q^2 + 5q + 1) with support q < 1; it is left
 * unnormalised because it is only ever used as an MLS weight.
 */
#pragma once

namespace pouhydro {

enum class KernelKind { cubic_spline, wendland_c4 };

struct KernelSpec {
  KernelKind kind = KernelKind::wendland_c4;
  /// Support radius measured in smoothing lengths; the weight is evaluated at
  /// q = r / (radius_in_h h).
  double radius_in_h = 1.0;
  /// Constant factor on the weight. MLS shapes do not depend on it.
  double scale = 1.0;

  double support_radius_in_h() const { return radius_in_h; }
  /// Support of the weight in its own variable q (2 for the cubic spline,
  /// 1 for Wendland).
  double natural_support() const { return kind == KernelKind::cubic_spline ? 2.0 : 1.0; }

  static constexpr KernelSpec cubic_spline() { return {KernelKind::cubic_spline, 2.0, 1.0}; }
  static constexpr KernelSpec wendland_c4(double radius_in_h = 1.0) {
    return {KernelKind::wendland_c4, radius_in_h, 1.0};
  }
};

const char* to_string(KernelKind kind);

/// W(r, h) for the normalised 1D cubic spline, sigma = 2/(3h).
double cubic_spline_w(double r, double h);

/// dW/dr of the cubic spline.
double cubic_spline_dw(double r, double h);

/// Gradient of W(|dx|, h) with respect to the first point, dx = x_i - x_j.
double cubic_spline_gradient(double dx, double h);

/// 1D Wendland C4 function of q = r/h (unnormalised, equals 1 at q = 0).
double wendland_c4(double q);
double wendland_c4_d(double q);

/// Dimensionless weight scale * w(q) of a kernel family, with w(0) of order
/// one. Used by the MLS construction where only the shape of w matters.
double weight_value(const KernelSpec& spec, double q);
double weight_derivative(const KernelSpec& spec, double q);

} // namespace pouhydro
