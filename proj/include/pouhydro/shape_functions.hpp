/**
 * @file shape_functions.hpp
 * @brief Partition-of-unity shape functions evaluated on a 1D node set.
 *
 * Three families are provided:
 *  - SPH kernel shapes (m_j/rho_j) W(|x - x_j|, h), which are not a partition
 *    of unity;
 *  - moving least-squares shapes in Backus-Gilbert form, reproducing
 *    polynomials up to a chosen degree, with exact analytic gradients;
 *  - cubic B-splines on the nodes as knots (clamped at both ends), the 1D
 *    discrete bi-Laplacian of |x|^3.
 *
 * Every family produces a ShapeTable holding phi_j(x_i), d(phi_j)/dx(x_i)
 * and the shape integrals over the node span.
 */
#pragma once

#include "pouhydro/kernels.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace pouhydro {

enum class ShapeBackend { sph, mls, bspline };

const char* to_string(ShapeBackend backend);

/// Sorted node positions and per-node smoothing lengths.
struct NodeSet {
  std::vector<double> positions;
  std::vector<double> smoothing_lengths;

  std::size_t size() const { return positions.size(); }
};

/// Throws IllPosedGeometry unless positions are strictly increasing (or just
/// non-decreasing when allow_coincident is set), and DomainError if a
/// smoothing length is not positive (when check_h is set).
void validate_nodes(const NodeSet& nodes, bool check_h, bool allow_coincident = false);

/// Half-open index range [first, last) of sorted positions strictly inside
/// (center - radius, center + radius).
std::pair<std::size_t, std::size_t> support_window(std::span<const double> positions,
                                                   double center, double radius);

/**
 * @brief Evaluated shape functions for one configuration.
 *
 * Logically an N x N table with entry (i, j) = phi_j(x_i). Rows are stored as
 * contiguous column bands; entries outside a band are exactly zero.
 */
class ShapeTable {
public:
  ShapeTable() = default;
  ShapeTable(ShapeBackend backend, std::size_t n);

  ShapeBackend backend() const { return backend_; }
  std::size_t size() const { return n_; }

  /// Appends the next row. Rows must be added in order 0, 1, ..., N-1.
  void append_row(std::size_t first_column, std::span<const double> values,
                  std::span<const double> gradients);

  std::size_t row_first(std::size_t i) const { return first_[i]; }
  std::size_t row_end(std::size_t i) const {
    return first_[i] + (offset_[i + 1] - offset_[i]);
  }
  std::span<const double> row_values(std::size_t i) const;
  std::span<const double> row_gradients(std::size_t i) const;

  /// phi_j(x_i)
  double value(std::size_t i, std::size_t j) const;
  /// d(phi_j)/dx at x_i
  double gradient(std::size_t i, std::size_t j) const;

  bool complete() const { return offset_.size() == n_ + 1; }

  /// Integral of phi_j over the node span, one per node.
  const std::vector<double>& volumes() const { return volumes_; }
  bool has_volumes() const { return volumes_.size() == n_ && n_ > 0; }
  void set_volumes(std::vector<double> volumes);

private:
  ShapeBackend backend_ = ShapeBackend::sph;
  std::size_t n_ = 0;
  std::vector<std::size_t> first_;
  std::vector<std::size_t> offset_{0};
  std::vector<double> values_;
  std::vector<double> gradients_;
  std::vector<double> volumes_;
};

/// Shape functions that are nonzero at a single point, as a contiguous band
/// of node indices starting at `first`.
struct PointShapes {
  std::size_t first = 0;
  std::vector<double> values;
  std::vector<double> gradients;
};

/// values(i,j) = (m_j/rho_j) W(|x_i - x_j|, h_i) with the cubic spline kernel;
/// volumes(j) = m_j / rho_j.
ShapeTable sph_shapes(const NodeSet& nodes, std::span<const double> masses,
                      std::span<const double> densities);

/**
 * @brief Backus-Gilbert moving least-squares shape functions.
 *
 * At a point x, phi_j(x) minimises sum_j phi_j^2 / w_j(x) subject to exact
 * reproduction of polynomials up to `degree`, with w_j(x) = w(|x - x_j| / h_j).
 * The solution is phi_j(x) = w_j(x) p(x_j)^T M(x)^{-1} p(x) with the moment
 * matrix M(x) = sum_j w_j(x) p(x_j) p(x_j)^T. The monomial basis is centred at
 * x and scaled by the local support radius before assembly.
 */
class MlsShapes {
public:
  MlsShapes(NodeSet nodes, int degree, KernelSpec weight);

  const NodeSet& nodes() const { return nodes_; }
  int degree() const { return degree_; }

  PointShapes evaluate(double x) const;

  /// Integrals of phi_j over [x_0, x_{N-1}] by 5-point Gauss-Legendre on the
  /// panels between consecutive nodes and weight-support edges.
  std::vector<double> integrals() const;

  ShapeTable table(bool with_volumes = true) const;

private:
  void evaluate_into(double x, std::size_t node_hint, PointShapes& out) const;

  NodeSet nodes_;
  int degree_;
  KernelSpec weight_;
  std::vector<double> radius_;
  double max_radius_ = 0.0;
};

ShapeTable mls_shapes(const NodeSet& nodes, int degree, KernelSpec weight,
                      bool with_volumes = true);

/**
 * @brief Cubic B-spline shape functions with the nodes as knots.
 *
 * Spline j lives on the knot window {x_{j-2}, ..., x_{j+2}}. The knot vector
 * is clamped (multiplicity four) at x_0 and x_{N-1}; to keep exactly N
 * splines the nodes x_1 and x_{N-2} are not knots.
 */
class BsplineShapes {
public:
  explicit BsplineShapes(std::vector<double> positions);

  std::size_t size() const { return positions_.size(); }
  const std::vector<double>& knots() const { return knots_; }

  /// Nonzero splines at x; empty outside [x_0, x_{N-1}].
  PointShapes evaluate(double x) const;

  /// Closed form (t_{j+4} - t_j) / 4.
  std::vector<double> integrals() const;

  ShapeTable table() const;

private:
  void evaluate_into(double x, PointShapes& out) const;

  std::vector<double> positions_;
  std::vector<double> knots_;
};

ShapeTable bspline_shapes(const NodeSet& nodes);

/// sum_j f(x_j) phi_j(x_row)
double quasi_interpolate(const ShapeTable& table, std::span<const double> nodal_values,
                         std::size_t row);

} // namespace pouhydro
