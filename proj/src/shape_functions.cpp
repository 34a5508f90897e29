#include "pouhydro/shape_functions.hpp"

#include "pouhydro/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace pouhydro {

const char* to_string(ShapeBackend backend) {
  switch (backend) {
  case ShapeBackend::sph:
    return "sph";
  case ShapeBackend::mls:
    return "mls";
  case ShapeBackend::bspline:
    return "bspline";
  }
  return "unknown";
}

void validate_nodes(const NodeSet& nodes, bool check_h, bool allow_coincident) {
  const auto& x = nodes.positions;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw IllPosedGeometry("non-finite node position", i);
    }
    if (i > 0 && (allow_coincident ? x[i] < x[i - 1] : !(x[i] > x[i - 1]))) {
      throw IllPosedGeometry("node positions must be sorted", i);
    }
  }
  if (check_h) {
    if (nodes.smoothing_lengths.size() != x.size()) {
      throw UsageError("smoothing_lengths must have one entry per node");
    }
    for (double h : nodes.smoothing_lengths) {
      if (!(h > 0.0)) {
        throw DomainError("smoothing length must be positive");
      }
    }
  }
}

std::pair<std::size_t, std::size_t> support_window(std::span<const double> positions,
                                                   double center, double radius) {
  const auto lo = std::upper_bound(positions.begin(), positions.end(), center - radius);
  const auto hi = std::lower_bound(lo, positions.end(), center + radius);
  return {static_cast<std::size_t>(lo - positions.begin()),
          static_cast<std::size_t>(hi - positions.begin())};
}

// ---------------------------------------------------------------------------
// ShapeTable

ShapeTable::ShapeTable(ShapeBackend backend, std::size_t n) : backend_(backend), n_(n) {
  first_.reserve(n);
  offset_.reserve(n + 1);
}

void ShapeTable::append_row(std::size_t first_column, std::span<const double> values,
                            std::span<const double> gradients) {
  if (first_.size() >= n_) {
    throw UsageError("ShapeTable: too many rows");
  }
  if (values.size() != gradients.size() || first_column + values.size() > n_) {
    throw UsageError("ShapeTable: row band out of range");
  }
  first_.push_back(first_column);
  values_.insert(values_.end(), values.begin(), values.end());
  gradients_.insert(gradients_.end(), gradients.begin(), gradients.end());
  offset_.push_back(values_.size());
}

std::span<const double> ShapeTable::row_values(std::size_t i) const {
  return {values_.data() + offset_[i], offset_[i + 1] - offset_[i]};
}

std::span<const double> ShapeTable::row_gradients(std::size_t i) const {
  return {gradients_.data() + offset_[i], offset_[i + 1] - offset_[i]};
}

double ShapeTable::value(std::size_t i, std::size_t j) const {
  if (j < row_first(i) || j >= row_end(i)) {
    return 0.0;
  }
  return values_[offset_[i] + (j - first_[i])];
}

double ShapeTable::gradient(std::size_t i, std::size_t j) const {
  if (j < row_first(i) || j >= row_end(i)) {
    return 0.0;
  }
  return gradients_[offset_[i] + (j - first_[i])];
}

void ShapeTable::set_volumes(std::vector<double> volumes) {
  if (volumes.size() != n_) {
    throw UsageError("ShapeTable: volumes size mismatch");
  }
  volumes_ = std::move(volumes);
}

// ---------------------------------------------------------------------------
// SPH

ShapeTable sph_shapes(const NodeSet& nodes, std::span<const double> masses,
                      std::span<const double> densities) {
  const std::size_t n = nodes.size();
  if (masses.size() != n || densities.size() != n) {
    throw UsageError("sph_shapes: masses/densities size mismatch");
  }
  // Kernel sums do not care if two particles meet.
  validate_nodes(nodes, true, true);
  for (double rho : densities) {
    if (!(rho > 0.0)) {
      throw DomainError("sph_shapes: density must be positive");
    }
  }

  const auto& x = nodes.positions;
  const KernelSpec kernel = KernelSpec::cubic_spline();
  ShapeTable table(ShapeBackend::sph, n);
  std::vector<double> values;
  std::vector<double> gradients;
  for (std::size_t i = 0; i < n; ++i) {
    const double h = nodes.smoothing_lengths[i];
    const auto [lo, hi] = support_window(x, x[i], kernel.support_radius_in_h() * h);
    values.clear();
    gradients.clear();
    for (std::size_t j = lo; j < hi; ++j) {
      const double volume = masses[j] / densities[j];
      const double dx = x[i] - x[j];
      values.push_back(volume * cubic_spline_w(std::abs(dx), h));
      gradients.push_back(volume * cubic_spline_gradient(dx, h));
    }
    table.append_row(lo, values, gradients);
  }

  std::vector<double> volumes(n);
  for (std::size_t j = 0; j < n; ++j) {
    volumes[j] = masses[j] / densities[j];
  }
  table.set_volumes(std::move(volumes));
  return table;
}

// ---------------------------------------------------------------------------
// MLS

namespace {

constexpr int kMaxMlsDegree = 3;
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0,
                                  kMaxMlsDegree + 1, kMaxMlsDegree + 1>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxMlsDegree + 1, 1>;

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
    0.5384693101056830910363144, 0.9061798459386639927976269};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561890875142640, 0.4786286704993664680412915,
    0.5688888888888888888888889, 0.4786286704993664680412915,
    0.2369268850561890875142640};

std::size_t nearest_node(std::span<const double> x, double at) {
  const auto it = std::lower_bound(x.begin(), x.end(), at);
  if (it == x.begin()) {
    return 0;
  }
  if (it == x.end()) {
    return x.size() - 1;
  }
  const auto i = static_cast<std::size_t>(it - x.begin());
  return (at - x[i - 1] <= x[i] - at) ? i - 1 : i;
}

} // namespace

MlsShapes::MlsShapes(NodeSet nodes, int degree, KernelSpec weight)
    : nodes_(std::move(nodes)), degree_(degree), weight_(weight) {
  if (degree_ < 0 || degree_ > kMaxMlsDegree) {
    throw DomainError("MLS degree must be in [0, 3]");
  }
  validate_nodes(nodes_, true);
  if (nodes_.size() == 0) {
    throw UsageError("MLS shapes need at least one node");
  }
  radius_.resize(nodes_.size());
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    radius_[j] = weight_.support_radius_in_h() * nodes_.smoothing_lengths[j];
    max_radius_ = std::max(max_radius_, radius_[j]);
  }
}

void MlsShapes::evaluate_into(double x, std::size_t node_hint, PointShapes& out) const {
  const auto& xs = nodes_.positions;
  const auto [lo, hi] = support_window(xs, x, max_radius_);

  // Band of nodes with a positive weight at x.
  std::size_t first = hi;
  std::size_t last = lo;
  std::size_t active = 0;
  double scale = 0.0;
  for (std::size_t j = lo; j < hi; ++j) {
    if (std::abs(x - xs[j]) < radius_[j]) {
      first = std::min(first, j);
      last = j;
      ++active;
      scale = std::max(scale, radius_[j]);
    }
  }
  const int basis = degree_ + 1;
  if (active < static_cast<std::size_t>(basis)) {
    throw IllPosedGeometry("MLS: fewer nodes in support than basis functions", node_hint);
  }

  const std::size_t band = last - first + 1;
  out.first = first;
  out.values.assign(band, 0.0);
  out.gradients.assign(band, 0.0);

  // Weights and their x-derivatives; reuse the output buffers as scratch.
  std::vector<double>& w = out.values;
  std::vector<double>& dw = out.gradients;
  for (std::size_t k = 0; k < band; ++k) {
    const std::size_t j = first + k;
    const double dx = x - xs[j];
    // Length that maps the support radius onto the weight's own support.
    const double stretch = radius_[j] / weight_.natural_support();
    const double q = std::abs(dx) / stretch;
    w[k] = weight_value(weight_, q);
    const double sign = dx > 0.0 ? 1.0 : (dx < 0.0 ? -1.0 : 0.0);
    dw[k] = weight_derivative(weight_, q) * sign / stretch;
  }

  // Basis centred at x and scaled by the support radius.
  auto basis_at = [&](std::size_t j) {
    SmallVector p(basis);
    const double t = (xs[j] - x) / scale;
    double power = 1.0;
    for (int a = 0; a < basis; ++a) {
      p(a) = power;
      power *= t;
    }
    return p;
  };

  SmallMatrix moment = SmallMatrix::Zero(basis, basis);
  SmallMatrix moment_d = SmallMatrix::Zero(basis, basis);
  for (std::size_t k = 0; k < band; ++k) {
    if (w[k] == 0.0 && dw[k] == 0.0) {
      continue;
    }
    const SmallVector p = basis_at(first + k);
    moment.noalias() += w[k] * p * p.transpose();
    moment_d.noalias() += dw[k] * p * p.transpose();
  }

  const Eigen::LDLT<SmallMatrix> ldlt(moment);
  const auto diag = ldlt.vectorD();
  const double dmax = diag.cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || !(diag.minCoeff() > 1e-13 * dmax)) {
    throw IllPosedGeometry("MLS: singular moment matrix", node_hint);
  }

  // phi_j = w_j p_j . a with M a = p(0); the x-derivative follows from
  // d(M^{-1}) = -M^{-1} dM M^{-1} and dp(0)/dx = e_1 / scale.
  SmallVector e0 = SmallVector::Zero(basis);
  e0(0) = 1.0;
  const SmallVector a = ldlt.solve(e0);
  SmallVector rhs = -moment_d * a;
  if (basis > 1) {
    rhs(1) += 1.0 / scale;
  }
  const SmallVector b = ldlt.solve(rhs);

  for (std::size_t k = 0; k < band; ++k) {
    const double wk = w[k];
    const double dwk = dw[k];
    if (wk == 0.0 && dwk == 0.0) {
      continue;
    }
    const SmallVector p = basis_at(first + k);
    const double pa = p.dot(a);
    const double pb = p.dot(b);
    out.values[k] = wk * pa;
    out.gradients[k] = dwk * pa + wk * pb;
  }
}

PointShapes MlsShapes::evaluate(double x) const {
  PointShapes out;
  evaluate_into(x, nearest_node(nodes_.positions, x), out);
  return out;
}

std::vector<double> MlsShapes::integrals() const {
  const auto& xs = nodes_.positions;
  const std::size_t n = xs.size();
  std::vector<double> result(n, 0.0);
  if (n < 2) {
    return result;
  }
  const double a = xs.front();
  const double b = xs.back();

  std::vector<double> breaks;
  breaks.reserve(3 * n);
  for (std::size_t j = 0; j < n; ++j) {
    breaks.push_back(xs[j]);
    for (double edge : {xs[j] - radius_[j], xs[j] + radius_[j]}) {
      if (edge > a && edge < b) {
        breaks.push_back(edge);
      }
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  PointShapes shapes;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double left = breaks[p];
    const double right = breaks[p + 1];
    const double half = 0.5 * (right - left);
    const double mid = 0.5 * (right + left);
    if (!(half > 0.0)) {
      continue;
    }
    for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
      const double xq = mid + half * kGaussNodes[g];
      evaluate_into(xq, nearest_node(xs, xq), shapes);
      const double wq = half * kGaussWeights[g];
      for (std::size_t k = 0; k < shapes.values.size(); ++k) {
        result[shapes.first + k] += wq * shapes.values[k];
      }
    }
  }
  return result;
}

ShapeTable MlsShapes::table(bool with_volumes) const {
  const std::size_t n = nodes_.size();
  ShapeTable table(ShapeBackend::mls, n);
  PointShapes shapes;
  for (std::size_t i = 0; i < n; ++i) {
    evaluate_into(nodes_.positions[i], i, shapes);
    table.append_row(shapes.first, shapes.values, shapes.gradients);
  }
  if (with_volumes) {
    table.set_volumes(integrals());
  }
  return table;
}

ShapeTable mls_shapes(const NodeSet& nodes, int degree, KernelSpec weight,
                      bool with_volumes) {
  return MlsShapes(nodes, degree, weight).table(with_volumes);
}

// ---------------------------------------------------------------------------
// Cubic B-splines

namespace {
constexpr int kOrder = 4;
constexpr int kDegree = kOrder - 1;
} // namespace

BsplineShapes::BsplineShapes(std::vector<double> positions) : positions_(std::move(positions)) {
  const std::size_t n = positions_.size();
  if (n < 5) {
    throw DomainError("B-spline shapes need at least 5 nodes");
  }
  validate_nodes(NodeSet{positions_, {}}, false);

  knots_.resize(n + kOrder);
  for (int k = 0; k < kOrder; ++k) {
    knots_[k] = positions_.front();
    knots_[n + k] = positions_.back();
  }
  for (std::size_t k = kOrder; k < n; ++k) {
    knots_[k] = positions_[k - 2];
  }
}

void BsplineShapes::evaluate_into(double x, PointShapes& out) const {
  const std::size_t n = positions_.size();
  out.values.clear();
  out.gradients.clear();
  out.first = 0;
  if (x < positions_.front() || x > positions_.back()) {
    return;
  }
  const auto& t = knots_;

  // Knot span s with t[s] <= x < t[s+1], s in [degree, n-1].
  std::size_t s;
  if (x >= t[n]) {
    s = n - 1;
  } else {
    const auto it = std::upper_bound(t.begin() + kDegree, t.begin() + n + 1, x);
    s = static_cast<std::size_t>(it - t.begin()) - 1;
  }

  // Cox-de Boor triangle; ndu[r][j] (r <= j) holds N_{s-j+r, j+1}.
  std::array<std::array<double, kOrder>, kOrder> ndu{};
  std::array<double, kOrder> left{};
  std::array<double, kOrder> right{};
  ndu[0][0] = 1.0;
  for (int j = 1; j <= kDegree; ++j) {
    left[j] = x - t[s + 1 - j];
    right[j] = t[s + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double denom = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / denom;
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }

  out.first = s - kDegree;
  out.values.resize(kOrder);
  out.gradients.resize(kOrder);
  for (int r = 0; r <= kDegree; ++r) {
    const std::size_t i = s - kDegree + r;
    out.values[r] = ndu[r][kDegree];
    // N'_{i,4} = 3 N_{i,3}/(t_{i+3}-t_i) - 3 N_{i+1,3}/(t_{i+4}-t_{i+1})
    double d = 0.0;
    if (r >= 1) {
      const double span = t[i + kDegree] - t[i];
      if (span > 0.0) {
        d += kDegree * ndu[r - 1][kDegree - 1] / span;
      }
    }
    if (r <= kDegree - 1) {
      const double span = t[i + kOrder] - t[i + 1];
      if (span > 0.0) {
        d -= kDegree * ndu[r][kDegree - 1] / span;
      }
    }
    out.gradients[r] = d;
  }
}

PointShapes BsplineShapes::evaluate(double x) const {
  PointShapes out;
  evaluate_into(x, out);
  return out;
}

std::vector<double> BsplineShapes::integrals() const {
  const std::size_t n = positions_.size();
  std::vector<double> result(n);
  for (std::size_t j = 0; j < n; ++j) {
    result[j] = (knots_[j + kOrder] - knots_[j]) / kOrder;
  }
  return result;
}

ShapeTable BsplineShapes::table() const {
  const std::size_t n = positions_.size();
  ShapeTable table(ShapeBackend::bspline, n);
  PointShapes shapes;
  for (std::size_t i = 0; i < n; ++i) {
    evaluate_into(positions_[i], shapes);
    table.append_row(shapes.first, shapes.values, shapes.gradients);
  }
  table.set_volumes(integrals());
  return table;
}

ShapeTable bspline_shapes(const NodeSet& nodes) {
  return BsplineShapes(nodes.positions).table();
}

double quasi_interpolate(const ShapeTable& table, std::span<const double> nodal_values,
                         std::size_t row) {
  if (nodal_values.size() != table.size()) {
    throw UsageError("quasi_interpolate: nodal_values length must equal table size");
  }
  if (row >= table.size()) {
    throw UsageError("quasi_interpolate: row out of range");
  }
  const auto values = table.row_values(row);
  const std::size_t first = table.row_first(row);
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    sum += nodal_values[first + k] * values[k];
  }
  return sum;
}

} // namespace pouhydro
