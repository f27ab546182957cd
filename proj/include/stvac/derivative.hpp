#pragma once

#include <span>
#include <vector>

#include "stvac/grid.hpp"

namespace stvac {

// Fornberg's recursion: weights w[k][j] for the k-th derivative at x0 from
// samples at x[j], k = 0..m.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int m);

// Differentiation operator (first or second derivative) along one axis:
// spectral on periodic axes, order-p finite differences on interval axes with
// one-sided stencils of the same order near the ends.
class AxisOperator {
 public:
  AxisOperator(const Axis& axis, int order, int deriv = 1);
  int size() const { return n_; }
  // row i: out_i = sum_{j in [first_i, first_i + width_i)} w_ij f_j
  int first(int i) const { return first_[i]; }
  int width(int i) const { return width_[i]; }
  const double* weights(int i) const { return w_.data() + offset_[i]; }

 private:
  int n_ = 0;
  std::vector<int> first_, width_;
  std::vector<std::size_t> offset_;
  std::vector<double> w_;
};

// out = d f / d(axis) at every node
void differentiate(const Grid& grid, int axis, std::span<const double> f, std::span<double> out);
std::vector<double> differentiate(const Grid& grid, int axis, std::span<const double> f);
// d^2 f / d(axis)^2 with a direct stencil
void differentiate2(const Grid& grid, int axis, std::span<const double> f, std::span<double> out);

// Lagrange interpolation of a line sample at fractional index t, using
// `points` nodes centred on t (clamped at the ends).
double interpolate_line(std::span<const double> values, double t, int points);

}  // namespace stvac
