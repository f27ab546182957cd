#include "stvac/derivative.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stvac/error.hpp"

namespace stvac {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0, c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

AxisOperator::AxisOperator(const Axis& axis, int order, int deriv) : n_(axis.count) {
  if (deriv < 1 || deriv > 2) throw InputError("only first and second derivatives are supported");
  first_.resize(n_);
  width_.resize(n_);
  offset_.resize(n_);
  if (axis.topology == Topology::periodic) {
    const double length = axis.spacing * n_;
    const double scale = 2.0 * std::numbers::pi / length;
    const double step = 2.0 * std::numbers::pi / n_;
    std::vector<double> d1(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        if (i == j) continue;
        const int k = i - j;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        const double half = 0.5 * k * step;
        const double v = (n_ % 2 == 0) ? 0.5 * sgn / std::tan(half) : 0.5 * sgn / std::sin(half);
        d1[static_cast<std::size_t>(i) * n_ + j] = v * scale;
      }
    if (deriv == 1) {
      w_ = std::move(d1);
    } else {
      w_.assign(d1.size(), 0.0);
      for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) {
          const double a = d1[static_cast<std::size_t>(i) * n_ + k];
          if (a == 0.0) continue;
          for (int j = 0; j < n_; ++j) w_[static_cast<std::size_t>(i) * n_ + j] += a * d1[static_cast<std::size_t>(k) * n_ + j];
        }
    }
    for (int i = 0; i < n_; ++i) {
      first_[i] = 0;
      width_[i] = n_;
      offset_[i] = static_cast<std::size_t>(i) * n_;
    }
    return;
  }
  // centred stencils in the interior, one-sided ones of the same order near the ends
  const int centred = order + 1 + (order % 2 == 0 ? 0 : 1);
  const int onesided = order + deriv;
  const double h = std::pow(axis.spacing, deriv);
  for (int i = 0; i < n_; ++i) {
    const int half = centred / 2;
    const bool inside = i >= half && i + half < n_;
    const int width = std::min(inside ? centred : onesided, n_);
    const int s = inside ? i - half : std::clamp(i - width / 2, 0, n_ - width);
    std::vector<double> x(width);
    for (int j = 0; j < width; ++j) x[j] = static_cast<double>(s + j - i);
    const auto c = fornberg_weights(0.0, x, deriv);
    first_[i] = s;
    width_[i] = width;
    offset_[i] = w_.size();
    for (int j = 0; j < width; ++j) w_.push_back(c[deriv][j] / h);
  }
}

namespace {

void apply_operator(const Grid& grid, int axis, const AxisOperator& op, std::span<const double> f, std::span<double> out) {
  if (f.size() != grid.size() || out.size() != grid.size()) throw InputError("differentiate: size mismatch");
  const std::size_t s = grid.stride(axis);
  const std::size_t n = static_cast<std::size_t>(grid.axis(axis).count);
  const std::size_t outer = grid.size() / (n * s);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* src = f.data() + o * n * s;
    double* dst = out.data() + o * n * s;
    for (std::size_t i = 0; i < n; ++i) {
      double* d = dst + i * s;
      std::fill(d, d + s, 0.0);
      const double* w = op.weights(static_cast<int>(i));
      const int j0 = op.first(static_cast<int>(i));
      const int wd = op.width(static_cast<int>(i));
      for (int j = 0; j < wd; ++j) {
        const double wj = w[j];
        if (wj == 0.0) continue;
        const double* sp = src + (j0 + j) * s;
        for (std::size_t k = 0; k < s; ++k) d[k] += wj * sp[k];
      }
    }
  }
}

}  // namespace

void differentiate(const Grid& grid, int axis, std::span<const double> f, std::span<double> out) {
  apply_operator(grid, axis, AxisOperator(grid.axis(axis), grid.fd_order(), 1), f, out);
}

void differentiate2(const Grid& grid, int axis, std::span<const double> f, std::span<double> out) {
  apply_operator(grid, axis, AxisOperator(grid.axis(axis), grid.fd_order(), 2), f, out);
}

std::vector<double> differentiate(const Grid& grid, int axis, std::span<const double> f) {
  std::vector<double> out(grid.size());
  differentiate(grid, axis, f, out);
  return out;
}

double interpolate_line(std::span<const double> values, double t, int points) {
  const int n = static_cast<int>(values.size());
  points = std::min(points, n);
  int s = static_cast<int>(std::floor(t)) - (points / 2 - 1);
  s = std::clamp(s, 0, n - points);
  double sum = 0.0;
  for (int j = 0; j < points; ++j) {
    double l = 1.0;
    for (int k = 0; k < points; ++k)
      if (k != j) l *= (t - (s + k)) / static_cast<double>(j - k);
    sum += l * values[s + j];
  }
  return sum;
}

}  // namespace stvac
