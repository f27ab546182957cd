#include "stvac/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "stvac/error.hpp"

namespace stvac {

namespace {

// weights of the degree-4 interpolant on nodes 0..4 (unit spacing) integrated over [a, b]
Eigen::Matrix<double, 5, 1> panel(double a, double b) {
  Eigen::Matrix<double, 5, 5> V;
  Eigen::Matrix<double, 5, 1> mom;
  for (int j = 0; j < 5; ++j) {
    for (int i = 0; i < 5; ++i) V(j, i) = std::pow(static_cast<double>(i), j);
    mom(j) = (std::pow(b, j + 1) - std::pow(a, j + 1)) / (j + 1);
  }
  return V.fullPivLu().solve(mom);
}

}  // namespace

std::vector<double> axis_weights(const Axis& a) {
  std::vector<double> w(a.count, 0.0);
  if (a.topology == Topology::periodic) {
    std::fill(w.begin(), w.end(), a.spacing);
    return w;
  }
  const int intervals = a.count - 1;
  if (intervals < 4) throw InputError("quadrature: an interval axis needs at least 5 nodes");
  const auto full = panel(0.0, 4.0);
  const int panels = intervals / 4;
  for (int p = 0; p < panels; ++p)
    for (int i = 0; i < 5; ++i) w[4 * p + i] += full(i) * a.spacing;
  const int rest = intervals - 4 * panels;
  if (rest > 0) {
    const auto tail = panel(4.0 - rest, 4.0);
    const int base = a.count - 5;
    for (int i = 0; i < 5; ++i) w[base + i] += tail(i) * a.spacing;
  }
  return w;
}

WeightedIntegral weighted_integral(const TensorField& density, int radial_axis, const std::function<double(double)>& log_weight,
                                   DecayEnd decay, double decay_ratio) {
  if (density.rank() != 0) throw InputError("weighted_integral: density must be a scalar field");
  const Grid& g = density.grid();
  if (radial_axis < 0 || radial_axis >= g.rank()) throw InputError("weighted_integral: radial axis out of range");
  const Axis& ax = g.axis(radial_axis);
  if (ax.topology != Topology::interval) throw InputError("weighted_integral: the radial axis must be an interval");

  std::vector<std::vector<double>> w(g.rank());
  for (int a = 0; a < g.rank(); ++a) w[a] = axis_weights(g.axis(a));

  // tangential integrals per radial node
  std::vector<double> slice(ax.count, 0.0);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double v = density.data()[n];
    if (!(v >= 0.0)) throw DomainError("weighted_integral: density is negative or not finite at node " + std::to_string(n));
    double wt = 1.0;
    for (int a = 0; a < g.rank(); ++a)
      if (a != radial_axis) wt *= w[a][g.index(n, a)];
    slice[g.index(n, radial_axis)] += wt * v;
  }

  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(ax.count, ninf);
  for (int i = 0; i < ax.count; ++i) {
    if (slice[i] == 0.0) continue;
    // a singular weight node contributes its limit, zero when the decay probe passes
    const double lw = log_weight(ax.coord(i));
    if (std::isfinite(lw)) logs[i] = std::log(slice[i]) + lw;
  }

  WeightedIntegral out;
  out.slices.assign(ax.count, 0.0);
  const double lmax = *std::max_element(logs.begin(), logs.end());
  if (lmax == ninf) {
    out.log_value = ninf;
    return out;
  }
  out.log_max = lmax;
  for (int i = 0; i < ax.count; ++i) out.slices[i] = std::exp(logs[i] - lmax);

  // the slice next to the decay end: the end node itself may be a zero of the weight
  const int probe = decay == DecayEnd::end ? ax.count - 1 : 1;
  if (out.slices[probe] > decay_ratio || out.slices[decay == DecayEnd::end ? ax.count - 1 : 0] > decay_ratio)
    throw DivergenceError("weighted_integral: weighted integrand does not decay toward " + ax.name + " = " +
                          std::to_string(decay == DecayEnd::end ? ax.end() : ax.origin) + " (relative size " +
                          std::to_string(std::max(out.slices[probe], out.slices[decay == DecayEnd::end ? ax.count - 1 : 0])) + ")");

  double sum = 0.0;
  for (int i = 0; i < ax.count; ++i)
    if (out.slices[i] >= 1e-300) sum += w[radial_axis][i] * out.slices[i];
  if (!(sum > 0.0)) {
    // cancellation in the end panels; fall back to the trapezoid weights
    sum = 0.0;
    for (int i = 0; i < ax.count; ++i) sum += ax.spacing * out.slices[i] * (i == 0 || i == ax.count - 1 ? 0.5 : 1.0);
  }
  out.log_value = lmax + std::log(sum);
  out.value = std::exp(out.log_value);
  return out;
}

}  // namespace stvac
