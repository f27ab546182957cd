#pragma once

#include <functional>
#include <vector>

#include "stvac/grid.hpp"
#include "stvac/tensor.hpp"

namespace stvac {

// Weights of a composite rule on one axis. Periodic axes use the trapezoid
// rule; interval axes use 5-point Newton-Cotes panels, the last panel
// integrating the degree-4 interpolant over the leftover intervals.
std::vector<double> axis_weights(const Axis& a);

// which end of the radial axis the weighted integrand has to vanish at
enum class DecayEnd { start, end };

struct WeightedIntegral {
  double value = 0.0;
  double log_value = 0.0;  // -inf when the integral is zero
  std::vector<double> slices;  // per radial node: tangential integral times weight, scaled by exp(-log_max)
  double log_max = 0.0;
};

// Integral of a non-negative scalar density times exp(log_weight(radius)) over
// the grid. Summation is in log space; terms below 1e-300 of the largest one
// are dropped. Throws DivergenceError when the weighted slice integral at the
// decay end exceeds `decay_ratio` times its maximum. Nodes where the weight
// is infinite contribute nothing; the decay check covers them.
WeightedIntegral weighted_integral(const TensorField& density, int radial_axis, const std::function<double(double)>& log_weight,
                                   DecayEnd decay, double decay_ratio = 1e-8);

}  // namespace stvac
