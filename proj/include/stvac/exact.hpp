#pragma once

#include "stvac/stationary.hpp"

namespace stvac {

// Closed-form stationary vacuum data on a caller-supplied chart.

// V = 1, theta = 0, flat g+ (any chart with Cartesian coordinates)
StationaryMetric minkowski(const Chart& chart);
// V = e^r, g+ = dr^2 + e^{2r} (dy^2 + ...), Lambda = -n(n-1)/2; coordinate 0 is r
StationaryMetric anti_de_sitter(const Chart& chart);
// n = 3 exterior: V^2 = 1 - 2m/rho, g+ = V^-2 drho^2 + rho^2 (dth^2 + sin^2 th dph^2)
StationaryMetric schwarzschild(const Chart& chart, double mass);

// hyperbolic metric dr^2 + e^{2r} delta on a chart whose coordinate 0 is r
MetricField hyperbolic_metric(const Chart& chart);
MetricField flat_metric(const Chart& chart);

}  // namespace stvac
