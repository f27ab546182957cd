#pragma once

#include "stvac/io.hpp"
#include "stvac/tensor.hpp"

namespace stvac {

// Einstein factor of a stationary vacuum metric on an n-dimensional quotient
double kappa_of(double Lambda, int n);

// g- = -V^2 (dt + theta)^2 + g+ on R x M, with Ric(g-) = (2 Lambda / (n - 1)) g-
struct StationaryMetric {
  TensorField V;      // lapse, positive
  TensorField theta;  // one-form on M
  MetricField g;      // Riemannian metric on M
  double Lambda = 0.0;

  StationaryMetric() = default;
  StationaryMetric(TensorField V, TensorField theta, MetricField g, double Lambda);

  int dim() const { return g.dim(); }
  double kappa() const { return kappa_of(Lambda, dim()); }
  const Chart& chart() const { return g.chart(); }
};

// lambda = -V^2 d theta; in a chart with a radial axis also the split into
// xi' (lambda_rA = -V^2 xi'_A) and the tangential block lambda_AB
struct TwistField {
  TensorField lambda;
  bool radial = false;
  TensorField xi_prime;    // one-form, radial component zero
  TensorField tangential;  // lambda with the radial row and column removed (zeroed)
};

// residuals of the reduced equations (left side minus right side)
//   tt: V (-Lap V + kappa V) - |lambda|^2 / 4
//   ij: Ric + kappa g - Hess V / V - (lambda o lambda) / (2 V^2)
//   ti: delta(V lambda)
struct ReducedResiduals {
  TensorField tt, ij, ti;
  double max_abs() const;
};

struct Perturbation {
  TensorField dV, dtheta, dg;
};

struct LinearizationReport {
  ReducedResiduals finite_difference;
  ReducedResiduals analytic;
  double mismatch = 0.0;  // sup-norm of their difference
};

MetricField assemble_spacetime(const StationaryMetric& sm);
TwistField twist(const StationaryMetric& sm);
ReducedResiduals reduced_residuals(const StationaryMetric& sm);

// Ric(g-) + kappa g- on the time-fibred chart, projected on X = d_t and the
// horizontal lifts d_i - theta_i d_t and normalised to match reduced_residuals
ReducedResiduals spacetime_residuals(const StationaryMetric& sm);

ReducedResiduals linearized_residual_analytic(const StationaryMetric& sm, const Perturbation& p);
LinearizationReport linearized_residual(const StationaryMetric& sm, const Perturbation& p, double eps);
StationaryMetric perturbed(const StationaryMetric& sm, const Perturbation& p, double eps);

Bundle to_bundle(const StationaryMetric& sm);
StationaryMetric stationary_from_bundle(const Bundle& b);

}  // namespace stvac
