#pragma once

#include <vector>

#include "stvac/foliation.hpp"
#include "stvac/io.hpp"

namespace stvac {

// (alpha, nu) on the boundary together with the boundary geometry: metric,
// second fundamental form and the Einstein constant lambda of Ric(g+) = lambda g+
struct BoundaryKID {
  TensorField alpha;  // scalar
  TensorField nu;     // one-form
  MetricField g;
  TensorField Pi;
  double lambda = 0.0;

  BoundaryKID() = default;
  BoundaryKID(TensorField alpha, TensorField nu, MetricField g, TensorField Pi, double lambda);
  const Chart& chart() const { return g.chart(); }
};

// boundary data of f at its first radial node (Einstein constant lambda)
BoundaryKID boundary_kid(const RadialFoliation& f, const TensorField& alpha, const TensorField& nu, double lambda);

struct KIDResidual {
  TensorField k0;  // L_nu# g + 2 alpha Pi
  TensorField k1;  // 2 L_nu# Pi - L_grad alpha g + 2 alpha [Ric(g) - lambda g - H Pi + 2 Pi o Pi]
  double max_abs() const;
};
KIDResidual kid_residual(const BoundaryKID& k);

// omega = alpha dx + nu along the foliation
struct CandidateKillingField {
  TensorField alpha;     // scalar on the foliation chart
  TensorField nu_sharp;  // tangential vector on the foliation chart
  TensorField nu;        // nu_sharp lowered with g(x)
};

// alpha(x) = alpha(0), (nu#)' = -grad_g alpha, classical RK4 with the radial
// grid spacing as step and Lagrange-interpolated midpoint metrics
CandidateKillingField extend_kid(const RadialFoliation& f, const BoundaryKID& k);
// an arbitrary radial family (alpha, nu) as a candidate field
CandidateKillingField candidate_from(const RadialFoliation& f, TensorField alpha, TensorField nu);

// h = L_omega# (dx^2 + g) in the split h_xx, h_xA, h_AB
struct Deformation {
  TensorField xx, xA, AB;
};
Deformation deformation(const RadialFoliation& f, const CandidateKillingField& w);
// the same tensor from the Lie derivative of the assembled metric (full chart)
TensorField deformation_ambient(const RadialFoliation& f, const CandidateKillingField& w);
TensorField assemble_deformation(const RadialFoliation& f, const Deformation& h);

struct KillingReport {
  std::vector<double> radius;      // radial coordinate (x, r, or rho) of each slice
  std::vector<double> slice_norm;  // sup over the slice of |h|_{g+}
  double h0 = 0.0;                 // sup |h_AB(0)|_g
  double h0_prime = 0.0;           // sup |h_AB'(0)|_g
  double linearized = 0.0;         // sup of the linearized Einstein operator applied to h
  // log-log slope of slice_norm against rho near rho = 0 (compactified axes only)
  double rho_slope = 0.0;
  bool has_rho_slope = false;
};
KillingReport killing_verify(const RadialFoliation& f, const CandidateKillingField& w, double Lambda);

// (L_X G0, L_X Gn) on the boundary chart
struct CCResidual {
  TensorField metric, undetermined;
  double max_abs() const;
};
CCResidual cc_kid_check(const TensorField& G0, const TensorField& Gn, const TensorField& X);

Bundle to_bundle(const BoundaryKID& k);
BoundaryKID kid_from_bundle(const Bundle& b);

}  // namespace stvac
