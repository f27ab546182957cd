#pragma once

#include <string>

#include "stvac/io.hpp"
#include "stvac/stationary.hpp"

namespace stvac {

enum class FoliationKind { finite_distance, asymptotically_hyperbolic };
// radial coordinate of the grid axis: r or x directly, or rho with r = -ln rho
enum class RadialVariable { r, x, rho };

// Data of dr^2 + G, G = -V^2 (dt + xi)^2 + g, on a grid whose radial axis is
// tagged. Fields live on `chart`, which spans the whole grid but carries only
// the tangential coordinates; they are functions of r (or x) even when the
// grid axis is rho.
struct RadialFoliation {
  Chart chart;
  int radial_axis = -1;
  FoliationKind kind = FoliationKind::finite_distance;
  TensorField V;   // scalar
  TensorField xi;  // tangential one-form
  MetricField g;   // slice metric (Riemannian, or Lorentzian for boundary-KID use)

  RadialFoliation() = default;
  RadialFoliation(TensorField V, TensorField xi, MetricField g, FoliationKind kind);

  RadialVariable variable() const;
  int slice_dim() const { return chart.dim(); }
  // d/dr (d/dx) of any field on the chart, also when the axis is rho
  TensorField radial_derivative(const TensorField& t) const;
  TensorField radial_second_derivative(const TensorField& t) const;
  double radius(std::size_t node) const;  // r or x at a node
};

// tangential chart of a grid with a tagged radial axis
Chart slice_chart_of(const Grid& grid);
// the foliation chart with the radial axis removed from the grid
Chart boundary_chart(const RadialFoliation& f);
// radial node i of a field on the foliation chart, as a field on boundary_chart
TensorField slice_at(const RadialFoliation& f, const TensorField& t, int i);
// boundary field repeated on every slice
TensorField extend_constant(const RadialFoliation& f, const TensorField& b);

struct ShapeData {
  TensorField Pi;       // g'/2
  TensorField H;        // tr_g Pi
  TensorField Hm;       // V'/V + H
  TensorField Vp;       // V'
  TensorField xip;      // xi'
  TensorField A;        // V V' dt^2 + V^2 (xi' dt + dt xi')/2 + Pi, time-fibred chart
  MetricField Gref;     // V^2 dt^2 + g
  TensorField A_norm2;  // |A|^2 in Gref
  TensorField A_trace;  // tr_Gref A
};

ShapeData shape_operators(const RadialFoliation& f);
// |Pi|^2 + (V'/V)^2 + V^2 |xi'|^2 / 2, evaluated from its parts
TensorField aggregate_norm_decomposed(const RadialFoliation& f, const ShapeData& s);

// Residuals of the radial Einstein system; kappa = -2 Lambda / (n - 1) with
// n = slice_dim + 1.
//   AB  : Ric(g) - H Pi - Pi' + 2 Pi o Pi + kappa g - Hess V / V - V' Pi / V
//         + V^2 xi' (x) xi' / 2 - (lambda o lambda) / (2 V^2)
//   Ar  : -delta Pi - dH - dV' / V + Pi(grad V) / V - lambda(., xi'#) / 2
//   Ar2 : -[delta Pi + dH_- + V' dV / V^2 - Pi(grad V) / V + lambda(., xi'#) / 2]
//   rr  : -H' - |Pi|^2 + kappa - V'' / V + V^2 |xi'|^2 / 2
//   rr2 : -[H_-' - kappa + |Pi|^2 + (V'/V)^2 - V^2 |xi'|^2 / 2]
//   rr3 : -[H_-' - kappa + |A|^2 - V^2 |xi'|^2]
//   rr3_printed : -[H_-' - kappa + |A|^2]
//   divr : d*(V^3 xi')
//   divA : (V^3 xi')' + delta(V lambda) + H V^3 xi' - 2 V^3 Pi(xi'#, .)
// with lambda = -V^2 d xi. Ar2 and rr2 expand H_- by the chain rule; rr3
// differentiates the H_- field numerically.
struct GaussResiduals {
  TensorField AB, Ar, Ar2, rr, rr2, rr3, rr3_printed, divr, divA;
  double max_abs() const;  // over AB, Ar, rr, rr3, divr, divA
};

GaussResiduals gauss_residuals(const RadialFoliation& f, double Lambda);

struct GaussRicci {
  TensorField AB, xA, xx;
};
// Gauss-Codazzi blocks of dx^2 + g
GaussRicci riemannian_gauss_ricci(const RadialFoliation& f);

// foliation chart with the radial coordinate prepended
Chart ambient_chart(const RadialFoliation& f);
// dx^2 + g on ambient_chart; on a rho axis the radial block is drho^2 / rho^2
MetricField assemble_ambient(const RadialFoliation& f);
// (V, xi, dr^2 + g) as stationary data on ambient_chart
StationaryMetric to_stationary(const RadialFoliation& f, double Lambda);

struct GaussDiagnostic {
  double rr_defect = 0.0;  // max |g_rr - 1|
  double rA_defect = 0.0;  // max |g_rA|
};
GaussDiagnostic is_gauss(const MetricField& m, int radial_coordinate);

// constants in V = O(e^r), g = O(e^2r), V' - V = O(e^-r), xi' = O(e^-2r), Pi - g = O(1)
struct DecayConstants {
  double V = 0, g = 0, Vp_minus_V = 0, xip = 0, Pi_minus_g = 0;
  double worst() const;
};
DecayConstants decay_constants(const RadialFoliation& f);

// per-slice file: manifest meta (kind, Lambda, n, radial axis) and one block
// per radial node in increasing order
Bundle to_bundle(const RadialFoliation& f, double Lambda);
RadialFoliation foliation_from_bundle(const Bundle& b, double* Lambda = nullptr);

std::string to_string(FoliationKind k);

}  // namespace stvac
