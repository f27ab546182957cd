#pragma once

#include <string>
#include <vector>

#include "stvac/foliation.hpp"

namespace stvac {

// Two radial foliations on one chart. g - g0 and V^2 - V0^2 are formed by
// subtraction unless supplied; supplying them keeps differences that are far
// below the size of the fields free of cancellation error.
struct SolutionPair {
  RadialFoliation f, f0;
  TensorField dg;   // g - g0 on the slice chart
  TensorField dV2;  // V^2 - V0^2

  SolutionPair(RadialFoliation f, RadialFoliation f0);
  SolutionPair(RadialFoliation f, RadialFoliation f0, TensorField dg, TensorField dV2);

  // g - g0 and (Pi - Pi0) = (g - g0)'/2 with zero radial components, on the
  // ambient chart of dr^2 + g0
  TensorField ambient_dg() const;
  TensorField ambient_dPi() const;
  MetricField reference() const;  // dr^2 + g0
};

// Weighted inequalities between the differences of a pair, weight e^{2sr}
// (asymptotic, integrated from the first radial node outward) or x^{-2s}
// (finite distance, from the boundary x = 0). Norms are taken in dr^2 + g0;
// the lapse form uses the dt^2 slot of V0^2 dt^2 + g0.
//   shape             : |Pi - Pi0|^2                 >= C^-1 s^2 |g - g0|^2
//   shape_derivatives : sum_{i<=k} |D0^i (Pi - Pi0)|^2 >= C^-1 s^2 sum_{i<=k} |D0^i (g - g0)|^2
//   lapse             : V0^-4 |(V^2 - V0^2)'|^2       >= C^-1 s^2 V0^-4 |V^2 - V0^2|^2
//   finite_distance   : |D0^2 (Pi - Pi0)|^2 x^{-2s}  >= C^-1 s^2 sum_{i<=2} s^{4-2i} x^{2i-4} |D0^i (g - g0)|^2 x^{-2s}
enum class CarlemanForm { shape, shape_derivatives, lapse, finite_distance };

struct CarlemanConfig {
  std::vector<double> s;  // each > 2
  int order = 0;          // k of shape_derivatives, 0..2
  double decay_ratio = 1e-8;
};

struct CarlemanRow {
  double s = 0.0;
  double lhs = 0.0;       // integral of the Pi side
  double rhs = 0.0;       // integral of the g side including its powers of s
  double needed_C = 0.0;  // rhs / lhs, the smallest C for this s
};

struct CarlemanReport {
  CarlemanForm form = CarlemanForm::shape;
  int order = 0;
  std::vector<CarlemanRow> rows;
  bool trivial = false;   // both sides vanish for every s
  double C = 0.0;         // max needed_C
  double spread = 1.0;    // max / min of lhs / rhs over s; 1 for exact s^2 scaling
  bool holds() const;     // finite C, positive sides, or trivial
};

CarlemanReport carleman_check(const SolutionPair& p, CarlemanForm form, const CarlemanConfig& cfg);

struct CarlemanFit {
  double C = 0.0;       // one constant for all reports
  double spread = 1.0;  // worst spread
  bool holds = true;
};
CarlemanFit fit_constant(const std::vector<CarlemanReport>& reports);

// Manufactured pairs: g - g0 = w(r) delta(r) phi T, V^2 - V0^2 = V0^2 delta_V(r) psi v,
// xi - xi0 = delta(r) zeta, with random smooth phi, psi on the torus and
// random constant T, v, zeta. w = 1 (flat and finite-distance references) or
// e^{2r} (hyperbolic reference, so the difference has unit size in g0).
//   flat        : g0 = ghat(y), V0 = 1, r in [0, 5]
//   hyperbolic  : g0 = e^{2r} ghat(y), V0 = e^r, r in [0, 5]
//   finite      : g0 = (1 + x/2)^2 ghat(y), V0 = 1, x in [0, 1]
// Profiles: infinite order, delta = exp(-a e^r) or exp(-a / x); or finite order
// with exponent m, delta = e^{-m r} or x^m.
enum class PairReference { flat, hyperbolic, finite };

struct PairRecipe {
  PairReference reference = PairReference::flat;
  unsigned long seed = 1;
  bool infinite_order = true;
  double exponent = 5.0;  // m of the finite-order profile
  double decay = 0.0;     // a of the infinite-order profiles; 0 draws it
  int radial_nodes = 0;   // 0: default for the reference
  int tangential_nodes = 6;
  int fd_order = 8;
  double amplitude = 1.0;  // scales every difference
};

SolutionPair manufactured_pair(const PairRecipe& r);
std::string to_string(CarlemanForm f);
std::string to_string(PairReference r);

// Pointwise comparison of |A0|^2 in G0 with |A|^2 in G.
struct EstiaGroups {
  // each entry: sup over nodes of |group| / (its bound)
  double pi = 0.0;       // ||Pi|^2 - |Pi0|^2| / (|Pi - Pi0|_0 + |g - g0|_0)
  double lapse = 0.0;    // |(V'/V)^2 - (V0'/V0)^2| / V0^-2 (|VV' - V0V0'| + |V^2 - V0^2|)
  double twist_a = 0.0;  // |V0^-2 (|V^2 xi'|_0^2 - |V0^2 xi0'|_0^2)| / V0^-1 |V^2 xi' - V0^2 xi0'|_0
  double twist_b = 0.0;  // |V0^-2 V^4 (|xi'|^2 - |xi'|_0^2)| / |g - g0|_0
  double twist_c = 0.0;  // |V0^-2 (V0^2 - V^2) V^2 |xi'|^2| / V0^-2 |V0^2 - V^2|
  double max() const;
};

struct EstiaSample {
  bool rejected = false;
  std::string diagnostic;
  DecayConstants decay, decay0;
  double ratio = 0.0;         // sup ||A0|^2 - |A|^2| / (|A0 - A|_G0 + |G0 - G|_G0)
  double lhs_max = 0.0;
  EstiaGroups groups;
  double split_defect = 0.0;  // max |a + b + c - (V^2 |xi'|^2 - V0^2 |xi0'|_0^2)|, relative
};

struct EstiaReport {
  std::vector<EstiaSample> samples;
  std::size_t accepted = 0;
  double C = 0.0;
  EstiaGroups group_C;
};

EstiaSample estia_sample(const SolutionPair& p, double decay_bound = 100.0);
EstiaReport estia_check(const std::vector<SolutionPair>& samples, double decay_bound = 100.0);

// V = e^r (1 + a e^{-2r} phi), g = e^{2r} ghat + B, xi' = e^{-2r} c, with
// random phi, B, c of size `scale`; the reference uses independent draws with
// the same ghat. Radial interval [0, r1].
SolutionPair random_asymptotic_pair(unsigned long seed, int radial_nodes = 41, int tangential_nodes = 6, double r1 = 4.0, double scale = 1.0);
// V = e^r (1 + a e^{-2r}), V0 = e^r, g = g0 = e^{2r} delta, xi = 0
SolutionPair ads_lapse_pair(double a, int radial_nodes = 41, int tangential_nodes = 6, double r1 = 4.0);

// [H_- - H0_-]' against (|A0|^2 - V0^2 |xi0'|^2) - (|A|^2 - V^2 |xi'|^2), and
// against the form without the twist terms
struct MeanCurvatureIdentity {
  TensorField lhs, rhs, rhs_untwisted;
  double defect = 0.0;            // max |lhs - rhs|
  double untwisted_defect = 0.0;  // max |lhs - rhs_untwisted|
};
MeanCurvatureIdentity mean_curvature_identity(const SolutionPair& p);

// Cohomogeneity-one sector: every field depends on the radius only and the
// slices are quotients of a model space with Ric = c (k - 1) sigma, sigma the
// model metric in an orthonormal frame; c = 0, 1, -1. The Einstein system is
//   g' = 2 Pi
//   Pi' = Ric + kappa g - H Pi + 2 Pi o Pi - V' Pi / V + V^2 xi' (x) xi' / 2
//   V'' = -H V' + kappa V - V^3 |xi'|^2 / 2
//   xi'' = -3 V' xi' / V - H xi' + 2 Pi(xi'#)
// with constraint R - H^2 + |Pi|^2 - 2 H V' / V + k kappa - V^2 |xi'|^2 / 2 = 0.
enum class Sector { torus, sphere, hyperbolic };

struct SectorState {
  int k = 0;               // slice dimension
  std::vector<double> g;   // k x k, row-major
  std::vector<double> Pi;  // k x k
  double V = 1.0, Vp = 0.0;
  std::vector<double> xi, xip;  // k
};

struct SectorProblem {
  Sector sector = Sector::torus;
  double Lambda = 0.0;
  SectorState initial;
};

struct SectorSolution {
  std::vector<double> radius;
  std::vector<SectorState> states;
  std::vector<double> constraint;
  bool truncated = false;
  std::string diagnostic;
};

// integrates from r0 to each of `radii` (monotone, on one side of r0)
SectorSolution integrate_sector(const SectorProblem& p, double r0, const std::vector<double>& radii, double tolerance = 1e-12);
double sector_constraint(const SectorProblem& p, const SectorState& s);
// max(|V - V0|, |sqrt eig g - sqrt eig g0|, |xi - xi0|)
double sector_separation(const SectorState& a, const SectorState& b);

struct SeparationTrace {
  std::vector<double> radius, separation;
  double sup = 0.0;
  bool truncated = false;
  std::string diagnostic;
  SectorSolution a, b;
};
SeparationTrace continuation_ode(const SectorProblem& a, const SectorProblem& b, double r0, double r1, int samples = 101,
                                 double tolerance = 1e-12);

// AdS sector data on the flat slice r = 0: g = delta, Pi = delta, V = V' = 1,
// Lambda = -k(k+1)/2
SectorProblem ads_sector(int k);
// exterior Schwarzschild (k = 2, Lambda = 0) on the sphere of area radius rho_b
SectorProblem schwarzschild_sector(double mass, double rho_b);
// V at distance x outside the sphere rho_b, from the closed-form distance function
double schwarzschild_lapse(double mass, double rho_b, double x);

std::string to_string(Sector s);

}  // namespace stvac
