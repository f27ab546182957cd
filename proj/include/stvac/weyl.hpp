#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stvac/grid.hpp"
#include "stvac/stationary.hpp"

namespace stvac {

// Axisymmetric harmonic function in flat R^3, in spherical coordinates
// (rt, vt) about the symmetry axis:
//   interior  u = sum_l a_l rt^l P_l(cos vt)        on rt <= R
//   exterior  u = sum_l a_l rt^(-l-1) P_l(cos vt)   on rt >= R
class AxisymmetricHarmonic {
 public:
  struct Sample {
    double u = 0.0, u_rho = 0.0, u_z = 0.0;
  };

  AxisymmetricHarmonic() = default;
  AxisymmetricHarmonic(std::vector<double> a, double R, bool exterior = false);

  const std::vector<double>& coefficients() const { return a_; }
  double radius() const { return R_; }
  bool exterior() const { return exterior_; }
  int degree() const { return static_cast<int>(a_.size()) - 1; }

  // Legendre coefficients of the trace on the sphere rt = R
  std::vector<double> boundary_coefficients() const;

  bool contains(double rho, double z) const;
  // value and cylindrical gradient; throws DomainError outside the domain
  Sample eval(double rho, double z) const;

 private:
  std::vector<double> a_;
  double R_ = 1.0;
  bool exterior_ = false;
};

// Legendre projection of data f(vt, phi) on the sphere of radius R, truncated
// at degree L. Throws InputError when f depends on phi.
AxisymmetricHarmonic solve_axisym_laplace(const std::function<double(double, double)>& f, double R, int L, bool exterior = false);

// flat Laplacian of u sampled on a (rho, z) grid
TensorField flat_laplacian(const AxisymmetricHarmonic& u, const Grid& rz);

// paths for the k-quadrature. Both arcs run along rt = const from a pole;
// `axis` runs along z = const from rho = 0.
enum class KPath { north_arc, south_arc, axis };

// k(rho, z) with d_rho k = rho (u_rho^2 - u_z^2), d_z k = 2 rho u_rho u_z and
// k = 0 on the axis. Throws DomainError when the path leaves the domain of u.
double weyl_k(const AxisymmetricHarmonic& u, double rho, double z, KPath path = KPath::north_arc);

// static metric -e^{2u} dt^2 + e^{-2u} (e^{2k} (drho^2 + dz^2) + rho^2 dphi^2)
struct WeylMetric {
  AxisymmetricHarmonic u;
  StationaryMetric metric;  // chart (phi, rho, z), theta = 0, Lambda = 0
  TensorField k;
  double inf_V = 0.0;
  double sup_V = 0.0;
  double path_defect = 0.0;  // max |k(north arc) - k(south arc)| over the nodes
};

// `rz` carries interval axes (rho, z) with rho > 0 inside the domain of u
WeylMetric weyl_metric(const AxisymmetricHarmonic& u, const Grid& rz);

enum class AnalyticityVerdict { analytic, smooth_non_analytic, insufficient_data };
std::string to_string(AnalyticityVerdict v);

// least-squares fits of log|b_l| over l >= 1 and their Bayesian information criteria
struct AnalyticityReport {
  AnalyticityVerdict verdict = AnalyticityVerdict::insufficient_data;
  int used = 0;            // coefficients entering the fits
  double epsilon = 0.0;    // log|b_l| ~ c - epsilon l
  double beta = 0.0;       // log|b_l| ~ c - beta sqrt(l)
  double power = 0.0;      // log|b_l| ~ c - power log l
  double bic_geometric = 0.0, bic_stretched = 0.0, bic_algebraic = 0.0;
  std::string diagnostic;
};

inline constexpr int kMinClassifyDegree = 64;

// b_l are trace coefficients, l = 0..L
AnalyticityReport analyticity_classify(std::span<const double> b);
AnalyticityReport analyticity_classify(const AxisymmetricHarmonic& u);

enum class SpectrumKind { geometric, stretched, algebraic };

// |b_l| = exp(-rate l), exp(-rate sqrt l) or l^-rate (b_0 = 1), with
// log-normal noise of width `noise` and random signs
std::vector<double> synthetic_spectrum(SpectrumKind kind, double rate, double noise, std::uint64_t seed, int L = 128);

}  // namespace stvac
