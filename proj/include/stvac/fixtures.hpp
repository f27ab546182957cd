#pragma once

#include <string>
#include <vector>

#include "stvac/fg.hpp"
#include "stvac/foliation.hpp"
#include "stvac/kid.hpp"

namespace stvac {

// Reference data sets shared by the command-line tool and the acceptance suite.

// radial axis r0..r1 (named r, x or rho) times the flat torus (y, z)
Grid torus_slab(const std::string& radial_name, double r0, double r1, int nr, int nt, int order = 6);

// V = 1, g = dy^2 + dz^2
RadialFoliation minkowski_slab(const Grid& grid);
// V = e^r, g = e^{2r} (dy^2 + dz^2); on a rho axis r = -ln rho. Lambda = -3.
RadialFoliation ads_slab(const Grid& grid);
// smooth random finite-distance data on a torus slab
RadialFoliation random_foliation(unsigned seed, const Grid& grid);

// flat ball of radius R in Gauss coordinates, dx^2 + (R - x)^2 (dtheta^2 + sin^2 theta dphi^2),
// with theta on a doubled periodic circle offset from the poles
Grid flat_ball_grid(int nx, int nt, int order = 6, double depth = 0.5);
RadialFoliation flat_ball(double R, const Grid& grid);

// the six Killing fields of flat space restricted to the ball foliation:
// three translations and three rotations
int flat_ball_killing_count();
std::string flat_ball_killing_name(int i);
// (alpha, nu) of field i on a chart with axes (x, theta, phi), or (theta, phi) at x = 0
std::pair<TensorField, TensorField> flat_ball_killing(double R, const Chart& chart, int i);
BoundaryKID flat_ball_kid(double R, const RadialFoliation& f, int i);
// alpha = 0, nu = eps sin(theta) dtheta: not a KID
BoundaryKID planted_non_kid(const RadialFoliation& f, double eps = 1.0);

// boundary chart (t, y, z) with t a stationary fibre
Chart fg_boundary_chart(int ny = 48, int nz = 10);
TensorField fg_minkowski(const Chart& c);
// -(1 + cos y / 3) dt^2 + 2 (sin y / 5) dt dy + dy^2 + (1 + sin y / 4) dz^2
TensorField fg_curved(const Chart& c);
// constant transverse-traceless tensor for the Minkowski boundary metric
TensorField fg_tt_tensor(const Chart& c, double s = 1.0);

// a smooth Riemannian metric on any chart, perturbing the identity
MetricField random_metric(const Chart& c, unsigned seed);

}  // namespace stvac
