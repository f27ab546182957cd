#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "stvac/calculus.hpp"
#include "stvac/error.hpp"
#include "stvac/exact.hpp"
#include "stvac/foliation.hpp"
#include "support.hpp"

using namespace stvac;
using testing::max_diff;
using std::numbers::pi;

namespace {

Grid torus_slab(const char* rname, double r0, double r1, int nr, int nt, int order = 6) {
  return Grid({Axis::radial_interval(rname, r0, r1, nr), Axis::periodic("y", 0, 2 * pi, nt), Axis::periodic("z", 0, 2 * pi, nt)}, order);
}

// V = e^r, g = e^2r (dy^2 + dz^2)
RadialFoliation ads_foliation(const Grid& grid) {
  const Chart c = slice_chart_of(grid);
  const bool rho = grid.axis(0).name == "rho";
  auto r_of = [rho](double s) { return rho ? -std::log(s) : s; };
  auto V = TensorField::sample(c, 0, 0, Symmetry::general, [&](const std::vector<double>& p, double* v) { v[0] = std::exp(r_of(p[0])); });
  auto g = TensorField::sample(c, 0, 2, Symmetry::symmetric, [&](const std::vector<double>& p, double* v) { v[0] = v[3] = std::exp(2 * r_of(p[0])); });
  return RadialFoliation(V, TensorField(c, 0, 1), MetricField(g, Signature::riemannian), FoliationKind::asymptotically_hyperbolic);
}

Grid ball_grid(int nx, int nt, int np) {
  return Grid({Axis::radial_interval("x", 0.0, 0.5, nx), Axis::interval("theta", 0.7, 2.4, nt), Axis::periodic("phi", 0, 2 * pi, np)}, 6);
}

// flat ball of radius R: dx^2 + (R - x)^2 (dtheta^2 + sin^2 theta dphi^2)
RadialFoliation flat_ball(double R, const Grid& grid) {
  const Chart c = slice_chart_of(grid);
  auto g = TensorField::sample(c, 0, 2, Symmetry::symmetric, [R](const std::vector<double>& p, double* v) {
    const double s = (R - p[0]) * (R - p[0]);
    v[0] = s;
    v[3] = s * std::sin(p[1]) * std::sin(p[1]);
  });
  return RadialFoliation(TensorField::scalar(c, 1.0), TensorField(c, 0, 1), MetricField(g, Signature::riemannian), FoliationKind::finite_distance);
}

// smooth random data: low-order trigonometric polynomials in (y, z) times polynomials in r
RadialFoliation random_foliation(unsigned seed, const Grid& grid) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Chart c = slice_chart_of(grid);
  auto coef = [&] {
    std::vector<double> a(6);
    for (double& x : a) x = u(rng);
    return a;
  };
  auto wave = [](const std::vector<double>& a, const std::vector<double>& p) {
    return a[0] * std::sin(p[1]) + a[1] * std::cos(p[2]) + a[2] * std::sin(p[1] + p[2]) + p[0] * (a[3] * std::cos(p[1]) + a[4] * std::sin(p[2])) + a[5] * p[0] * p[0];
  };
  const auto cv = coef(), cx0 = coef(), cx1 = coef(), c00 = coef(), c11 = coef(), c01 = coef();
  auto V = TensorField::sample(c, 0, 0, Symmetry::general, [&](const std::vector<double>& p, double* v) { v[0] = 1.5 + 0.2 * wave(cv, p); });
  auto xi = TensorField::sample(c, 0, 1, Symmetry::general, [&](const std::vector<double>& p, double* v) {
    v[0] = 0.3 * wave(cx0, p);
    v[1] = 0.3 * wave(cx1, p);
  });
  auto g = TensorField::sample(c, 0, 2, Symmetry::symmetric, [&](const std::vector<double>& p, double* v) {
    v[0] = 1.5 + 0.2 * wave(c00, p);
    v[3] = 1.5 + 0.2 * wave(c11, p);
    v[1] = v[2] = 0.15 * wave(c01, p);
  });
  return RadialFoliation(V, xi, MetricField(g, Signature::riemannian), FoliationKind::finite_distance);
}

// blocks of a full-chart symmetric 2-tensor (radial coordinate first) as slice fields
TensorField rr_part(const TensorField& full, const Chart& c) {
  TensorField out = TensorField::scalar(c);
  std::copy(full.comp(0).begin(), full.comp(0).end(), out.comp(0).begin());
  return out;
}

TensorField rA_part(const TensorField& full, const Chart& c) {
  TensorField out(c, 0, 1);
  for (int a = 0; a < c.dim(); ++a) std::copy(full.comp(a + 1).begin(), full.comp(a + 1).end(), out.comp(a).begin());
  return out;
}

TensorField AB_part(const TensorField& full, const Chart& c) {
  const int n = c.dim(), d = n + 1;
  TensorField out(c, 0, 2, Symmetry::symmetric);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) std::copy(full.comp((a + 1) * d + b + 1).begin(), full.comp((a + 1) * d + b + 1).end(), out.comp(a * n + b).begin());
  return out;
}

// sup-norm of a fine-grid field in units of its Richardson "zero" bound; <= 1 counts as zero
template <class F>
double zero_ratio(const Grid& grid, F&& field) {
  const TensorField fine = field(grid);
  const TensorField coarse = field(grid.coarsened());
  return fine.max_abs() / zero_tolerance(fine, coarse, grid.fd_order());
}

}  // namespace

TEST_CASE("shape operators of hyperbolic space") {
  const Grid grid = torus_slab("r", 0.0, 1.0, 17, 10);
  CHECK(zero_ratio(grid, [](const Grid& g) {
          const RadialFoliation f = ads_foliation(g);
          return shape_operators(f).Pi - f.g.g();
        }) <= 1.0);
  CHECK(zero_ratio(grid, [](const Grid& g) { return shape_operators(ads_foliation(g)).H - TensorField::scalar(slice_chart_of(g), 2.0); }) <= 1.0);
  CHECK(zero_ratio(grid, [](const Grid& g) { return shape_operators(ads_foliation(g)).Hm - TensorField::scalar(slice_chart_of(g), 3.0); }) <= 1.0);
  CHECK(zero_ratio(grid, [](const Grid& g) { return shape_operators(ads_foliation(g)).A_norm2 - TensorField::scalar(slice_chart_of(g), 3.0); }) <= 1.0);
  const ShapeData s = shape_operators(ads_foliation(grid));
  CHECK(max_diff(s.A_trace, s.Hm) < 1e-12);
}

TEST_CASE("shape operators of constant and flat-ball data") {
  const Grid grid = torus_slab("x", 0.0, 1.0, 9, 6, 4);
  const Chart c = slice_chart_of(grid);
  TensorField g(c, 0, 2, Symmetry::symmetric);
  std::fill(g.comp(0).begin(), g.comp(0).end(), 2.0);
  std::fill(g.comp(3).begin(), g.comp(3).end(), 3.0);
  const RadialFoliation f(TensorField::scalar(c, 1.0), TensorField(c, 0, 1), MetricField(g, Signature::riemannian), FoliationKind::finite_distance);
  const ShapeData s = shape_operators(f);
  CHECK(s.Pi.max_abs() < 1e-12);
  CHECK(s.H.max_abs() < 1e-12);

  // Pi = -g / (R - x), H = -2 / (R - x); both are polynomial in x, so exact to round-off
  const double R = 2.0;
  const RadialFoliation b = flat_ball(R, ball_grid(17, 17, 10));
  const ShapeData sb = shape_operators(b);
  double e = 0.0;
  for (std::size_t k = 0; k < b.V.nodes(); ++k) {
    const double x = b.radius(k);
    e = std::max(e, std::abs(sb.H.data()[k] + 2.0 / (R - x)));
    for (std::size_t comp = 0; comp < 4; ++comp) e = std::max(e, std::abs(sb.Pi.at(k, comp) + b.g.g().at(k, comp) / (R - x)));
  }
  CHECK(e < 1e-9);
}

TEST_CASE("radial derivative in the compactified variable") {
  const Grid grid = torus_slab("rho", 0.2, 0.8, 25, 10);
  const RadialFoliation f = ads_foliation(grid);
  CHECK(f.variable() == RadialVariable::rho);
  CHECK(f.radius(0) == doctest::Approx(-std::log(0.2)));
  CHECK(zero_ratio(grid, [](const Grid& g) {
          const RadialFoliation h = ads_foliation(g);
          return h.radial_derivative(h.V) - h.V;
        }) <= 1.0);
  CHECK(zero_ratio(grid, [](const Grid& g) {
          const RadialFoliation h = ads_foliation(g);
          return h.radial_second_derivative(h.V) - h.V;
        }) <= 1.0);
  const DecayConstants dc = decay_constants(f);
  CHECK(dc.V == doctest::Approx(1.0));
  CHECK(dc.g == doctest::Approx(1.0));
  CHECK(dc.xip == 0.0);
  CHECK(dc.Vp_minus_V < 1e-2);
  CHECK(dc.Pi_minus_g < 1e-1);
}

TEST_CASE("exact solutions have vanishing Gauss residuals") {
  auto all = [](const GaussResiduals& r) { return std::vector<TensorField>{r.AB, r.Ar, r.rr, r.rr3, r.rr3_printed, r.divr, r.divA}; };
  SUBCASE("anti-de Sitter") {
    const Grid grid = torus_slab("r", 0.0, 1.0, 17, 10);
    const auto fine = all(gauss_residuals(ads_foliation(grid), -3.0));
    const auto coarse = all(gauss_residuals(ads_foliation(grid.coarsened()), -3.0));
    for (std::size_t i = 0; i < fine.size(); ++i) CHECK(fine[i].max_abs() <= zero_tolerance(fine[i], coarse[i], 6));
  }
  SUBCASE("Minkowski sliced by spheres") {
    const Grid grid = ball_grid(17, 17, 10);
    const auto fine = all(gauss_residuals(flat_ball(2.0, grid), 0.0));
    const auto coarse = all(gauss_residuals(flat_ball(2.0, grid.coarsened()), 0.0));
    for (std::size_t i = 0; i < fine.size(); ++i) CHECK(fine[i].max_abs() <= zero_tolerance(fine[i], coarse[i], 6));
  }
}

TEST_CASE("Gauss residuals detect a perturbed second fundamental form") {
  const Grid grid = torus_slab("r", 0.0, 1.0, 17, 10);
  const RadialFoliation f0 = ads_foliation(grid);
  const double base = gauss_residuals(f0, -3.0).max_abs();
  const TensorField bump = TensorField::sample(f0.chart, 0, 2, Symmetry::symmetric, [](const std::vector<double>& p, double* v) {
    v[0] = p[0] * (1.0 + 0.5 * std::cos(p[1]));
  });
  for (double eps : {1e-2, 1e-3}) {
    TensorField g = f0.g.g();
    g.axpy(eps, bump);
    const RadialFoliation f(f0.V, f0.xi, MetricField(g, Signature::riemannian), f0.kind);
    CHECK(gauss_residuals(f, -3.0).max_abs() >= 0.1 * eps + base);
  }
}

TEST_CASE("Gauss residuals agree with the reduced equations") {
  const Grid grid = torus_slab("r", 0.0, 1.0, 17, 24);
  const double Lambda = -1.3;
  for (unsigned seed : {7u, 8u, 9u}) {
    const RadialFoliation f = random_foliation(seed, grid);
    const GaussResiduals gr = gauss_residuals(f, Lambda);
    const ReducedResiduals rr = reduced_residuals(to_stationary(f, Lambda));
    CHECK(max_diff(gr.AB, AB_part(rr.ij, f.chart)) < 1e-11);
    // the two evaluations alias differently on 24 tangential nodes
    CHECK(max_diff(gr.Ar, rA_part(rr.ij, f.chart)) < 1e-8);
    CHECK(max_diff(gr.divr, rr_part(rr.ti, f.chart)) < 1e-11);
    CHECK(max_diff(gr.divA, rA_part(rr.ti, f.chart)) < 1e-10);
    // H' of a differentiated trace against second derivatives of g
    CHECK(zero_ratio(grid, [&](const Grid& g) {
            const RadialFoliation h = random_foliation(seed, g);
            return gauss_residuals(h, Lambda).rr - rr_part(reduced_residuals(to_stationary(h, Lambda)).ij, h.chart);
          }) <= 1.0);
    CHECK(zero_ratio(grid, [&](const Grid& g) {
            const GaussResiduals r = gauss_residuals(random_foliation(seed, g), Lambda);
            return r.rr - r.rr3;
          }) <= 1.0);
    CHECK(max_diff(gr.Ar, gr.Ar2) < 1e-12);
    CHECK(max_diff(gr.rr, gr.rr2) < 1e-12);
    const ShapeData s = shape_operators(f);
    CHECK(max_diff(aggregate_norm_decomposed(f, s), s.A_norm2) < 1e-12);
  }
}

TEST_CASE("twisted data separates the two forms of the radial equation") {
  const RadialFoliation f = random_foliation(11, torus_slab("r", 0.0, 1.0, 17, 12));
  const GaussResiduals r = gauss_residuals(f, -1.0);
  const ShapeData s = shape_operators(f);
  const TensorField gap = times(times(f.V, f.V), norm2(f.g, s.xip));
  CHECK(max_diff(r.rr3 - r.rr3_printed, gap) < 1e-12);
  CHECK(gap.max_abs() > 1e-3);
}

TEST_CASE("Riemannian Gauss-Codazzi blocks") {
  const Grid grid = torus_slab("x", 0.0, 1.0, 17, 16);
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const RadialFoliation f = random_foliation(seed, grid);
    const GaussRicci b = riemannian_gauss_ricci(f);
    const TensorField Ric = ricci(assemble_ambient(f));
    CHECK(max_diff(b.AB, AB_part(Ric, f.chart)) < 1e-10);
    CHECK(zero_ratio(grid, [&](const Grid& g) {
            const RadialFoliation h = random_foliation(seed, g);
            return riemannian_gauss_ricci(h).xA - rA_part(ricci(assemble_ambient(h)), h.chart);
          }) <= 1.0);
    CHECK(zero_ratio(grid, [&](const Grid& g) {
            const RadialFoliation h = random_foliation(seed, g);
            return riemannian_gauss_ricci(h).xx - rr_part(ricci(assemble_ambient(h)), h.chart);
          }) <= 1.0);
  }
  SUBCASE("hyperbolic space: Ric = -2 g") {
    const Grid hg = torus_slab("x", 0.0, 1.0, 17, 10);
    CHECK(zero_ratio(hg, [](const Grid& g) {
            const RadialFoliation f = ads_foliation(g);
            return riemannian_gauss_ricci(f).AB + 2.0 * f.g.g();
          }) <= 1.0);
    CHECK(zero_ratio(hg, [](const Grid& g) { return riemannian_gauss_ricci(ads_foliation(g)).xx + TensorField::scalar(slice_chart_of(g), 2.0); }) <= 1.0);
    CHECK(riemannian_gauss_ricci(ads_foliation(hg)).xA.max_abs() < 1e-12);
  }
  SUBCASE("sphere sliced by latitudes") {
    // (dx^2 + sin^2 x dphi^2) + dz^2: Ric = diag(1, sin^2 x, 0)
    auto error = [](const Grid& g3) {
      const Chart c = slice_chart_of(g3);
      auto g = TensorField::sample(c, 0, 2, Symmetry::symmetric, [](const std::vector<double>& p, double* v) {
        v[0] = std::sin(p[0]) * std::sin(p[0]);
        v[3] = 1.0;
      });
      const RadialFoliation f(TensorField::scalar(c, 1.0), TensorField(c, 0, 1), MetricField(g, Signature::riemannian), FoliationKind::finite_distance);
      const GaussRicci b = riemannian_gauss_ricci(f);
      TensorField e(c, 0, 1);  // (xx - 1, AB_00 - sin^2 x)
      for (std::size_t k = 0; k < f.V.nodes(); ++k) {
        e.at(k, 0) = b.xx.data()[k] - 1.0;
        e.at(k, 1) = b.AB.at(k, 0) - g.at(k, 0);
      }
      return e;
    };
    CHECK(zero_ratio(Grid({Axis::radial_interval("x", 0.6, 2.4, 25), Axis::periodic("phi", 0, 2 * pi, 10), Axis::periodic("z", 0, 2 * pi, 10)}, 6), error) <= 1.0);
  }
}

TEST_CASE("Gauss gauge diagnostic") {
  const Chart c = Chart::of(torus_slab("r", 0.0, 1.0, 9, 6, 4));
  auto planted = testing::metric_from(c, [](const std::vector<double>& p, double* v) {
    v[0] = 1.0 + 0.1 * std::cos(p[1]);
    v[4] = v[8] = 1.0;
  });
  const GaussDiagnostic d = is_gauss(planted, 0);
  CHECK(d.rr_defect == doctest::Approx(0.1));
  CHECK(d.rA_defect == 0.0);
  CHECK(is_gauss(hyperbolic_metric(c), 0).rr_defect == 0.0);

  const Chart sc = Chart::of(Grid({Axis::radial_interval("rho", 4.0, 8.0, 9), Axis::interval("theta", 0.6, 2.5, 9), Axis::periodic("phi", 0, 2 * pi, 8)}, 4));
  CHECK(is_gauss(schwarzschild(sc, 1.0).g, 0).rr_defect > 0.3);
  CHECK_THROWS_AS(is_gauss(planted, 3), InputError);
}

TEST_CASE("foliation file round trip") {
  const RadialFoliation f = random_foliation(5, torus_slab("r", 0.0, 1.0, 9, 6, 4));
  std::stringstream ss;
  write_bundle(ss, to_bundle(f, -1.25));
  double Lambda = 0.0;
  const RadialFoliation h = foliation_from_bundle(read_bundle(ss), &Lambda);
  CHECK(Lambda == -1.25);
  CHECK(h.kind == f.kind);
  CHECK(h.radial_axis == f.radial_axis);
  CHECK(h.chart == f.chart);
  CHECK(max_diff(h.V, f.V) == 0.0);
  CHECK(max_diff(h.xi, f.xi) == 0.0);
  CHECK(max_diff(h.g.g(), f.g.g()) == 0.0);
}

TEST_CASE("foliation invariants") {
  const Grid grid = torus_slab("r", 0.0, 1.0, 9, 6, 4);
  const Chart c = slice_chart_of(grid);
  const MetricField g = testing::metric_from(c, [](const std::vector<double>&, double* v) { v[0] = v[3] = 1.0; });
  TensorField V = TensorField::scalar(c, 1.0);
  V.data()[3] = 0.0;
  CHECK_THROWS_AS(RadialFoliation(V, TensorField(c, 0, 1), g, FoliationKind::finite_distance), DomainError);
  CHECK_THROWS_AS(RadialFoliation(TensorField::scalar(Chart::of(grid), 1.0), TensorField(c, 0, 1), g, FoliationKind::finite_distance), InputError);
  CHECK_THROWS_AS(slice_chart_of(Grid({Axis::interval("r", 0, 1, 9)}, 4)), InputError);
  // drho^2 / rho^2 + g on a compactified axis
  const MetricField m = assemble_ambient(ads_foliation(torus_slab("rho", 0.2, 0.8, 9, 6, 4)));
  for (std::size_t k = 0; k < m.nodes(); ++k) {
    const double rho = m.chart().grid().coord(k, 0);
    CHECK(m.g().at(k, 0) == doctest::Approx(1.0 / (rho * rho)));
  }
}
