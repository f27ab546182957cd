#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "stvac/calculus.hpp"
#include "stvac/derivative.hpp"
#include "stvac/error.hpp"
#include "support.hpp"

using namespace stvac;
using testing::max_diff;
using testing::metric_from;

namespace {

constexpr double pi = std::numbers::pi;

Chart torus(int n) {
  return Chart::of(Grid({Axis::periodic("x", 0, 2 * pi, n), Axis::periodic("y", 0, 2 * pi, n)}));
}

Chart hyperbolic_chart(int nr, int ny, int order = 4) {
  return Chart::of(Grid({Axis::radial_interval("r", 0.0, 1.0, nr), Axis::periodic("x", 0, 2 * pi, ny),
                         Axis::periodic("y", 0, 2 * pi, ny)},
                        order));
}

MetricField hyperbolic(const Chart& c) {
  return metric_from(c, [](const std::vector<double>& p, double* g) {
    const double e = std::exp(2 * p[0]);
    g[0] = 1;
    g[4] = e;
    g[8] = e;
  });
}

Chart sphere_chart(int nt, int np, bool periodic_phi = true, int order = 4, double t0 = 0.4, double t1 = 2.6) {
  Axis phi = periodic_phi ? Axis::periodic("phi", 0, 2 * pi, np) : Axis::interval("phi", 0.0, 1.0, np);
  return Chart::of(Grid({Axis::interval("theta", t0, t1, nt), phi}, order));
}

MetricField sphere(const Chart& c) {
  return metric_from(c, [](const std::vector<double>& p, double* g) {
    g[0] = 1;
    g[3] = std::sin(p[0]) * std::sin(p[0]);
  });
}

// smooth positive-definite metric on a 3-torus with random low modes
MetricField random_metric(const Chart& c, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  double a[6][4];
  for (auto& row : a)
    for (double& v : row) v = 0.15 * u(rng);
  return metric_from(c, [&](const std::vector<double>& p, double* g) {
    int k = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j, ++k) {
        const double v = a[k][0] * std::sin(p[0] + a[k][1]) + a[k][2] * std::cos(p[1] - p[2]) + a[k][3] * std::sin(p[2]);
        g[i * 3 + j] = g[j * 3 + i] = (i == j ? 1.0 : 0.0) + v;
      }
  });
}

}  // namespace

TEST_CASE("christoffel of a flat metric vanishes") {
  const Chart c = torus(12);
  const MetricField m = metric_from(c, [](const std::vector<double>&, double* g) {
    g[0] = 1;
    g[3] = 1;
  });
  CHECK(christoffel(m).max_abs() < 1e-14);
  CHECK(ricci(m).max_abs() < 1e-14);
}

TEST_CASE("christoffel and ricci of hyperbolic space") {
  const Chart c = hyperbolic_chart(41, 8, 6);
  const MetricField m = hyperbolic(c);
  const TensorField gam = christoffel(m);
  const Grid& g = c.grid();
  double e1 = 0, e2 = 0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double e = std::exp(2 * g.coord(n, 0));
    for (int A = 1; A < 3; ++A) {
      e1 = std::max(e1, std::abs(gam.at(n, gam.index({0, A, A})) + e));
      e2 = std::max(e2, std::abs(gam.at(n, gam.index({A, 0, A})) - 1.0));
      e2 = std::max(e2, std::abs(gam.at(n, gam.index({A, A, 0})) - 1.0));
    }
  }
  CHECK(e1 < 1e-7);
  CHECK(e2 < 1e-7);
  TensorField ric = ricci(m);
  ric.axpy(2.0, m.g());
  CHECK(ric.max_abs() < 1e-5);
}

TEST_CASE("round sphere: christoffel, positive ricci, scalar curvature") {
  const Chart c = sphere_chart(41, 16, true, 6);
  const MetricField m = sphere(c);
  const TensorField gam = christoffel(m);
  const Grid& g = c.grid();
  double err = 0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const double t = g.coord(n, 0);
    err = std::max(err, std::abs(gam.at(n, gam.index({0, 1, 1})) + std::sin(t) * std::cos(t)));
    err = std::max(err, std::abs(gam.at(n, gam.index({1, 0, 1})) - std::cos(t) / std::sin(t)));
  }
  CHECK(err < 1e-6);
  // Ric = g and R = 2, to within ten Richardson truncation estimates
  const Chart cc(c.grid().coarsened(), c.coordinates());
  const MetricField mc = sphere(cc);
  const TensorField res = ricci(m) - m.g();
  CHECK(res.max_abs() <= 10 * truncation_estimate(res, ricci(mc) - mc.g(), 6));
  TensorField s = scalar_curvature(m);
  TensorField sc = scalar_curvature(mc);
  for (double& v : s.data()) v -= 2.0;
  for (double& v : sc.data()) v -= 2.0;
  CHECK(s.max_abs() <= 10 * truncation_estimate(s, sc, 6));
  CHECK(testing::max_diff_interior(ricci(m), m.g(), 8) < 1e-6);
}

TEST_CASE("riemann tensor pinned on the sphere") {
  const Chart c = sphere_chart(41, 16, true, 6);
  const MetricField m = sphere(c);
  const TensorField r = riemann(m, christoffel(m));
  const Grid& g = c.grid();
  for (std::size_t n = 0; n < g.size(); n += 37) {
    const double s2 = std::pow(std::sin(g.coord(n, 0)), 2);
    // R^theta_{phi theta phi} = sin^2 theta for the unit sphere
    CHECK(r.at(n, r.index({0, 1, 0, 1})) == doctest::Approx(s2).epsilon(1e-5));
    CHECK(r.at(n, r.index({0, 1, 1, 0})) == doctest::Approx(-s2).epsilon(1e-5));
  }
}

TEST_CASE("operator convergence under grid halving") {
  // interval axes only, so the configured finite-difference order governs the error
  for (int p : {4, 6}) {
    double prev_c = 0, prev_r = 0, prev_l = 0;
    for (int k = 0; k < 3; ++k) {
      const int n = 16 * (1 << k) + 1;
      const Chart c = sphere_chart(n, n, false, p, 1.0, 2.0);
      const MetricField m = sphere(c);
      TensorField gam_exact(c, 1, 2);
      const Grid& g = c.grid();
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = g.coord(i, 0);
        gam_exact.at(i, gam_exact.index({0, 1, 1})) = -std::sin(t) * std::cos(t);
        gam_exact.at(i, gam_exact.index({1, 0, 1})) = std::cos(t) / std::sin(t);
        gam_exact.at(i, gam_exact.index({1, 1, 0})) = std::cos(t) / std::sin(t);
      }
      const double ec = max_diff(christoffel(m), gam_exact);
      const double er = max_diff(ricci(m), m.g());
      // h = f g with f = cos(theta): Delta_L(f g) = -(Delta f) g = 2 cos(theta) g on the unit sphere
      TensorField f = TensorField::sample(c, 0, 0, Symmetry::general, [](const std::vector<double>& q, double* v) { v[0] = std::cos(q[0]); });
      const TensorField h = times(f, m.g());
      const TensorField want = 2.0 * h;
      const double el = max_diff(lichnerowicz(m, h), want);
      if (k > 0) {
        const double target = std::pow(2.0, p);
        CHECK(prev_c / ec == doctest::Approx(target).epsilon(0.2));
        CHECK(prev_r / er == doctest::Approx(target).epsilon(0.2));
        CHECK(prev_l / el == doctest::Approx(target).epsilon(0.2));
      }
      prev_c = ec;
      prev_r = er;
      prev_l = el;
    }
  }
}

TEST_CASE("lichnerowicz identities") {
  const Chart c3 = Chart::of(Grid({Axis::periodic("x", 0, 2 * pi, 24), Axis::periodic("y", 0, 2 * pi, 24),
                                   Axis::periodic("z", 0, 2 * pi, 24)}));
  for (unsigned seed : {1u, 2u}) {
    const MetricField m = random_metric(c3, seed);
    CHECK(lichnerowicz(m, m.g()).max_abs() < 1e-9);
  }
  // flat metric: constant h -> 0, f delta -> -(Delta f) delta
  const Chart c = torus(16);
  const MetricField flat_m = metric_from(c, [](const std::vector<double>&, double* g) {
    g[0] = 1;
    g[3] = 1;
  });
  TensorField hc = TensorField::sample(c, 0, 2, Symmetry::symmetric, [](const std::vector<double>&, double* h) {
    h[0] = 1.5;
    h[1] = h[2] = -0.3;
    h[3] = 2;
  });
  CHECK(lichnerowicz(flat_m, hc).max_abs() < 1e-12);
  TensorField hf = TensorField::sample(c, 0, 2, Symmetry::symmetric, [](const std::vector<double>& p, double* h) {
    h[0] = h[3] = std::sin(p[0]) * std::cos(2 * p[1]);
  });
  TensorField want = 5.0 * hf;  // -Delta(sin x cos 2y) = 5 sin x cos 2y
  CHECK(max_diff(lichnerowicz(flat_m, hf), want) < 1e-11);
  TensorField bad = hc;
  bad.comp(1)[0] += 1.0;
  bad.set_symmetry(Symmetry::general);
  CHECK_THROWS_AS(lichnerowicz(flat_m, bad), InputError);
}

TEST_CASE("divergence sign convention") {
  const Chart c = Chart::of(Grid({Axis::interval("x", -1, 1, 21), Axis::periodic("y", 0, 2 * pi, 8)}));
  const MetricField m = metric_from(c, [](const std::vector<double>&, double* g) {
    g[0] = 1;
    g[3] = 1;
  });
  const TensorField h = TensorField::sample(c, 0, 2, Symmetry::symmetric, [](const std::vector<double>& p, double* v) { v[0] = p[0]; });
  const TensorField d = divergence(m, h);
  for (double v : d.comp(0)) CHECK(v == doctest::Approx(-1.0));
  CHECK(divergence(m, m.g()).max_abs() < 1e-13);
  CHECK_THROWS_AS(divergence(m, TensorField(c, 0, 1)), InputError);

  // hyperbolic: div(f(r) g) = -f'(r) dr
  const Chart hc = hyperbolic_chart(41, 8, 6);
  const MetricField hm = hyperbolic(hc);
  TensorField f = TensorField::sample(hc, 0, 0, Symmetry::general, [](const std::vector<double>& p, double* v) { v[0] = std::sin(2 * p[0]); });
  const TensorField dv = divergence(hm, times(f, hm.g()));
  double err = 0;
  for (std::size_t n = 0; n < hc.size(); ++n) {
    err = std::max(err, std::abs(dv.at(n, 0) + 2 * std::cos(2 * hc.grid().coord(n, 0))));
    err = std::max(err, std::abs(dv.at(n, 1)) + std::abs(dv.at(n, 2)));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("delta and delta-star are adjoint on a torus") {
  const Chart c = Chart::of(Grid({Axis::periodic("x", 0, 2 * pi, 24), Axis::periodic("y", 0, 2 * pi, 24)}));
  const MetricField m = metric_from(c, [](const std::vector<double>& p, double* g) {
    g[0] = 1.3 + 0.2 * std::sin(p[0]);
    g[1] = g[2] = 0.1 * std::cos(p[1]);
    g[3] = 1.0 + 0.3 * std::cos(p[0] + p[1]);
  });
  const TensorField h = TensorField::sample(c, 0, 2, Symmetry::symmetric, [](const std::vector<double>& p, double* v) {
    v[0] = std::sin(p[1]);
    v[1] = v[2] = std::cos(p[0]) * std::sin(p[1]);
    v[3] = 0.5 + std::cos(2 * p[0]);
  });
  const TensorField w = TensorField::sample(c, 0, 1, Symmetry::general, [](const std::vector<double>& p, double* v) {
    v[0] = std::cos(p[0] + 2 * p[1]);
    v[1] = std::sin(p[0]);
  });
  const TensorField lhs = inner(m, divergence(m, h), w);
  const TensorField rhs = inner(m, h, symmetrized_gradient(m, w));
  double a = 0, b = 0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double vol = std::sqrt(m.det()[n]);
    a += lhs.at(n, 0) * vol;
    b += rhs.at(n, 0) * vol;
  }
  CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
}

TEST_CASE("symmetrized gradient") {
  const Chart c = torus(16);
  const MetricField flat_m = metric_from(c, [](const std::vector<double>&, double* g) {
    g[0] = 1;
    g[3] = 1;
  });
  const TensorField f = TensorField::sample(c, 0, 0, Symmetry::general, [](const std::vector<double>& p, double* v) { v[0] = std::sin(p[0]) * std::cos(p[1]); });
  CHECK(max_diff(symmetrized_gradient(flat_m, gradient_tensor(f)), hessian(flat_m, f)) < 1e-12);
  TensorField w0(c, 0, 1);
  for (double& v : w0.comp(0)) v = 0.7;
  CHECK(symmetrized_gradient(flat_m, w0).max_abs() < 1e-13);

  // rotation generators of the round sphere
  const Chart sc = sphere_chart(41, 16, true, 6);
  const MetricField sm = sphere(sc);
  const TensorField wz = TensorField::sample(sc, 0, 1, Symmetry::general, [](const std::vector<double>& p, double* v) {
    v[1] = std::sin(p[0]) * std::sin(p[0]);
  });
  const TensorField wx = TensorField::sample(sc, 0, 1, Symmetry::general, [](const std::vector<double>& p, double* v) {
    v[0] = -std::sin(p[1]);
    v[1] = -std::sin(p[0]) * std::cos(p[0]) * std::cos(p[1]);
  });
  CHECK(symmetrized_gradient(sm, wz).max_abs() < 1e-6);
  CHECK(symmetrized_gradient(sm, wx).max_abs() < 1e-6);
}

TEST_CASE("lie derivative") {
  const Chart c = Chart::of(Grid({Axis::interval("x", -1, 1, 21), Axis::interval("y", -1, 1, 21)}));
  const MetricField m = metric_from(c, [](const std::vector<double>&, double* g) {
    g[0] = 1;
    g[3] = 1;
  });
  const TensorField rot = TensorField::sample(c, 1, 0, Symmetry::general, [](const std::vector<double>& p, double* v) {
    v[0] = -p[1];
    v[1] = p[0];
  });
  CHECK(lie_derivative(rot, m.g()).max_abs() < 1e-12);
  const TensorField dil = TensorField::sample(c, 1, 0, Symmetry::general, [](const std::vector<double>& p, double* v) { v[0] = p[0]; });
  TensorField dx2(c, 0, 2, Symmetry::symmetric);
  for (double& v : dx2.comp(0)) v = 1.0;
  const TensorField l = lie_derivative(dil, dx2);
  for (double v : l.comp(0)) CHECK(v == doctest::Approx(2.0));
  CHECK(l.max_abs(1) + l.max_abs(3) < 1e-13);
  TensorField ex(c, 1, 0);
  for (double& v : ex.comp(0)) v = 1.0;
  CHECK(lie_derivative(ex, dx2).max_abs() < 1e-13);
  CHECK_THROWS_AS(lie_derivative(ex, TensorField(c, 0, 3)), InputError);

  // for metrics L_X g = 2 delta*(X flat)
  const Chart sc = sphere_chart(41, 16, true, 6);
  const MetricField sm = sphere(sc);
  const TensorField X = TensorField::sample(sc, 1, 0, Symmetry::general, [](const std::vector<double>& p, double* v) {
    v[0] = std::cos(p[1]) * std::sin(p[0]);
    v[1] = 0.3 + std::sin(2 * p[1]);
  });
  TensorField want = 2.0 * symmetrized_gradient(sm, flat(sm, X));
  CHECK(max_diff(lie_derivative(X, sm.g()), want) < 1e-6);
}

TEST_CASE("hessian") {
  const Chart c = Chart::of(Grid({Axis::interval("x", -1, 1, 21), Axis::periodic("y", 0, 1, 8)}));
  const MetricField m = metric_from(c, [](const std::vector<double>&, double* g) {
    g[0] = 1;
    g[3] = 1;
  });
  const TensorField f = TensorField::sample(c, 0, 0, Symmetry::general, [](const std::vector<double>& p, double* v) { v[0] = p[0] * p[0]; });
  const TensorField h = hessian(m, f);
  for (double v : h.comp(0)) CHECK(v == doctest::Approx(2.0));
  CHECK(hessian(m, TensorField::scalar(c, 3.0)).max_abs() < 1e-11);

  // g+ = dr^2 + e^{2r} delta, f = f(r): Hess_rr = f'', Hess_rA = 0, Hess_AB = Pi_AB f' with Pi = e^{2r} delta
  const Chart hc = hyperbolic_chart(41, 8, 6);
  const MetricField hm = hyperbolic(hc);
  const TensorField fr = TensorField::sample(hc, 0, 0, Symmetry::general, [](const std::vector<double>& p, double* v) { v[0] = std::sin(p[0]); });
  const TensorField hr = hessian(hm, fr);
  double err = 0;
  for (std::size_t n = 0; n < hc.size(); ++n) {
    const double r = hc.grid().coord(n, 0);
    err = std::max(err, std::abs(hr.at(n, 0) + std::sin(r)));
    err = std::max(err, std::abs(hr.at(n, 1)) + std::abs(hr.at(n, 2)));
    err = std::max(err, std::abs(hr.at(n, 4) - std::exp(2 * r) * std::cos(r)));
    err = std::max(err, std::abs(hr.at(n, 5)));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("ricci commutes with an explicit coordinate change") {
  // round sphere in (theta, phi) versus (u, phi) with theta = u + 0.2 sin u
  const Chart c = Chart::of(Grid({Axis::interval("u", 0.5, 2.3, 41), Axis::periodic("phi", 0, 2 * pi, 16)}, 6));
  const MetricField m = metric_from(c, [](const std::vector<double>& p, double* g) {
    const double th = p[0] + 0.2 * std::sin(p[0]);
    const double dth = 1.0 + 0.2 * std::cos(p[0]);
    g[0] = dth * dth;
    g[3] = std::sin(th) * std::sin(th);
  });
  // the sphere is Einstein, so the pullback of Ric is the pulled-back metric
  const Chart cc(c.grid().coarsened(), c.coordinates());
  const MetricField mc = metric_from(cc, [](const std::vector<double>& p, double* g) {
    const double th = p[0] + 0.2 * std::sin(p[0]);
    const double dth = 1.0 + 0.2 * std::cos(p[0]);
    g[0] = dth * dth;
    g[3] = std::sin(th) * std::sin(th);
  });
  const TensorField res = ricci(m) - m.g();
  CHECK(res.max_abs() <= 10 * truncation_estimate(res, ricci(mc) - mc.g(), 6));
}

TEST_CASE("linearized ricci matches a finite difference of ricci") {
  const Chart c3 = Chart::of(Grid({Axis::periodic("x", 0, 2 * pi, 24), Axis::periodic("y", 0, 2 * pi, 24),
                                   Axis::periodic("z", 0, 2 * pi, 24)}));
  const MetricField m = random_metric(c3, 7);
  const TensorField h = TensorField::sample(c3, 0, 2, Symmetry::symmetric, [](const std::vector<double>& p, double* v) {
    v[0] = std::sin(p[1]);
    v[1] = v[3] = 0.3 * std::cos(p[2]);
    v[4] = std::cos(p[0] - p[2]);
    v[8] = 0.5 * std::sin(p[0]);
  });
  const double eps = 1e-5;
  const TensorField rp = ricci(MetricField(m.g() + eps * h, Signature::riemannian));
  const TensorField rm = ricci(MetricField(m.g() - eps * h, Signature::riemannian));
  TensorField fd = (1.0 / (2 * eps)) * (rp - rm);
  CHECK(max_diff(fd, linearized_ricci(m, h)) < 1e-6);
}

TEST_CASE("singular metrics are reported with the node index") {
  const Chart c = torus(8);
  try {
    metric_from(c, [](const std::vector<double>& p, double* g) {
      g[0] = 1;
      g[3] = p[0] == 0.0 && p[1] > 1.0 ? 0.0 : 1.0;
    });
    FAIL("expected an exception");
  } catch (const SingularMetricError& e) {
    CHECK(e.node() == 2);
  }
  CHECK_THROWS_AS(metric_from(c, [](const std::vector<double>&, double* g) {
                    g[0] = -1;
                    g[3] = 1;
                  }),
                  SingularMetricError);
  CHECK_NOTHROW(metric_from(
      c,
      [](const std::vector<double>&, double* g) {
        g[0] = -1;
        g[3] = 1;
      },
      Signature::lorentzian));
}
