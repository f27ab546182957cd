#include "stvac/fixtures.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "stvac/error.hpp"

namespace stvac {

namespace {

constexpr double pi = std::numbers::pi;

using KillingFn = void (*)(double R, double x, double th, double ph, double* alpha, double* nu);

struct KillingField {
  const char* name;
  KillingFn fn;
};

// translations d/dX, d/dY, d/dZ and rotations about the three axes, with
// varrho = R - x and dvarrho = -dx
const KillingField killing_fields[] = {
    {"translation z", [](double R, double x, double th, double, double* a, double* nu) {
       a[0] = -std::cos(th);
       nu[0] = -(R - x) * std::sin(th);
     }},
    {"translation x", [](double R, double x, double th, double ph, double* a, double* nu) {
       a[0] = -std::sin(th) * std::cos(ph);
       nu[0] = (R - x) * std::cos(th) * std::cos(ph);
       nu[1] = -(R - x) * std::sin(th) * std::sin(ph);
     }},
    {"translation y", [](double R, double x, double th, double ph, double* a, double* nu) {
       a[0] = -std::sin(th) * std::sin(ph);
       nu[0] = (R - x) * std::cos(th) * std::sin(ph);
       nu[1] = (R - x) * std::sin(th) * std::cos(ph);
     }},
    {"rotation z", [](double R, double x, double th, double, double* a, double* nu) {
       a[0] = 0.0;
       nu[1] = (R - x) * (R - x) * std::sin(th) * std::sin(th);
     }},
    {"rotation x", [](double R, double x, double th, double ph, double* a, double* nu) {
       const double s = (R - x) * (R - x);
       a[0] = 0.0;
       nu[0] = -s * std::sin(ph);
       nu[1] = -s * std::sin(th) * std::cos(th) * std::cos(ph);
     }},
    {"rotation y", [](double R, double x, double th, double ph, double* a, double* nu) {
       const double s = (R - x) * (R - x);
       a[0] = 0.0;
       nu[0] = s * std::cos(ph);
       nu[1] = -s * std::sin(th) * std::cos(th) * std::sin(ph);
     }},
};

const KillingField& killing(int i) {
  if (i < 0 || i >= flat_ball_killing_count()) throw InputError("flat_ball_killing: index out of range");
  return killing_fields[i];
}

}  // namespace

Grid torus_slab(const std::string& radial_name, double r0, double r1, int nr, int nt, int order) {
  return Grid({Axis::radial_interval(radial_name, r0, r1, nr), Axis::periodic("y", 0, 2 * pi, nt), Axis::periodic("z", 0, 2 * pi, nt)}, order);
}

RadialFoliation minkowski_slab(const Grid& grid) {
  const Chart c = slice_chart_of(grid);
  auto g = TensorField::sample(c, 0, 2, Symmetry::symmetric, [](const std::vector<double>&, double* v) { v[0] = v[3] = 1.0; });
  return RadialFoliation(TensorField::scalar(c, 1.0), TensorField(c, 0, 1), MetricField(g, Signature::riemannian), FoliationKind::finite_distance);
}

RadialFoliation ads_slab(const Grid& grid) {
  const Chart c = slice_chart_of(grid);
  const bool rho = grid.axis(0).name == "rho";
  auto r_of = [rho](double s) { return rho ? -std::log(s) : s; };
  auto V = TensorField::sample(c, 0, 0, Symmetry::general, [&](const std::vector<double>& p, double* v) { v[0] = std::exp(r_of(p[0])); });
  auto g = TensorField::sample(c, 0, 2, Symmetry::symmetric, [&](const std::vector<double>& p, double* v) { v[0] = v[3] = std::exp(2 * r_of(p[0])); });
  return RadialFoliation(V, TensorField(c, 0, 1), MetricField(g, Signature::riemannian), FoliationKind::asymptotically_hyperbolic);
}

RadialFoliation random_foliation(unsigned seed, const Grid& grid) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Chart c = slice_chart_of(grid);
  auto coef = [&] {
    std::vector<double> a(6);
    for (double& x : a) x = u(rng);
    return a;
  };
  // low-order trigonometric polynomials in (y, z) times polynomials in r
  auto wave = [](const std::vector<double>& a, const std::vector<double>& p) {
    return a[0] * std::sin(p[1]) + a[1] * std::cos(p[2]) + a[2] * std::sin(p[1] + p[2]) + p[0] * (a[3] * std::cos(p[1]) + a[4] * std::sin(p[2])) +
           a[5] * p[0] * p[0];
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

Grid flat_ball_grid(int nx, int nt, int order, double depth) {
  const double h = 2 * pi / nt;
  return Grid({Axis::radial_interval("x", 0.0, depth, nx), Axis::periodic("theta", 0.5 * h, 2 * pi + 0.5 * h, nt), Axis::periodic("phi", 0, 2 * pi, nt)},
              order);
}

RadialFoliation flat_ball(double R, const Grid& grid) {
  const Chart c = slice_chart_of(grid);
  auto g = TensorField::sample(c, 0, 2, Symmetry::symmetric, [R](const std::vector<double>& p, double* v) {
    const double s = (R - p[0]) * (R - p[0]);
    v[0] = s;
    v[3] = s * std::sin(p[1]) * std::sin(p[1]);
  });
  return RadialFoliation(TensorField::scalar(c, 1.0), TensorField(c, 0, 1), MetricField(g, Signature::riemannian), FoliationKind::finite_distance);
}

int flat_ball_killing_count() { return static_cast<int>(std::size(killing_fields)); }

std::string flat_ball_killing_name(int i) { return killing(i).name; }

std::pair<TensorField, TensorField> flat_ball_killing(double R, const Chart& chart, int i) {
  const KillingFn fn = killing(i).fn;
  const bool boundary = chart.grid().rank() == 2;
  auto pt = [boundary](const std::vector<double>& p) {
    return boundary ? std::array<double, 3>{0.0, p[0], p[1]} : std::array<double, 3>{p[0], p[1], p[2]};
  };
  auto alpha = TensorField::sample(chart, 0, 0, Symmetry::general, [&](const std::vector<double>& p, double* v) {
    const auto q = pt(p);
    double nu[2] = {0, 0};
    fn(R, q[0], q[1], q[2], v, nu);
  });
  auto nu = TensorField::sample(chart, 0, 1, Symmetry::general, [&](const std::vector<double>& p, double* v) {
    const auto q = pt(p);
    double a = 0;
    fn(R, q[0], q[1], q[2], &a, v);
  });
  return {alpha, nu};
}

BoundaryKID flat_ball_kid(double R, const RadialFoliation& f, int i) {
  auto [a, nu] = flat_ball_killing(R, boundary_chart(f), i);
  return boundary_kid(f, a, nu, 0.0);
}

BoundaryKID planted_non_kid(const RadialFoliation& f, double eps) {
  const Chart bc = boundary_chart(f);
  auto nu = TensorField::sample(bc, 0, 1, Symmetry::general, [=](const std::vector<double>& p, double* v) { v[0] = eps * std::sin(p[0]); });
  return boundary_kid(f, TensorField::scalar(bc), nu, 0.0);
}

Chart fg_boundary_chart(int ny, int nz) {
  return Chart::of(Grid({Axis::periodic("y", 0, 2 * pi, ny), Axis::periodic("z", 0, 2 * pi, nz)}, 6)).with_fiber("t");
}

TensorField fg_minkowski(const Chart& c) {
  return TensorField::sample(c, 0, 2, Symmetry::symmetric, [](const std::vector<double>&, double* v) {
    v[0] = -1.0;
    v[4] = v[8] = 1.0;
  });
}

TensorField fg_curved(const Chart& c) {
  return TensorField::sample(c, 0, 2, Symmetry::symmetric, [](const std::vector<double>& p, double* v) {
    v[0] = -(1.0 + std::cos(p[0]) / 3.0);
    v[1] = v[3] = std::sin(p[0]) / 5.0;
    v[4] = 1.0;
    v[8] = 1.0 + std::sin(p[0]) / 4.0;
  });
}

TensorField fg_tt_tensor(const Chart& c, double s) {
  return TensorField::sample(c, 0, 2, Symmetry::symmetric, [=](const std::vector<double>&, double* v) {
    v[5] = v[7] = s;
    v[4] = 0.3 * s;
    v[8] = -0.3 * s;
  });
}

MetricField random_metric(const Chart& c, unsigned seed) {
  const int n = c.dim(), rank = c.grid().rank();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::array<double, 4>> a(n * (n + 1) / 2);
  for (auto& row : a)
    for (double& v : row) v = 0.15 * u(rng);
  auto g = TensorField::sample(c, 0, 2, Symmetry::symmetric, [&](const std::vector<double>& p, double* out) {
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++k) {
        const double x = p[0], y = p[1 % rank], z = p[2 % rank];
        const double v = a[k][0] * std::sin(x + a[k][1]) + a[k][2] * std::cos(y - z) + a[k][3] * std::sin(z);
        out[i * n + j] = out[j * n + i] = (i == j ? 1.0 : 0.0) + v;
      }
  });
  return MetricField(std::move(g), Signature::riemannian);
}

}  // namespace stvac
