#include <cmath>
#include <numbers>

#include "doctest.h"
#include "stvac/continuation.hpp"
#include "stvac/error.hpp"
#include "stvac/quadrature.hpp"
#include "support.hpp"

using namespace stvac;
using std::numbers::pi;

namespace {

std::vector<double> s_range(int a = 3, int b = 10) {
  std::vector<double> s;
  for (int i = a; i <= b; ++i) s.push_back(i);
  return s;
}

// lhs / (s^2 rhs) for a = 0.5 on r in [0, 5], s = 3..10 (tests/oracles/carleman_profiles.py)
constexpr double flat_q[] = {0.29183708248125426, 0.28125285127737226, 0.27500003041331698, 0.27083333355733712,
                             0.26785714285834853, 0.26562500000000495, 0.2638888888888889, 0.2625};
constexpr double hyperbolic_q[] = {0.069444444444444444, 0.093750570255474453, 0.11500001013777233, 0.13194444454044607,
                                   0.14540816326590896, 0.15625000000000275, 0.16512345679012347, 0.1725};
constexpr double lapse_q[] = {1.167348329925017, 1.1250114051094891, 1.1000001216532679, 1.0833333342293485,
                              1.0714285714333941, 1.0625000000000198, 1.0555555555555556, 1.05};

double q_of(const CarlemanRow& r) { return r.lhs / r.rhs; }

// planar black brane in Gauss coordinates, boundary dimension 3:
// V = e^r (1 - w) (1 + w)^{-1/3}, g = e^{2r} (1 + w)^{4/3} delta, w = eps e^{-3r}
RadialFoliation black_brane(double eps, int nr, double r0, double r1) {
  const Grid grid({Axis::radial_interval("r", r0, r1, nr), Axis::periodic("y", 0, 2 * pi, 6), Axis::periodic("z", 0, 2 * pi, 6)}, 8);
  const Chart c = slice_chart_of(grid);
  auto V = TensorField::sample(c, 0, 0, Symmetry::general, [&](const std::vector<double>& p, double* o) {
    const double w = eps * std::exp(-3 * p[0]);
    o[0] = std::exp(p[0]) * (1 - w) * std::pow(1 + w, -1.0 / 3.0);
  });
  auto g = TensorField::sample(c, 0, 2, Symmetry::symmetric, [&](const std::vector<double>& p, double* o) {
    const double w = eps * std::exp(-3 * p[0]);
    o[0] = o[3] = std::exp(2 * p[0]) * std::pow(1 + w, 4.0 / 3.0);
  });
  return RadialFoliation(V, TensorField(c, 0, 1), MetricField(g, Signature::riemannian), FoliationKind::asymptotically_hyperbolic);
}

// max |a - b| / (1 + |b|) over the state, the error measure of the integrator
double state_diff(const SectorState& a, const SectorState& b) {
  double m = 0.0;
  auto add = [&m](double x, double y) { m = std::max(m, std::abs(x - y) / (1 + std::abs(y))); };
  add(a.V, b.V);
  add(a.Vp, b.Vp);
  for (std::size_t i = 0; i < a.g.size(); ++i) add(a.g[i], b.g[i]), add(a.Pi[i], b.Pi[i]);
  for (std::size_t i = 0; i < a.xi.size(); ++i) add(a.xi[i], b.xi[i]), add(a.xip[i], b.xip[i]);
  return m;
}

// torus data with twist satisfying the constraint: V' solved from it
SectorProblem twisted_torus() {
  SectorProblem p;
  p.sector = Sector::torus;
  p.Lambda = -3.0;
  SectorState& s = p.initial;
  s.k = 2;
  s.g = {1.0, 0.1, 0.1, 1.2};
  s.Pi = {1.0, 0.1, 0.1, 0.8};
  s.V = 1.0;
  s.xi = {0.0, 0.0};
  s.xip = {0.3, -0.2};
  s.Vp = 0.0;
  // the constraint is affine in V'
  const double c0 = sector_constraint(p, s);
  s.Vp = 1.0;
  const double c1 = sector_constraint(p, s);
  s.Vp = -c0 / (c1 - c0);
  return p;
}

}  // namespace

TEST_CASE("composite weights integrate quartics exactly") {
  for (int n = 5; n <= 14; ++n) {
    const Axis a = Axis::interval("x", -0.3, 1.7, n);
    const auto w = axis_weights(a);
    for (int p = 0; p <= 4; ++p) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += w[i] * std::pow(a.coord(i), p);
      const double exact = (std::pow(1.7, p + 1) - std::pow(-0.3, p + 1)) / (p + 1);
      CHECK(std::abs(sum - exact) < 1e-13);
    }
  }
  const Axis per = Axis::periodic("y", 0, 2 * pi, 8);
  double sum = 0.0;
  for (double v : axis_weights(per)) sum += v;
  CHECK(std::abs(sum - 2 * pi) < 1e-14);
}

TEST_CASE("weighted integral of an exponential matches the closed form") {
  const Grid grid({Axis::radial_interval("r", 0.0, 5.0, 501), Axis::periodic("y", 0, 2 * pi, 6)}, 8);
  const Chart c = Chart::of(grid);
  for (double m : {12.0, 15.0}) {
    auto f = TensorField::sample(c, 0, 0, Symmetry::general, [m](const std::vector<double>& p, double* o) { o[0] = std::exp(-2 * m * p[0]); });
    for (double s : {3.0, 10.0}) {
      const auto I = weighted_integral(f, 0, [s](double r) { return 2 * s * r; }, DecayEnd::end);
      const double k = 2 * (m - s);
      const double exact = 2 * pi * (1 - std::exp(-5 * k)) / k;
      CHECK(std::abs(I.value / exact - 1) < 1e-6);
    }
  }
}

TEST_CASE("weighted integral edge cases") {
  const Grid grid({Axis::radial_interval("x", 0.0, 1.0, 101), Axis::periodic("y", 0, 2 * pi, 6)}, 6);
  const Chart c = Chart::of(grid);
  auto lw = [](double x) { return -6.0 * std::log(x); };
  const auto zero = weighted_integral(TensorField::scalar(c), 0, lw, DecayEnd::start);
  CHECK(zero.value == 0.0);
  CHECK(std::isinf(zero.log_value));
  // nonzero at x = 0 against a singular weight
  CHECK_THROWS_AS(weighted_integral(TensorField::scalar(c, 1.0), 0, lw, DecayEnd::start), DivergenceError);
  // x^2 against x^-6: not integrable at 0
  auto p2 = TensorField::sample(c, 0, 0, Symmetry::general, [](const std::vector<double>& p, double* o) { o[0] = p[0] * p[0]; });
  CHECK_THROWS_AS(weighted_integral(p2, 0, lw, DecayEnd::start), DivergenceError);
  auto neg = TensorField::scalar(c, -1.0);
  CHECK_THROWS_AS(weighted_integral(neg, 0, lw, DecayEnd::start), DomainError);
}

TEST_CASE("identical pair is trivial") {
  PairRecipe r;
  r.amplitude = 0.0;
  r.radial_nodes = 101;
  const SolutionPair p = manufactured_pair(r);
  CarlemanConfig cfg{s_range(), 1};
  for (auto form : {CarlemanForm::shape, CarlemanForm::shape_derivatives, CarlemanForm::lapse}) {
    const auto rep = carleman_check(p, form, cfg);
    CHECK(rep.trivial);
    CHECK(rep.holds());
    for (const auto& row : rep.rows) CHECK(row.lhs == 0.0);
  }
}

TEST_CASE("exponential family gives the exact ratio m^2/4") {
  PairRecipe r;
  r.infinite_order = false;
  r.exponent = 12.0;
  r.seed = 7;
  const SolutionPair p = manufactured_pair(r);
  const auto rep = carleman_check(p, CarlemanForm::shape, {s_range()});
  for (const auto& row : rep.rows) {
    CAPTURE(row.s);
    CHECK(std::abs(q_of(row) * row.s * row.s / 36.0 - 1.0) < 1e-6);
  }
}

TEST_CASE("flat reference: ratios match the oracle and scale like s^2") {
  for (unsigned long seed : {1ul, 2ul}) {
    PairRecipe r;
    r.seed = seed;
    r.decay = 0.5;
    const SolutionPair p = manufactured_pair(r);
    const auto shape = carleman_check(p, CarlemanForm::shape, {s_range()});
    const auto lapse = carleman_check(p, CarlemanForm::lapse, {s_range()});
    for (int i = 0; i < 8; ++i) {
      CAPTURE(shape.rows[i].s);
      CHECK(std::abs(q_of(shape.rows[i]) / flat_q[i] - 1) < 1e-6);
      CHECK(std::abs(q_of(lapse.rows[i]) / lapse_q[i] - 1) < 1e-6);
    }
    CHECK(shape.holds());
    CHECK(shape.spread < 1.15);
    CHECK(lapse.spread < 1.15);
  }
}

TEST_CASE("hyperbolic reference: ratios match the oracle") {
  PairRecipe r;
  r.reference = PairReference::hyperbolic;
  r.decay = 0.5;
  r.seed = 3;
  const SolutionPair p = manufactured_pair(r);
  const auto rep = carleman_check(p, CarlemanForm::shape, {s_range()});
  for (int i = 0; i < 8; ++i) CHECK(std::abs(q_of(rep.rows[i]) / hyperbolic_q[i] - 1) < 1e-6);
  CHECK(rep.holds());
  // the ratio drifts with s over this range
  CHECK(rep.spread > 2.0);
}

TEST_CASE("derivative forms hold with a finite constant") {
  for (auto ref : {PairReference::flat, PairReference::hyperbolic}) {
    PairRecipe r;
    r.reference = ref;
    r.seed = 11;
    const SolutionPair p = manufactured_pair(r);
    for (int k = 0; k <= 2; ++k) {
      const auto rep = carleman_check(p, CarlemanForm::shape_derivatives, {s_range(), k});
      CAPTURE(k);
      CHECK(rep.holds());
      CHECK(rep.C < 100.0);
    }
  }
}

TEST_CASE("finite-distance form holds and is stable under refinement") {
  PairRecipe r;
  r.reference = PairReference::finite;
  r.seed = 5;
  const auto coarse = carleman_check(manufactured_pair(r), CarlemanForm::finite_distance, {s_range()});
  r.radial_nodes = 2001;
  const auto fine = carleman_check(manufactured_pair(r), CarlemanForm::finite_distance, {s_range()});
  CHECK(coarse.holds());
  CHECK(fine.holds());
  for (std::size_t i = 0; i < fine.rows.size(); ++i) {
    CAPTURE(fine.rows[i].s);
    CHECK(std::abs(coarse.rows[i].needed_C / fine.rows[i].needed_C - 1) < 1e-3);
  }
}

TEST_CASE("finite-order profiles violate the decay hypothesis") {
  PairRecipe r;
  r.reference = PairReference::finite;
  r.infinite_order = false;
  r.exponent = 5.0;
  const SolutionPair fin = manufactured_pair(r);
  CHECK_THROWS_AS(carleman_check(fin, CarlemanForm::finite_distance, {{8.0}}), DivergenceError);
  r.reference = PairReference::hyperbolic;
  r.exponent = 3.0;
  const SolutionPair hyp = manufactured_pair(r);
  CHECK_THROWS_AS(carleman_check(hyp, CarlemanForm::shape, {{3.0}}), DivergenceError);
}

TEST_CASE("carleman input validation") {
  PairRecipe r;
  r.radial_nodes = 101;
  const SolutionPair p = manufactured_pair(r);
  CHECK_THROWS_AS(carleman_check(p, CarlemanForm::shape, {{2.0}}), InputError);
  CHECK_THROWS_AS(carleman_check(p, CarlemanForm::shape, {{}}), InputError);
  CHECK_THROWS_AS(carleman_check(p, CarlemanForm::shape_derivatives, {{3.0}, 3}), InputError);
  CHECK_THROWS_AS(carleman_check(p, CarlemanForm::finite_distance, {{3.0}}), InputError);
}

TEST_CASE("estia: identical data give zero") {
  const SolutionPair base = random_asymptotic_pair(4);
  const SolutionPair same(base.f, base.f);
  const EstiaSample s = estia_sample(same);
  CHECK_FALSE(s.rejected);
  CHECK(s.lhs_max == 0.0);
  CHECK(s.ratio == 0.0);
}

TEST_CASE("estia: AdS lapse pair") {
  const EstiaSample s = estia_sample(ads_lapse_pair(0.1));
  CHECK_FALSE(s.rejected);
  CHECK(s.lhs_max > 0.0);
  CHECK(std::isfinite(s.ratio));
  CHECK(s.ratio < 10.0);
  CHECK(std::isfinite(s.groups.pi));
  CHECK(s.groups.lapse > 0.0);
  CHECK(std::isfinite(s.groups.lapse));
  CHECK(s.groups.twist_a == 0.0);
  CHECK(s.groups.twist_b == 0.0);
  CHECK(s.groups.twist_c == 0.0);
}

TEST_CASE("estia: random samples share one constant, stable under refinement") {
  std::vector<SolutionPair> coarse, fine;
  for (unsigned long seed = 1; seed <= 20; ++seed) {
    coarse.push_back(random_asymptotic_pair(seed, 41));
    fine.push_back(random_asymptotic_pair(seed, 81));
  }
  const EstiaReport a = estia_check(coarse), b = estia_check(fine);
  CHECK(a.accepted == 20);
  CHECK(b.accepted == 20);
  CHECK(std::isfinite(a.C));
  CHECK(std::abs(a.C / b.C - 1) < 0.02);
  for (const auto& s : b.samples) {
    CHECK(s.split_defect < 1e-12);
    CHECK(std::isfinite(s.groups.max()));
    CHECK(s.groups.twist_a > 0.0);
  }
}

TEST_CASE("estia: decay violation is rejected") {
  const SolutionPair base = random_asymptotic_pair(9);
  RadialFoliation bad = base.f;
  // xi' of order one
  for (std::size_t n = 0; n < bad.xi.nodes(); ++n) bad.xi.at(n, 0) = bad.radius(n);
  const EstiaSample s = estia_sample(SolutionPair(bad, base.f0));
  CHECK(s.rejected);
  CHECK(s.diagnostic.find("xi'") != std::string::npos);
}

TEST_CASE("mean curvature identity on an Einstein pair") {
  const RadialFoliation brane = black_brane(0.5, 321, 0.0, 2.0);
  CHECK(gauss_residuals(brane, -3.0).max_abs() < 1e-6);
  const SolutionPair ads = ads_lapse_pair(0.0, 321, 6, 2.0);
  const SolutionPair p(brane, RadialFoliation(ads.f0.V.with_chart(brane.chart), TensorField(brane.chart, 0, 1),
                                              MetricField(ads.f0.g.g().with_chart(brane.chart), Signature::riemannian), FoliationKind::asymptotically_hyperbolic));
  const auto id = mean_curvature_identity(p);
  CHECK(testing::max_diff(id.lhs, TensorField::scalar(brane.chart)) > 1e-3);
  CHECK(id.defect < 1e-6);
  CHECK(id.untwisted_defect == doctest::Approx(id.defect).epsilon(1e-12));
}

TEST_CASE("mean curvature identity defect equals the residual difference off shell") {
  const SolutionPair p = random_asymptotic_pair(12);
  const auto id = mean_curvature_identity(p);
  const auto r = gauss_residuals(p.f, -3.0), r0 = gauss_residuals(p.f0, -3.0);
  const TensorField expect = r0.rr3 - r.rr3;
  CHECK(testing::max_diff(id.lhs - id.rhs, expect) < 1e-9 * (1 + expect.max_abs()));
  CHECK(testing::max_diff(id.rhs, id.rhs_untwisted) > 1e-3);
}

TEST_CASE("sector: identical data stay together") {
  const auto t = continuation_ode(ads_sector(2), ads_sector(2), 0.0, 1.0, 51, 1e-12);
  CHECK_FALSE(t.truncated);
  CHECK(t.sup <= 1e-9);
}

TEST_CASE("sector: AdS solution and mismatched second fundamental form") {
  SectorProblem b = ads_sector(2);
  for (double& v : b.initial.Pi) v *= 1.001;
  const auto t = continuation_ode(ads_sector(2), b, 0.0, 1.0, 11, 1e-12);
  REQUIRE(t.radius.size() == 11);
  for (std::size_t i = 0; i < t.radius.size(); ++i) {
    const auto& s = t.a.states[i];
    const double r = t.radius[i];
    CHECK(std::abs(s.g[0] / std::exp(2 * r) - 1) < 1e-10);
    CHECK(std::abs(s.V / std::exp(r) - 1) < 1e-10);
    CHECK(std::abs(t.a.constraint[i]) < 1e-9);
  }
  CHECK(t.sup >= 5e-4);
  // independent integrator (tests/oracles/sector_ode.py)
  CHECK(std::abs(t.separation.back() - 5.8822817854364828e-04) < 1e-9);
  CHECK(std::abs(t.separation[5] - 3.1636193892148334e-04) < 1e-9);
}

TEST_CASE("sector: Schwarzschild from boundary Cauchy data") {
  const double m = 1.0, rb = 3.0;
  const auto sol = continuation_ode(schwarzschild_sector(m, rb), schwarzschild_sector(m, rb), 0.0, 10.0, 41, 1e-12);
  REQUIRE_FALSE(sol.truncated);
  double err = 0.0, con = 0.0;
  for (std::size_t i = 0; i < sol.radius.size(); ++i) {
    err = std::max(err, std::abs(sol.a.states[i].V - schwarzschild_lapse(m, rb, sol.radius[i])));
    con = std::max(con, std::abs(sol.a.constraint[i]));
  }
  CHECK(err < 1e-8);
  CHECK(con < 1e-9);
  CHECK(schwarzschild_lapse(m, rb, 0.0) == doctest::Approx(std::sqrt(1.0 / 3.0)));
}

TEST_CASE("sector: integrating out and back returns the data") {
  for (const SectorProblem& p : {ads_sector(2), twisted_torus(), schwarzschild_sector(1.0, 3.0)}) {
    const auto out = integrate_sector(p, 0.0, {1.0}, 1e-12);
    SectorProblem back = p;
    back.initial = out.states.back();
    const auto ret = integrate_sector(back, 1.0, {0.0}, 1e-12);
    CHECK(state_diff(ret.states.back(), p.initial) < 1e-11);
  }
}

TEST_CASE("sector system agrees with the field equations") {
  const SectorProblem p = twisted_torus();
  CHECK(std::abs(sector_constraint(p, p.initial)) < 1e-14);
  const int nr = 81;
  std::vector<double> radii;
  for (int i = 1; i < nr; ++i) radii.push_back(1.0 * i / (nr - 1));
  const auto sol = integrate_sector(p, 0.0, radii, 1e-13);
  REQUIRE(sol.states.size() == radii.size());
  std::vector<SectorState> states{p.initial};
  states.insert(states.end(), sol.states.begin(), sol.states.end());
  const Grid grid({Axis::radial_interval("r", 0.0, 1.0, nr), Axis::periodic("y", 0, 2 * pi, 5), Axis::periodic("z", 0, 2 * pi, 5)}, 8);
  const Chart c = slice_chart_of(grid);
  auto at = [&](const std::vector<double>& pt) { return states[static_cast<int>(std::lround(pt[0] * (nr - 1)))]; };
  auto V = TensorField::sample(c, 0, 0, Symmetry::general, [&](const std::vector<double>& pt, double* o) { o[0] = at(pt).V; });
  auto xi = TensorField::sample(c, 0, 1, Symmetry::general, [&](const std::vector<double>& pt, double* o) {
    o[0] = at(pt).xi[0];
    o[1] = at(pt).xi[1];
  });
  auto g = TensorField::sample(c, 0, 2, Symmetry::symmetric, [&](const std::vector<double>& pt, double* o) {
    for (int i = 0; i < 4; ++i) o[i] = at(pt).g[i];
  });
  const RadialFoliation f(V, xi, MetricField(g, Signature::riemannian), FoliationKind::asymptotically_hyperbolic);
  const auto r = gauss_residuals(f, p.Lambda);
  CHECK(r.AB.max_abs() < 1e-6);
  CHECK(r.rr.max_abs() < 1e-6);
  CHECK(r.divA.max_abs() < 1e-6);
  CHECK(r.max_abs() < 1e-6);
}

TEST_CASE("sector: blow-up truncates the trace") {
  // inward from the sphere rho = 3 the lapse reaches zero at the horizon
  const auto sol = integrate_sector(schwarzschild_sector(1.0, 3.0), 0.0, {-1.0, -2.0, -3.0, -4.0}, 1e-10);
  CHECK(sol.truncated);
  CHECK_FALSE(sol.diagnostic.empty());
  CHECK(sol.states.size() < 4);
}

TEST_CASE("sector input validation") {
  SectorProblem p = schwarzschild_sector(1.0, 3.0);
  p.initial.g[3] = 10.0;
  CHECK_THROWS_AS(integrate_sector(p, 0.0, {1.0}), InputError);
  p = ads_sector(2);
  p.initial.g.pop_back();
  CHECK_THROWS_AS(integrate_sector(p, 0.0, {1.0}), InputError);
  CHECK_THROWS_AS(integrate_sector(ads_sector(2), 0.0, {1.0, 0.5}), InputError);
  CHECK_THROWS_AS(schwarzschild_sector(2.0, 3.0), InputError);
}
