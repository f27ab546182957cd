#include "stvac/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "stvac/calculus.hpp"
#include "stvac/error.hpp"
#include "stvac/quadrature.hpp"

namespace stvac {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

TensorField embed(const TensorField& t, const Chart& ambient) {
  const int n = t.dim();
  const int d = n + 1;
  TensorField out(ambient, 0, 2, Symmetry::symmetric);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto src = t.comp(a * n + b);
      std::copy(src.begin(), src.end(), out.comp((a + 1) * d + b + 1).begin());
    }
  return out;
}

TensorField sqrt_abs(TensorField t) {
  for (double& v : t.data()) v = std::sqrt(std::abs(v));
  return t;
}

}  // namespace

SolutionPair::SolutionPair(RadialFoliation f_, RadialFoliation f0_) : f(std::move(f_)), f0(std::move(f0_)) {
  if (!(f.chart == f0.chart)) throw InputError("solution pair: foliations live on different charts");
  if (f.kind != f0.kind) throw InputError("solution pair: foliations of different kinds");
  dg = f.g.g() - f0.g.g();
  dV2 = times(f.V, f.V) - times(f0.V, f0.V);
}

SolutionPair::SolutionPair(RadialFoliation f_, RadialFoliation f0_, TensorField dg_, TensorField dV2_)
    : f(std::move(f_)), f0(std::move(f0_)), dg(std::move(dg_)), dV2(std::move(dV2_)) {
  if (!(f.chart == f0.chart)) throw InputError("solution pair: foliations live on different charts");
  if (f.kind != f0.kind) throw InputError("solution pair: foliations of different kinds");
  if (!dg.same_shape(f.g.g())) throw InputError("solution pair: g - g0 must be a 2-tensor on the slice chart");
  if (!dV2.same_shape(f.V)) throw InputError("solution pair: V^2 - V0^2 must be a scalar on the slice chart");
}

TensorField SolutionPair::ambient_dg() const { return embed(dg, ambient_chart(f0)); }

TensorField SolutionPair::ambient_dPi() const { return embed(0.5 * f0.radial_derivative(dg), ambient_chart(f0)); }

MetricField SolutionPair::reference() const { return assemble_ambient(f0); }

std::string to_string(CarlemanForm f) {
  switch (f) {
    case CarlemanForm::shape: return "shape";
    case CarlemanForm::shape_derivatives: return "shape-derivatives";
    case CarlemanForm::lapse: return "lapse";
    case CarlemanForm::finite_distance: return "finite-distance";
  }
  return "";
}

std::string to_string(PairReference r) {
  switch (r) {
    case PairReference::flat: return "flat";
    case PairReference::hyperbolic: return "hyperbolic";
    case PairReference::finite: return "finite";
  }
  return "";
}

bool CarlemanReport::holds() const {
  if (trivial) return true;
  if (!std::isfinite(C) || !(C > 0.0)) return false;
  return std::all_of(rows.begin(), rows.end(), [](const CarlemanRow& r) { return r.lhs > 0.0 && std::isfinite(r.rhs); });
}

CarlemanReport carleman_check(const SolutionPair& p, CarlemanForm form, const CarlemanConfig& cfg) {
  const RadialVariable var = p.f0.variable();
  if (var == RadialVariable::rho) throw InputError("carleman: integrate in r or x, not rho");
  const bool finite = form == CarlemanForm::finite_distance;
  if (finite != (var == RadialVariable::x)) throw InputError("carleman: the " + to_string(form) + " form needs a radial axis named " + (finite ? "x" : "r"));
  if (cfg.s.empty()) throw InputError("carleman: no weight exponents");
  for (double s : cfg.s)
    if (!(s > 2.0)) throw InputError("carleman: weight exponent must exceed 2, got " + std::to_string(s));
  const int k = form == CarlemanForm::shape_derivatives ? cfg.order : (finite ? 2 : 0);
  if (k < 0 || k > 2) throw InputError("carleman: derivative order must be 0, 1 or 2");

  const int ax = p.f0.radial_axis;
  const DecayEnd end = finite ? DecayEnd::start : DecayEnd::end;

  // densities: lhs, and the rhs split by the power of x it carries
  TensorField lhs;
  std::vector<TensorField> rhs;
  if (form == CarlemanForm::lapse) {
    const TensorField w = power(times(p.f0.V, p.f0.V), -2.0);
    const TensorField d1 = p.f0.radial_derivative(p.dV2);
    lhs = times(w, times(d1, d1));
    rhs.push_back(times(w, times(p.dV2, p.dV2)));
  } else {
    const MetricField ref = p.reference();
    const TensorField gamma = christoffel(ref);
    const TensorField dg = p.ambient_dg();
    const TensorField dP = p.ambient_dPi();
    auto stack = [&](const TensorField& t, int i) {
      if (i == 0) return norm2(ref, t);
      if (i == 1) return norm2(ref, covariant_derivative(ref, t, gamma));
      return norm2(ref, second_covariant_derivative(ref, t, gamma));
    };
    if (finite) {
      lhs = stack(dP, 2);
      for (int i = 0; i <= 2; ++i) rhs.push_back(stack(dg, i));
    } else {
      lhs = stack(dP, 0);
      TensorField r = stack(dg, 0);
      for (int i = 1; i <= k; ++i) {
        lhs += stack(dP, i);
        r += stack(dg, i);
      }
      rhs.push_back(std::move(r));
    }
  }
  // clip round-off negatives of norms
  auto clip = [](TensorField t) {
    for (double& v : t.data()) v = std::max(v, 0.0);
    return t;
  };

  CarlemanReport rep;
  rep.form = form;
  rep.order = k;
  bool all_zero = true;
  double qmin = inf, qmax = 0.0;
  for (double s : cfg.s) {
    auto lw = [&](int extra) {
      return [s, finite, extra](double c) { return finite ? (extra - 2.0 * s) * std::log(c) : 2.0 * s * c; };
    };
    const WeightedIntegral L = weighted_integral(clip(lhs), ax, lw(0), end, cfg.decay_ratio);
    // log of the rhs with its powers of s
    double lr = -inf;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      const int xpow = finite ? 2 * static_cast<int>(i) - 4 : 0;
      const double spow = finite ? 6.0 - 2.0 * i : 2.0;
      const WeightedIntegral R = weighted_integral(clip(rhs[i]), ax, lw(xpow), end, cfg.decay_ratio);
      if (R.log_value == -inf) continue;
      const double term = R.log_value + spow * std::log(s);
      lr = lr == -inf ? term : std::max(lr, term) + std::log1p(std::exp(-std::abs(lr - term)));
    }
    CarlemanRow row;
    row.s = s;
    row.lhs = L.log_value == -inf ? 0.0 : std::exp(L.log_value);
    row.rhs = lr == -inf ? 0.0 : std::exp(lr);
    if (L.log_value == -inf && lr == -inf) {
      row.needed_C = 0.0;
    } else {
      all_zero = false;
      row.needed_C = L.log_value == -inf ? inf : std::exp(lr - L.log_value);
      if (lr != -inf && L.log_value != -inf) {
        const double q = std::exp(L.log_value - lr);
        qmin = std::min(qmin, q);
        qmax = std::max(qmax, q);
      }
    }
    rep.C = std::max(rep.C, row.needed_C);
    rep.rows.push_back(row);
  }
  rep.trivial = all_zero;
  rep.spread = qmax > 0.0 ? qmax / qmin : 1.0;
  return rep;
}

CarlemanFit fit_constant(const std::vector<CarlemanReport>& reports) {
  CarlemanFit fit;
  for (const auto& r : reports) {
    fit.C = std::max(fit.C, r.C);
    fit.spread = std::max(fit.spread, r.spread);
    fit.holds = fit.holds && r.holds();
  }
  fit.holds = fit.holds && std::isfinite(fit.C);
  return fit;
}

SolutionPair manufactured_pair(const PairRecipe& r) {
  using std::numbers::pi;
  const bool finite = r.reference == PairReference::finite;
  const bool hyp = r.reference == PairReference::hyperbolic;
  int nr = r.radial_nodes;
  if (nr == 0) nr = finite ? 1001 : 501;
  if (r.tangential_nodes < 5) throw InputError("manufactured pair: at least 5 tangential nodes");
  const Grid grid({finite ? Axis::radial_interval("x", 0.0, 1.0, nr) : Axis::radial_interval("r", 0.0, 5.0, nr),
                   Axis::periodic("y", 0, 2 * pi, r.tangential_nodes), Axis::periodic("z", 0, 2 * pi, r.tangential_nodes)},
                  r.fd_order);
  const Chart c = slice_chart_of(grid);

  std::mt19937_64 rng(r.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto range = [&](double a, double b) { return a + (b - a) * 0.5 * (u(rng) + 1.0); };
  const double h1 = u(rng), h2 = u(rng), h3 = u(rng), p1 = pi * u(rng), p2 = pi * u(rng), p3 = pi * u(rng);
  const double f1 = u(rng), f2 = u(rng), q1 = pi * u(rng), q2 = pi * u(rng);
  const double w1 = u(rng), w2 = u(rng), e1 = pi * u(rng), e2 = pi * u(rng);
  const double T00 = 0.15 * (u(rng) + 0.5), T11 = 0.15 * (u(rng) - 0.5), T01 = 0.15 * u(rng);
  const double v = range(0.2, 0.4) * (u(rng) < 0.0 ? -1.0 : 1.0);
  const double z0 = 0.1 * u(rng), z1 = 0.1 * u(rng);
  const double a_draw = finite ? range(0.8, 1.2) : range(0.3, 0.8);
  const double aV_draw = finite ? range(0.8, 1.2) : range(0.3, 0.8);
  const double A = r.amplitude;
  const double a = r.decay > 0.0 ? r.decay : a_draw;
  const double aV = r.decay > 0.0 ? r.decay : aV_draw;

  auto profile = [&](double rad, double decay) {
    if (r.infinite_order) return finite ? (rad > 0.0 ? std::exp(-decay / rad) : 0.0) : std::exp(-decay * std::exp(rad));
    return finite ? std::pow(rad, r.exponent) : std::exp(-r.exponent * rad);
  };
  auto ghat = [&](const std::vector<double>& p, double* g) {
    g[0] = 1.0 + 0.2 * h1 * std::cos(p[1] + p1);
    g[3] = 1.0 + 0.2 * h2 * std::cos(p[2] + p2);
    g[1] = g[2] = 0.1 * h3 * std::sin(p[2] + p3);
  };
  auto scale = [&](double rad) { return hyp ? std::exp(2 * rad) : (finite ? (1 + rad / 2) * (1 + rad / 2) : 1.0); };
  auto V0of = [&](double rad) { return hyp ? std::exp(rad) : 1.0; };
  auto phi = [&](const std::vector<double>& p) { return 1.0 + 0.3 * f1 * std::sin(p[1] + q1) + 0.3 * f2 * std::cos(p[2] + q2); };
  auto psi = [&](const std::vector<double>& p) { return 1.0 + 0.3 * w1 * std::cos(p[1] + e1) + 0.3 * w2 * std::sin(p[2] + e2); };

  auto g0 = TensorField::sample(c, 0, 2, Symmetry::symmetric, [&](const std::vector<double>& p, double* g) {
    ghat(p, g);
    for (int i = 0; i < 4; ++i) g[i] *= scale(p[0]);
  });
  auto dg = TensorField::sample(c, 0, 2, Symmetry::symmetric, [&](const std::vector<double>& p, double* g) {
    const double m = A * (hyp ? std::exp(2 * p[0]) : 1.0) * profile(p[0], a) * phi(p);
    g[0] = m * T00;
    g[3] = m * T11;
    g[1] = g[2] = m * T01;
  });
  auto dV2 = TensorField::sample(c, 0, 0, Symmetry::general, [&](const std::vector<double>& p, double* o) {
    const double V0 = V0of(p[0]);
    o[0] = A * V0 * V0 * profile(p[0], aV) * psi(p) * v;
  });
  auto V0 = TensorField::sample(c, 0, 0, Symmetry::general, [&](const std::vector<double>& p, double* o) { o[0] = V0of(p[0]); });
  TensorField V = times(V0, V0) + dV2;
  V = power(V, 0.5);
  auto xi = TensorField::sample(c, 0, 1, Symmetry::general, [&](const std::vector<double>& p, double* o) {
    const double m = A * profile(p[0], a);
    o[0] = m * z0;
    o[1] = m * z1;
  });
  const FoliationKind kind = finite ? FoliationKind::finite_distance : FoliationKind::asymptotically_hyperbolic;
  RadialFoliation f0(V0, TensorField(c, 0, 1), MetricField(g0, Signature::riemannian), kind);
  RadialFoliation f(V, xi, MetricField(g0 + dg, Signature::riemannian), kind);
  return SolutionPair(std::move(f), std::move(f0), std::move(dg), std::move(dV2));
}

double EstiaGroups::max() const { return std::max({pi, lapse, twist_a, twist_b, twist_c}); }

namespace {

// sup of num / den over nodes; nodes where both vanish are skipped
double sup_ratio(const std::vector<double>& num, const std::vector<double>& den, double zero) {
  double m = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (den[i] > 0.0) m = std::max(m, std::abs(num[i]) / den[i]);
    else if (std::abs(num[i]) > zero) m = inf;
  }
  return m;
}

std::string decay_report(const DecayConstants& d, double bound) {
  std::string s;
  auto add = [&](const char* name, double v) {
    if (!(v <= bound)) s += std::string(s.empty() ? "" : ", ") + name + " = " + std::to_string(v);
  };
  add("V e^-r", d.V);
  add("g e^-2r", d.g);
  add("(V' - V) e^r", d.Vp_minus_V);
  add("xi' e^2r", d.xip);
  add("Pi - g", d.Pi_minus_g);
  return s;
}

}  // namespace

EstiaSample estia_sample(const SolutionPair& p, double decay_bound) {
  EstiaSample out;
  if (p.f.kind != FoliationKind::asymptotically_hyperbolic || p.f.variable() == RadialVariable::x)
    throw InputError("estia: samples must be asymptotically hyperbolic foliations in r or rho");
  out.decay = decay_constants(p.f);
  out.decay0 = decay_constants(p.f0);
  const std::string d1 = decay_report(out.decay, decay_bound), d0 = decay_report(out.decay0, decay_bound);
  if (!d1.empty() || !d0.empty()) {
    out.rejected = true;
    out.diagnostic = "decay violation: " + (d1.empty() ? "" : "solution (" + d1 + ")") + (d0.empty() ? "" : " reference (" + d0 + ")");
    return out;
  }

  const ShapeData s = shape_operators(p.f), s0 = shape_operators(p.f0);
  const MetricField& g = p.f.g;
  const MetricField& g0 = p.f0.g;
  const Chart& c = p.f.chart;
  const TensorField dA = sqrt_abs(norm2(s0.Gref, s.A - s0.A)).with_chart(c);
  const TensorField dG = sqrt_abs(norm2(s0.Gref, s.Gref.g() - s0.Gref.g())).with_chart(c);
  const TensorField Pi2 = norm2(g, s.Pi), Pi02 = norm2(g0, s0.Pi);
  const TensorField dPi = sqrt_abs(norm2(g0, s.Pi - s0.Pi));
  const TensorField dg = sqrt_abs(norm2(g0, g.g() - g0.g()));
  const TensorField xi2 = norm2(g, s.xip), xi2_0 = norm2(g0, s.xip), xi02 = norm2(g0, s0.xip);
  const TensorField& V = p.f.V;
  const TensorField& V0 = p.f0.V;
  const TensorField u = times(times(V, V), s.xip), w = times(times(V0, V0), s0.xip);
  const TensorField u2 = norm2(g0, u), w2 = norm2(g0, w), duw = sqrt_abs(norm2(g0, u - w));

  const std::size_t N = V.nodes();
  std::vector<double> lhs(N), den(N), npi(N), dpi(N), nl(N), dl(N), na(N), da(N), nb(N), db(N), nc(N), dc(N);
  double scale = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    const double v = V.data()[n], v0 = V0.data()[n], vp = s.Vp.data()[n], vp0 = s0.Vp.data()[n];
    const double i02 = 1.0 / (v0 * v0);
    lhs[n] = s0.A_norm2.data()[n] - s.A_norm2.data()[n];
    den[n] = dA.data()[n] + dG.data()[n];
    scale = std::max(scale, std::abs(s0.A_norm2.data()[n]));
    npi[n] = Pi2.data()[n] - Pi02.data()[n];
    dpi[n] = dPi.data()[n] + dg.data()[n];
    nl[n] = (vp / v) * (vp / v) - (vp0 / v0) * (vp0 / v0);
    dl[n] = i02 * (std::abs(v * vp - v0 * vp0) + std::abs(v * v - v0 * v0));
    na[n] = i02 * (u2.data()[n] - w2.data()[n]);
    da[n] = duw.data()[n] / v0;
    nb[n] = i02 * v * v * v * v * (xi2.data()[n] - xi2_0.data()[n]);
    db[n] = dg.data()[n];
    nc[n] = i02 * (v0 * v0 - v * v) * v * v * xi2.data()[n];
    dc[n] = i02 * std::abs(v0 * v0 - v * v);
    const double whole = v * v * xi2.data()[n] - v0 * v0 * xi02.data()[n];
    out.split_defect = std::max(out.split_defect, std::abs(na[n] + nb[n] + nc[n] - whole) / (1.0 + std::abs(whole)));
    out.lhs_max = std::max(out.lhs_max, std::abs(lhs[n]));
  }
  const double zero = 1e-13 * (1.0 + scale);
  out.ratio = sup_ratio(lhs, den, zero);
  out.groups.pi = sup_ratio(npi, dpi, zero);
  out.groups.lapse = sup_ratio(nl, dl, zero);
  out.groups.twist_a = sup_ratio(na, da, zero);
  out.groups.twist_b = sup_ratio(nb, db, zero);
  out.groups.twist_c = sup_ratio(nc, dc, zero);
  return out;
}

EstiaReport estia_check(const std::vector<SolutionPair>& samples, double decay_bound) {
  EstiaReport rep;
  for (const auto& p : samples) {
    EstiaSample s = estia_sample(p, decay_bound);
    if (!s.rejected) {
      ++rep.accepted;
      rep.C = std::max(rep.C, s.ratio);
      rep.group_C.pi = std::max(rep.group_C.pi, s.groups.pi);
      rep.group_C.lapse = std::max(rep.group_C.lapse, s.groups.lapse);
      rep.group_C.twist_a = std::max(rep.group_C.twist_a, s.groups.twist_a);
      rep.group_C.twist_b = std::max(rep.group_C.twist_b, s.groups.twist_b);
      rep.group_C.twist_c = std::max(rep.group_C.twist_c, s.groups.twist_c);
    }
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

namespace {

Grid torus_grid(int nr, int nt, double r1) {
  using std::numbers::pi;
  return Grid({Axis::radial_interval("r", 0.0, r1, nr), Axis::periodic("y", 0, 2 * pi, nt), Axis::periodic("z", 0, 2 * pi, nt)}, 6);
}

}  // namespace

SolutionPair random_asymptotic_pair(unsigned long seed, int nr, int nt, double r1, double scale) {
  using std::numbers::pi;
  const Chart c = slice_chart_of(torus_grid(nr, nt, r1));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h1 = u(rng), h2 = u(rng), h3 = u(rng), p1 = pi * u(rng), p2 = pi * u(rng);
  auto ghat = [=](const std::vector<double>& p, double* g) {
    g[0] = 1.0 + 0.2 * h1 * std::cos(p[1] + p1);
    g[3] = 1.0 + 0.2 * h2 * std::sin(p[2] + p2);
    g[1] = g[2] = 0.1 * h3 * std::cos(p[1] - p[2]);
  };
  auto member = [&] {
    const double a = 0.4 * scale * u(rng), f1 = 0.3 * u(rng), f2 = 0.3 * u(rng);
    double B[3], b[3], cc[2][2];
    for (int i = 0; i < 3; ++i) B[i] = 0.2 * scale * u(rng), b[i] = pi * u(rng);
    for (auto& row : cc)
      for (double& x : row) x = scale * u(rng);
    const double q = pi * u(rng);
    auto V = TensorField::sample(c, 0, 0, Symmetry::general, [&](const std::vector<double>& p, double* o) {
      const double ph = 1.0 + f1 * std::sin(p[1] + q) + f2 * std::cos(p[2] - q);
      o[0] = std::exp(p[0]) * (1.0 + a * std::exp(-2 * p[0]) * ph);
    });
    auto g = TensorField::sample(c, 0, 2, Symmetry::symmetric, [&](const std::vector<double>& p, double* o) {
      ghat(p, o);
      for (int i = 0; i < 4; ++i) o[i] *= std::exp(2 * p[0]);
      o[0] += B[0] * std::cos(p[1] + b[0]);
      o[3] += B[1] * std::sin(p[2] + b[1]);
      o[1] += B[2] * std::cos(p[1] + p[2] + b[2]);
      o[2] = o[1];
    });
    // xi' = e^{-2r} c
    auto xi = TensorField::sample(c, 0, 1, Symmetry::general, [&](const std::vector<double>& p, double* o) {
      for (int i = 0; i < 2; ++i) o[i] = -0.5 * std::exp(-2 * p[0]) * (cc[i][0] * std::cos(p[1]) + cc[i][1] * std::sin(p[2]));
    });
    return RadialFoliation(V, xi, MetricField(g, Signature::riemannian), FoliationKind::asymptotically_hyperbolic);
  };
  RadialFoliation f = member();
  RadialFoliation f0 = member();
  return SolutionPair(std::move(f), std::move(f0));
}

SolutionPair ads_lapse_pair(double a, int nr, int nt, double r1) {
  const Chart c = slice_chart_of(torus_grid(nr, nt, r1));
  auto V = TensorField::sample(c, 0, 0, Symmetry::general, [&](const std::vector<double>& p, double* o) { o[0] = std::exp(p[0]) * (1.0 + a * std::exp(-2 * p[0])); });
  auto V0 = TensorField::sample(c, 0, 0, Symmetry::general, [&](const std::vector<double>& p, double* o) { o[0] = std::exp(p[0]); });
  auto g = TensorField::sample(c, 0, 2, Symmetry::symmetric, [&](const std::vector<double>& p, double* o) { o[0] = o[3] = std::exp(2 * p[0]); });
  const MetricField m(g, Signature::riemannian);
  return SolutionPair(RadialFoliation(V, TensorField(c, 0, 1), m, FoliationKind::asymptotically_hyperbolic),
                      RadialFoliation(V0, TensorField(c, 0, 1), m, FoliationKind::asymptotically_hyperbolic));
}

MeanCurvatureIdentity mean_curvature_identity(const SolutionPair& p) {
  const ShapeData s = shape_operators(p.f), s0 = shape_operators(p.f0);
  MeanCurvatureIdentity out;
  out.lhs = p.f.radial_derivative(s.Hm - s0.Hm);
  out.rhs_untwisted = s0.A_norm2 - s.A_norm2;
  const TensorField t = times(times(p.f.V, p.f.V), norm2(p.f.g, s.xip));
  const TensorField t0 = times(times(p.f0.V, p.f0.V), norm2(p.f0.g, s0.xip));
  out.rhs = out.rhs_untwisted - t0 + t;
  out.defect = (out.lhs - out.rhs).max_abs();
  out.untwisted_defect = (out.lhs - out.rhs_untwisted).max_abs();
  return out;
}

}  // namespace stvac
