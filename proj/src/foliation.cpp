#include "stvac/foliation.hpp"

#include <algorithm>
#include <cmath>

#include "stvac/calculus.hpp"
#include "stvac/derivative.hpp"
#include "stvac/error.hpp"

namespace stvac {

namespace {

TensorField radial_factor(const RadialFoliation& f) {
  // d/dr = -rho d/drho
  TensorField s = TensorField::scalar(f.chart);
  for (std::size_t n = 0; n < s.nodes(); ++n) s.data()[n] = -f.chart.grid().coord(n, f.radial_axis);
  return s;
}

}  // namespace

Chart ambient_chart(const RadialFoliation& f) {
  std::vector<Coordinate> c{{f.chart.grid().axis(f.radial_axis).name, f.radial_axis}};
  for (int i = 0; i < f.chart.dim(); ++i) c.push_back(f.chart.coordinate(i));
  return Chart(f.chart.grid(), std::move(c));
}

namespace {

TensorField sym(TensorField t) {
  t.symmetrize();
  t.set_symmetry(Symmetry::symmetric);
  return t;
}

}  // namespace

std::string to_string(FoliationKind k) { return k == FoliationKind::finite_distance ? "finite-distance" : "asymptotically-hyperbolic"; }

Chart slice_chart_of(const Grid& grid) {
  const auto r = grid.radial_axis();
  if (!r) throw InputError("grid has no radial axis");
  std::vector<Coordinate> c;
  for (int a = 0; a < grid.rank(); ++a)
    if (a != *r) c.push_back({grid.axis(a).name, a});
  return Chart(grid, std::move(c));
}

Chart boundary_chart(const RadialFoliation& f) {
  const Grid bg = f.chart.grid().without_axis(f.radial_axis);
  std::vector<Coordinate> c;
  for (const Coordinate& k : f.chart.coordinates()) c.push_back({k.name, k.axis < f.radial_axis ? k.axis : (k.axis < 0 ? -1 : k.axis - 1)});
  return Chart(bg, std::move(c));
}

namespace {

// visit (foliation node, boundary node) pairs of radial slice i
template <class F>
void for_slice(const RadialFoliation& f, int i, F&& fn) {
  const Grid& grid = f.chart.grid();
  const std::size_t stride = grid.stride(f.radial_axis);
  const int count = grid.axis(f.radial_axis).count;
  const std::size_t outer = grid.size() / (stride * count);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t k = 0; k < stride; ++k) fn((o * count + i) * stride + k, o * stride + k);
}

}  // namespace

TensorField slice_at(const RadialFoliation& f, const TensorField& t, int i) {
  if (!(t.chart() == f.chart)) throw InputError("slice_at: field is not on the foliation chart");
  TensorField s(boundary_chart(f), t.up(), t.down(), t.symmetry());
  for (std::size_t c = 0; c < t.components(); ++c) for_slice(f, i, [&](std::size_t n, std::size_t b) { s.at(b, c) = t.at(n, c); });
  return s;
}

TensorField extend_constant(const RadialFoliation& f, const TensorField& b) {
  if (!(b.chart() == boundary_chart(f))) throw InputError("extend_constant: field is not on the boundary chart");
  TensorField t(f.chart, b.up(), b.down(), b.symmetry());
  const int count = f.chart.grid().axis(f.radial_axis).count;
  for (int i = 0; i < count; ++i)
    for (std::size_t c = 0; c < b.components(); ++c) for_slice(f, i, [&](std::size_t n, std::size_t k) { t.at(n, c) = b.at(k, c); });
  return t;
}

RadialFoliation::RadialFoliation(TensorField V_, TensorField xi_, MetricField g_, FoliationKind kind_)
    : chart(g_.chart()), kind(kind_), V(std::move(V_)), xi(std::move(xi_)), g(std::move(g_)) {
  const auto r = chart.grid().radial_axis();
  if (!r) throw InputError("foliation: grid has no radial axis");
  radial_axis = *r;
  if (chart.coordinate_of_axis(radial_axis) >= 0) throw InputError("foliation: slice chart must not carry the radial coordinate");
  if (chart.grid().axis(radial_axis).count < chart.grid().fd_order() + 2)
    throw InputError("foliation: fewer radial nodes than the stencil width");
  if (V.rank() != 0 || !(V.chart() == chart)) throw InputError("foliation: V must be a scalar on the slice chart");
  if (xi.up() != 0 || xi.down() != 1 || !(xi.chart() == chart)) throw InputError("foliation: xi must be a one-form on the slice chart");
  for (std::size_t n = 0; n < V.nodes(); ++n)
    if (!(V.data()[n] > 0.0)) throw DomainError("foliation: V is not positive at node " + std::to_string(n));
}

RadialVariable RadialFoliation::variable() const {
  const std::string& name = chart.grid().axis(radial_axis).name;
  if (name == "rho") return RadialVariable::rho;
  if (name == "x") return RadialVariable::x;
  return RadialVariable::r;
}

double RadialFoliation::radius(std::size_t node) const {
  const double c = chart.grid().coord(node, radial_axis);
  return variable() == RadialVariable::rho ? -std::log(c) : c;
}

TensorField RadialFoliation::radial_derivative(const TensorField& t) const {
  TensorField d = axis_derivative(t, radial_axis);
  if (variable() == RadialVariable::rho) d.scale_by(radial_factor(*this));
  return d;
}

TensorField RadialFoliation::radial_second_derivative(const TensorField& t) const {
  TensorField out = TensorField::like(t);
  for (std::size_t c = 0; c < t.components(); ++c) differentiate2(t.grid(), radial_axis, t.comp(c), out.comp(c));
  if (variable() == RadialVariable::rho) {
    // (rho d/drho)^2 = rho^2 d^2/drho^2 + rho d/drho
    const TensorField s = radial_factor(*this);
    out.scale_by(times(s, s));
    out.axpy(-1.0, radial_derivative(t));
  }
  return out;
}

ShapeData shape_operators(const RadialFoliation& f) {
  ShapeData s;
  s.Pi = sym(0.5 * f.radial_derivative(f.g.g()));
  s.H = trace(f.g, s.Pi);
  s.Vp = f.radial_derivative(f.V);
  s.xip = f.radial_derivative(f.xi);
  s.Hm = times(power(f.V, -1.0), s.Vp) + s.H;
  const int d = f.slice_dim() + 1;
  const Chart tc = f.chart.with_fiber("t");
  s.A = TensorField(tc, 0, 2, Symmetry::symmetric);
  TensorField G(tc, 0, 2, Symmetry::symmetric);
  for (std::size_t n = 0; n < f.V.nodes(); ++n) {
    const double V = f.V.data()[n];
    s.A.at(n, 0) = V * s.Vp.data()[n];
    G.at(n, 0) = V * V;
    for (int a = 1; a < d; ++a) {
      s.A.at(n, a) = s.A.at(n, a * d) = 0.5 * V * V * s.xip.at(n, a - 1);
      for (int b = 1; b < d; ++b) {
        s.A.at(n, a * d + b) = s.Pi.at(n, (a - 1) * (d - 1) + b - 1);
        G.at(n, a * d + b) = f.g.g().at(n, (a - 1) * (d - 1) + b - 1);
      }
    }
  }
  s.Gref = MetricField(std::move(G), f.g.signature());
  s.A_norm2 = norm2(s.Gref, s.A).with_chart(f.chart);
  s.A_trace = trace(s.Gref, s.A).with_chart(f.chart);
  return s;
}

TensorField aggregate_norm_decomposed(const RadialFoliation& f, const ShapeData& s) {
  const TensorField lv = times(power(f.V, -1.0), s.Vp);
  TensorField out = norm2(f.g, s.Pi) + times(lv, lv);
  out.axpy(0.5, times(times(f.V, f.V), norm2(f.g, s.xip)));
  return out;
}

double GaussResiduals::max_abs() const {
  return std::max({AB.max_abs(), Ar.max_abs(), rr.max_abs(), rr3.max_abs(), divr.max_abs(), divA.max_abs()});
}

GaussResiduals gauss_residuals(const RadialFoliation& f, double Lambda) {
  const MetricField& m = f.g;
  const ShapeData s = shape_operators(f);
  const double kappa = kappa_of(Lambda, f.slice_dim() + 1);
  const TensorField& V = f.V;
  const TensorField iV = power(V, -1.0);
  const TensorField iV2 = power(V, -2.0);
  const TensorField V2 = times(V, V);
  const TensorField V3 = times(V2, V);
  const TensorField lam = -1.0 * times(V2, exterior_derivative(f.xi));
  const TensorField dV = exterior_derivative(V);
  const TensorField dVp = exterior_derivative(s.Vp);
  const TensorField dH = exterior_derivative(s.H);
  const TensorField Vpp = f.radial_second_derivative(V);
  const TensorField Pip = sym(0.5 * f.radial_second_derivative(m.g()));
  const TensorField Hp = f.radial_derivative(s.H);
  const TensorField xisharp = sharp(m, s.xip);
  const TensorField xi2 = norm2(m, s.xip);
  const TensorField Pi2 = norm2(m, s.Pi);
  const TensorField lv = times(iV, s.Vp);
  const TensorField lv2 = times(lv, lv);
  const TensorField PidV = contract_vector(s.Pi, sharp(m, dV), 0);
  const TensorField lamxi = contract_vector(lam, xisharp, 1);
  const TensorField divPi = divergence(m, s.Pi);

  GaussResiduals r;
  r.AB = ricci(m) - times(s.H, s.Pi) - Pip + 2.0 * compose(m, s.Pi, s.Pi) + kappa * m.g();
  r.AB.axpy(-1.0, times(iV, hessian(m, V)));
  r.AB.axpy(-1.0, times(lv, s.Pi));
  r.AB.axpy(0.5, times(V2, outer(s.xip, s.xip)));
  r.AB.axpy(-0.5, times(iV2, compose(m, lam, lam)));
  r.AB = sym(std::move(r.AB));

  r.Ar = -1.0 * divPi - dH;
  r.Ar.axpy(-1.0, times(iV, dVp));
  r.Ar += times(iV, PidV);
  r.Ar.axpy(-0.5, lamxi);

  // dH_- = dH + dV'/V - V' dV / V^2
  TensorField dHm = dH + times(iV, dVp);
  dHm.axpy(-1.0, times(times(iV2, s.Vp), dV));
  TensorField in2 = divPi + dHm + times(times(iV2, s.Vp), dV);
  in2.axpy(-1.0, times(iV, PidV));
  in2.axpy(0.5, lamxi);
  r.Ar2 = -1.0 * in2;

  r.rr = kappa * TensorField::scalar(f.chart, 1.0) - Hp - Pi2 - times(iV, Vpp);
  r.rr.axpy(0.5, times(V2, xi2));

  const TensorField Hmp_chain = Hp + times(iV, Vpp) - lv2;
  TensorField in_rr2 = Hmp_chain + Pi2 + lv2;
  for (double& v : in_rr2.data()) v -= kappa;
  in_rr2.axpy(-0.5, times(V2, xi2));
  r.rr2 = -1.0 * in_rr2;

  const TensorField Hmp = f.radial_derivative(s.Hm);
  TensorField in_rr3 = Hmp + s.A_norm2;
  for (double& v : in_rr3.data()) v -= kappa;
  r.rr3_printed = -1.0 * in_rr3;
  in_rr3.axpy(-1.0, times(V2, xi2));
  r.rr3 = -1.0 * in_rr3;

  const TensorField Wxi = times(V3, s.xip);
  r.divr = codifferential(m, Wxi);
  r.divA = f.radial_derivative(Wxi) + divergence(m, times(V, lam)) + times(s.H, Wxi);
  r.divA.axpy(-2.0, times(V3, contract_vector(s.Pi, xisharp, 0)));
  return r;
}

GaussRicci riemannian_gauss_ricci(const RadialFoliation& f) {
  const MetricField& m = f.g;
  const ShapeData s = shape_operators(f);
  GaussRicci b;
  b.AB = sym(ricci(m) - times(s.H, s.Pi) - sym(0.5 * f.radial_second_derivative(m.g())) + 2.0 * compose(m, s.Pi, s.Pi));
  b.xA = -1.0 * divergence(m, s.Pi) - exterior_derivative(s.H);
  b.xx = -1.0 * f.radial_derivative(s.H) - norm2(m, s.Pi);
  return b;
}

MetricField assemble_ambient(const RadialFoliation& f) {
  const Chart c = ambient_chart(f);
  const int n = f.slice_dim();
  const int d = n + 1;
  TensorField g(c, 0, 2, Symmetry::symmetric);
  std::fill(g.comp(0).begin(), g.comp(0).end(), 1.0);
  if (f.variable() == RadialVariable::rho) {
    // dr^2 = drho^2 / rho^2
    const TensorField j = radial_factor(f);
    for (std::size_t n = 0; n < g.nodes(); ++n) g.at(n, 0) = 1.0 / (j.data()[n] * j.data()[n]);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto src = f.g.g().comp(a * n + b);
      std::copy(src.begin(), src.end(), g.comp((a + 1) * d + b + 1).begin());
    }
  return MetricField(std::move(g), f.g.signature());
}

StationaryMetric to_stationary(const RadialFoliation& f, double Lambda) {
  const MetricField g = assemble_ambient(f);
  const Chart& c = g.chart();
  TensorField th(c, 0, 1);
  for (int a = 0; a < f.slice_dim(); ++a) {
    auto src = f.xi.comp(a);
    std::copy(src.begin(), src.end(), th.comp(a + 1).begin());
  }
  return StationaryMetric(f.V.with_chart(c), std::move(th), g, Lambda);
}

GaussDiagnostic is_gauss(const MetricField& m, int rc) {
  const int d = m.dim();
  if (rc < 0 || rc >= d) throw InputError("is_gauss: radial coordinate out of range");
  GaussDiagnostic out;
  for (std::size_t n = 0; n < m.nodes(); ++n) {
    out.rr_defect = std::max(out.rr_defect, std::abs(m.g().at(n, rc * d + rc) - 1.0));
    for (int a = 0; a < d; ++a)
      if (a != rc) out.rA_defect = std::max(out.rA_defect, std::abs(m.g().at(n, rc * d + a)));
  }
  return out;
}

double DecayConstants::worst() const { return std::max({V, g, Vp_minus_V, xip, Pi_minus_g}); }

DecayConstants decay_constants(const RadialFoliation& f) {
  const ShapeData s = shape_operators(f);
  DecayConstants c;
  const int n = f.slice_dim();
  for (std::size_t k = 0; k < f.V.nodes(); ++k) {
    const double r = f.radius(k);
    const double V = f.V.data()[k];
    c.V = std::max(c.V, std::abs(V) * std::exp(-r));
    c.Vp_minus_V = std::max(c.Vp_minus_V, std::abs(s.Vp.data()[k] - V) * std::exp(r));
    for (int a = 0; a < n; ++a) {
      c.xip = std::max(c.xip, std::abs(s.xip.at(k, a)) * std::exp(2 * r));
      for (int b = 0; b < n; ++b) {
        const double gab = f.g.g().at(k, a * n + b);
        c.g = std::max(c.g, std::abs(gab) * std::exp(-2 * r));
        c.Pi_minus_g = std::max(c.Pi_minus_g, std::abs(s.Pi.at(k, a * n + b) - gab));
      }
    }
  }
  return c;
}

Bundle to_bundle(const RadialFoliation& f, double Lambda) {
  const Grid& grid = f.chart.grid();
  if (!(f.chart == slice_chart_of(grid))) throw InputError("foliation file: slice coordinates must follow the grid axes");
  const Axis& ax = grid.axis(f.radial_axis);
  const Grid bg = grid.without_axis(f.radial_axis);
  const Chart bc = Chart::of(bg);
  Bundle b;
  b.kind = "foliation";
  b.meta = {{"flag", to_string(f.kind)},
            {"Lambda", hex(Lambda)},
            {"n", std::to_string(f.slice_dim() + 1)},
            {"signature", f.g.signature() == Signature::riemannian ? "riemannian" : "lorentzian"},
            {"radial_name", ax.name},
            {"radial_axis", std::to_string(f.radial_axis)},
            {"radial_count", std::to_string(ax.count)},
            {"radial_origin", hex(ax.origin)},
            {"radial_spacing", hex(ax.spacing)}};
  for (int i = 0; i < ax.count; ++i) {
    auto slice = [&](const TensorField& t) { return slice_at(f, t, i).with_chart(bc); };
    Block blk{"slice", bc, {{"radius", hex(ax.coord(i))}}, {{"V", slice(f.V)}, {"xi", slice(f.xi)}, {"g", slice(f.g.g())}}};
    b.blocks.push_back(std::move(blk));
  }
  return b;
}

RadialFoliation foliation_from_bundle(const Bundle& b, double* Lambda) {
  if (b.kind != "foliation") throw InputError("expected a foliation bundle, got " + b.kind);
  const int count = std::stoi(b.meta_value("radial_count"));
  const int pos = std::stoi(b.meta_value("radial_axis"));
  if (static_cast<int>(b.blocks.size()) != count) throw InputError("foliation file: slice count does not match the manifest");
  const Grid& bg = b.blocks.front().chart.grid();
  if (pos < 0 || pos > bg.rank()) throw InputError("foliation file: radial axis position out of range");
  const double origin = b.meta_number("radial_origin");
  const double spacing = b.meta_number("radial_spacing");
  Axis rad{b.meta_value("radial_name"), Topology::interval, count, origin, spacing, true};
  std::vector<Axis> axes;
  for (int a = 0; a < bg.rank(); ++a) axes.push_back(bg.axis(a));
  axes.insert(axes.begin() + pos, rad);
  const Grid grid(axes, bg.fd_order());
  const Chart c = slice_chart_of(grid);
  TensorField V = TensorField::scalar(c), xi(c, 0, 1), g(c, 0, 2, Symmetry::symmetric);
  const std::size_t stride = grid.stride(pos);
  const std::size_t outer = grid.size() / (stride * count);
  for (int i = 0; i < count; ++i) {
    const Block& blk = b.blocks[i];
    if (!(blk.chart.grid() == bg)) throw InputError("foliation file: slice " + std::to_string(i) + " has a different boundary grid");
    const double rad_i = parse_number(blk.meta_value("radius"));
    if (std::abs(rad_i - rad.coord(i)) > 1e-12 * (1.0 + std::abs(rad_i))) throw InputError("foliation file: slices out of radial order");
    for (auto [dst, name] : {std::pair<TensorField*, const char*>{&V, "V"}, {&xi, "xi"}, {&g, "g"}}) {
      const TensorField& src = blk.field(name);
      if (src.up() != dst->up() || src.down() != dst->down()) throw InputError(std::string("foliation file: field ") + name + " has the wrong rank");
      for (std::size_t comp = 0; comp < dst->components(); ++comp)
        for (std::size_t o = 0; o < outer; ++o)
          for (std::size_t k = 0; k < stride; ++k) dst->at((o * count + i) * stride + k, comp) = src.at(o * stride + k, comp);
    }
  }
  const std::string flag = b.meta_value("flag");
  FoliationKind kind;
  if (flag == "finite-distance")
    kind = FoliationKind::finite_distance;
  else if (flag == "asymptotically-hyperbolic")
    kind = FoliationKind::asymptotically_hyperbolic;
  else
    throw InputError("foliation file: unknown flag " + flag);
  const Signature sig = b.has_meta("signature") && b.meta_value("signature") == "lorentzian" ? Signature::lorentzian : Signature::riemannian;
  if (Lambda) *Lambda = b.meta_number("Lambda");
  return RadialFoliation(std::move(V), std::move(xi), MetricField(std::move(g), sig), kind);
}

}  // namespace stvac
