#include "stvac/kid.hpp"

#include <algorithm>
#include <cmath>

#include "stvac/calculus.hpp"
#include "stvac/derivative.hpp"
#include "stvac/error.hpp"

namespace stvac {

namespace {

// |t|_g^2 for a covariant tensor, taken in absolute value (Lorentzian g)
double sup_norm(const MetricField& g, const TensorField& t) {
  const TensorField n2 = norm2(g, t);
  double m = 0.0;
  for (double v : n2.data()) m = std::max(m, std::sqrt(std::abs(v)));
  return m;
}

}  // namespace

BoundaryKID::BoundaryKID(TensorField a, TensorField n, MetricField g_, TensorField P, double l)
    : alpha(std::move(a)), nu(std::move(n)), g(std::move(g_)), Pi(std::move(P)), lambda(l) {
  const Chart& c = g.chart();
  if (alpha.rank() != 0 || !(alpha.chart() == c)) throw InputError("KID: alpha must be a scalar on the boundary chart");
  if (nu.up() != 0 || nu.down() != 1 || !(nu.chart() == c)) throw InputError("KID: nu must be a one-form on the boundary chart");
  if (Pi.up() != 0 || Pi.down() != 2 || !(Pi.chart() == c)) throw InputError("KID: Pi must be a covariant 2-tensor on the boundary chart");
}

BoundaryKID boundary_kid(const RadialFoliation& f, const TensorField& alpha, const TensorField& nu, double lambda) {
  const ShapeData s = shape_operators(f);
  return BoundaryKID(alpha, nu, MetricField(slice_at(f, f.g.g(), 0), f.g.signature()), slice_at(f, s.Pi, 0), lambda);
}

double KIDResidual::max_abs() const { return std::max(k0.max_abs(), k1.max_abs()); }

KIDResidual kid_residual(const BoundaryKID& k) {
  const MetricField& g = k.g;
  // Lie derivatives along nu# in covariant form: on polar charts nu# itself
  // need not be smooth while nu and nabla nu are
  KIDResidual r;
  r.k0 = 2.0 * symmetrized_gradient(g, k.nu) + 2.0 * times(k.alpha, k.Pi);
  TensorField bracket = ricci(g) - k.lambda * g.g() - times(trace(g, k.Pi), k.Pi) + 2.0 * compose(g, k.Pi, k.Pi);
  r.k1 = 2.0 * lie_derivative_dual(g, k.nu, k.Pi) - 2.0 * hessian(g, k.alpha) + 2.0 * times(k.alpha, bracket);
  r.k0.symmetrize();
  r.k1.symmetrize();
  return r;
}

CandidateKillingField candidate_from(const RadialFoliation& f, TensorField alpha, TensorField nu) {
  CandidateKillingField w;
  w.nu_sharp = sharp(f.g, nu);
  w.alpha = std::move(alpha);
  w.nu = std::move(nu);
  return w;
}

CandidateKillingField extend_kid(const RadialFoliation& f, const BoundaryKID& k) {
  if (!(k.chart() == boundary_chart(f))) throw InputError("extend_kid: KID is not on the boundary chart of the foliation");
  const Grid& grid = f.chart.grid();
  const Axis& ax = grid.axis(f.radial_axis);
  const int count = ax.count;
  const int d = f.slice_dim();
  const std::size_t stride = grid.stride(f.radial_axis);
  const bool rho = f.variable() == RadialVariable::rho;
  const int points = grid.fd_order() + 2;

  CandidateKillingField w;
  w.alpha = extend_constant(f, k.alpha);
  const TensorField da = extend_constant(f, exterior_derivative(k.alpha));
  const TensorField& ginv = f.g.inverse();
  w.nu_sharp = TensorField(f.chart, 1, 0);
  const TensorField nu0 = sharp(k.g, k.nu);

  std::vector<double> line(count);
  std::vector<double> F0(d), Fm(d), F1(d);
  const std::size_t outer = grid.size() / (stride * count);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t q = 0; q < stride; ++q) {
      auto node = [&](int i) { return (o * count + i) * stride + q; };
      const std::size_t b = o * stride + q;
      // (nu#)' = J (-g^AB d_B alpha) in the grid variable, J = dr/ds
      auto rhs = [&](double t, std::vector<double>& F) {
        const double s = ax.origin + t * ax.spacing;
        const double J = rho ? -1.0 / s : 1.0;
        for (int a = 0; a < d; ++a) {
          double v = 0.0;
          for (int c = 0; c < d; ++c) {
            for (int i = 0; i < count; ++i) line[i] = ginv.at(node(i), a * d + c);
            const double gi = (t == std::floor(t)) ? line[static_cast<int>(t)] : interpolate_line(line, t, points);
            v -= gi * da.at(node(0), c);
          }
          F[a] = J * v;
        }
      };
      for (int a = 0; a < d; ++a) w.nu_sharp.at(node(0), a) = nu0.at(b, a);
      rhs(0.0, F0);
      for (int i = 0; i + 1 < count; ++i) {
        rhs(i + 0.5, Fm);
        rhs(i + 1.0, F1);
        for (int a = 0; a < d; ++a)
          w.nu_sharp.at(node(i + 1), a) = w.nu_sharp.at(node(i), a) + ax.spacing / 6.0 * (F0[a] + 4.0 * Fm[a] + F1[a]);
        F0 = F1;
      }
    }
  for (double v : w.nu_sharp.data())
    if (!std::isfinite(v)) throw IntegrationError("extend_kid: radial integration produced a non-finite value");
  w.nu = flat(f.g, w.nu_sharp);
  return w;
}

Deformation deformation(const RadialFoliation& f, const CandidateKillingField& w) {
  if (!(w.alpha.chart() == f.chart) || !(w.nu_sharp.chart() == f.chart)) throw InputError("deformation: chart mismatch");
  const ShapeData s = shape_operators(f);
  Deformation h;
  h.xx = 2.0 * f.radial_derivative(w.alpha);
  h.xA = flat(f.g, f.radial_derivative(w.nu_sharp)) + exterior_derivative(w.alpha);
  h.AB = 2.0 * symmetrized_gradient(f.g, w.nu) + 2.0 * times(w.alpha, s.Pi);
  h.AB.symmetrize();
  h.AB.set_symmetry(Symmetry::symmetric);
  return h;
}

TensorField assemble_deformation(const RadialFoliation& f, const Deformation& h) {
  const Chart c = ambient_chart(f);
  const int n = f.slice_dim(), d = n + 1;
  // components along the grid variable s: h_ss = J^2 h_rr, h_sA = J h_rA
  std::vector<double> J(f.V.nodes(), 1.0);
  if (f.variable() == RadialVariable::rho)
    for (std::size_t k = 0; k < J.size(); ++k) J[k] = -1.0 / f.chart.grid().coord(k, f.radial_axis);
  TensorField out(c, 0, 2, Symmetry::symmetric);
  for (std::size_t k = 0; k < J.size(); ++k) {
    out.at(k, 0) = J[k] * J[k] * h.xx.data()[k];
    for (int a = 0; a < n; ++a) {
      out.at(k, a + 1) = out.at(k, (a + 1) * d) = J[k] * h.xA.at(k, a);
      for (int b = 0; b < n; ++b) out.at(k, (a + 1) * d + b + 1) = h.AB.at(k, a * n + b);
    }
  }
  return out;
}

TensorField deformation_ambient(const RadialFoliation& f, const CandidateKillingField& w) {
  const MetricField m = assemble_ambient(f);
  const int n = f.slice_dim();
  TensorField X(m.chart(), 1, 0);
  for (std::size_t k = 0; k < X.nodes(); ++k) {
    // X^s = alpha ds/dr
    const double J = f.variable() == RadialVariable::rho ? -f.chart.grid().coord(k, f.radial_axis) : 1.0;
    X.at(k, 0) = J * w.alpha.data()[k];
    for (int a = 0; a < n; ++a) X.at(k, a + 1) = w.nu_sharp.at(k, a);
  }
  TensorField h = lie_derivative_dual(m, flat(m, X), m.g());
  h.symmetrize();
  h.set_symmetry(Symmetry::symmetric);
  return h;
}

KillingReport killing_verify(const RadialFoliation& f, const CandidateKillingField& w, double lambda) {
  const Deformation h = deformation(f, w);
  const Grid& grid = f.chart.grid();
  const Axis& ax = grid.axis(f.radial_axis);
  const TensorField xA2 = norm2(f.g, h.xA);
  const TensorField AB2 = norm2(f.g, h.AB);
  KillingReport rep;
  rep.radius.resize(ax.count);
  rep.slice_norm.assign(ax.count, 0.0);
  for (std::size_t k = 0; k < f.V.nodes(); ++k) {
    const int i = grid.index(k, f.radial_axis);
    const double xx = h.xx.data()[k];
    const double v = std::sqrt(std::abs(xx * xx + 2.0 * xA2.data()[k] + AB2.data()[k]));
    rep.slice_norm[i] = std::max(rep.slice_norm[i], v);
  }
  for (int i = 0; i < ax.count; ++i) rep.radius[i] = ax.coord(i);

  const MetricField g0(slice_at(f, f.g.g(), 0), f.g.signature());
  rep.h0 = sup_norm(g0, slice_at(f, h.AB, 0));
  rep.h0_prime = sup_norm(g0, slice_at(f, f.radial_derivative(h.AB), 0));

  const MetricField m = assemble_ambient(f);
  const TensorField hf = assemble_deformation(f, h);
  TensorField lin = linearized_ricci(m, hf);
  lin.axpy(-lambda, hf);
  rep.linearized = lin.max_abs();

  if (f.variable() == RadialVariable::rho) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int i = 0; i < ax.count; ++i) {
      if (!(rep.slice_norm[i] > 0.0)) continue;
      const double lx = std::log(rep.radius[i]), ly = std::log(rep.slice_norm[i]);
      sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
      ++cnt;
    }
    if (cnt >= 2) {
      rep.rho_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
      rep.has_rho_slope = true;
    }
  }
  return rep;
}

double CCResidual::max_abs() const { return std::max(metric.max_abs(), undetermined.max_abs()); }

CCResidual cc_kid_check(const TensorField& G0, const TensorField& Gn, const TensorField& X) {
  if (!(G0.chart() == Gn.chart()) || !(X.chart() == G0.chart())) throw InputError("cc_kid_check: chart mismatch");
  return {lie_derivative(X, G0), lie_derivative(X, Gn)};
}

Bundle to_bundle(const BoundaryKID& k) {
  Bundle b;
  b.kind = "kid";
  b.meta = {{"lambda", hex(k.lambda)}, {"signature", k.g.signature() == Signature::riemannian ? "riemannian" : "lorentzian"}};
  b.blocks.push_back(Block{"boundary", k.chart(), {}, {{"alpha", k.alpha}, {"nu", k.nu}, {"g", k.g.g()}, {"Pi", k.Pi}}});
  return b;
}

BoundaryKID kid_from_bundle(const Bundle& b) {
  if (b.kind != "kid") throw InputError("expected a kid bundle, got " + b.kind);
  const Block& blk = b.block("boundary");
  const std::string sig = b.has_meta("signature") ? b.meta_value("signature") : "riemannian";
  if (sig != "riemannian" && sig != "lorentzian") throw InputError("kid file: unknown signature " + sig);
  const TensorField& g = blk.field("g");
  if (g.up() != 0 || g.down() != 2) throw InputError("kid file: g must be a covariant 2-tensor");
  return BoundaryKID(blk.field("alpha"), blk.field("nu"), MetricField(g, sig == "riemannian" ? Signature::riemannian : Signature::lorentzian),
                     blk.field("Pi"), b.meta_number("lambda"));
}

}  // namespace stvac
