#include "stvac/stationary.hpp"

#include <algorithm>
#include <cmath>

#include "stvac/calculus.hpp"
#include "stvac/error.hpp"

namespace stvac {

namespace {

TensorField reciprocal(const TensorField& f, int power) {
  TensorField r = f;
  for (double& v : r.data()) v = std::pow(v, -power);
  return r;
}

// delta Gamma^k_ij = g^kl (nabla_i h_jl + nabla_j h_il - nabla_l h_ij) / 2
TensorField christoffel_variation(const MetricField& m, const TensorField& h) {
  const int d = m.dim();
  const TensorField dh = covariant_derivative(m, h);  // [k][i][j]
  TensorField low(m.chart(), 0, 3);
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        auto o = low.comp((l * d + i) * d + j);
        auto a = dh.comp((i * d + j) * d + l);
        auto b = dh.comp((j * d + i) * d + l);
        auto c = dh.comp((l * d + i) * d + j);
        for (std::size_t n = 0; n < o.size(); ++n) o[n] = 0.5 * (a[n] + b[n] - c[n]);
      }
  TensorField out(m.chart(), 1, 2);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      auto gi = m.inverse().comp(k * d + l);
      for (int ij = 0; ij < d * d; ++ij) {
        auto o = out.comp(k * d * d + ij);
        auto s = low.comp(l * d * d + ij);
        for (std::size_t n = 0; n < o.size(); ++n) o[n] += gi[n] * s[n];
      }
    }
  return out;
}

// sum_k G^k_ij (df)_k
TensorField contract_gamma(const TensorField& G, const TensorField& df) {
  const int d = G.dim();
  TensorField out(G.chart(), 0, 2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      auto o = out.comp(i * d + j);
      for (int k = 0; k < d; ++k) {
        auto g = G.comp((k * d + i) * d + j);
        auto f = df.comp(k);
        for (std::size_t n = 0; n < o.size(); ++n) o[n] += g[n] * f[n];
      }
    }
  return out;
}

TensorField raise_both(const MetricField& m, const TensorField& h) {
  const int d = m.dim();
  TensorField out(m.chart(), 2, 0);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      auto o = out.comp(i * d + k);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          auto x = m.inverse().comp(i * d + a);
          auto y = m.inverse().comp(k * d + b);
          auto z = h.comp(a * d + b);
          for (std::size_t n = 0; n < o.size(); ++n) o[n] += x[n] * y[n] * z[n];
        }
    }
  return out;
}

void require_positive(const TensorField& V, const char* where) {
  for (std::size_t n = 0; n < V.nodes(); ++n)
    if (!(V.data()[n] > 0.0)) throw DomainError(std::string(where) + ": V is not positive at node " + std::to_string(n));
}

}  // namespace

double kappa_of(double Lambda, int n) {
  if (n < 2) throw InputError("quotient dimension must be at least 2");
  return -2.0 * Lambda / (n - 1);
}

StationaryMetric::StationaryMetric(TensorField V_, TensorField theta_, MetricField g_, double Lambda_)
    : V(std::move(V_)), theta(std::move(theta_)), g(std::move(g_)), Lambda(Lambda_) {
  if (g.signature() != Signature::riemannian) throw InputError("stationary metric: g+ must be Riemannian");
  if (V.rank() != 0 || !(V.chart() == g.chart())) throw InputError("stationary metric: V must be a scalar on the chart of g+");
  if (theta.up() != 0 || theta.down() != 1 || !(theta.chart() == g.chart()))
    throw InputError("stationary metric: theta must be a one-form on the chart of g+");
  require_positive(V, "stationary metric");
  if (const auto r = chart().grid().radial_axis()) {
    const int c = chart().coordinate_of_axis(*r);
    if (c >= 0 && theta.max_abs(c) > 1e-12 * std::max(1.0, theta.max_abs()))
      throw InputError("stationary metric: theta has a radial component");
  }
}

double ReducedResiduals::max_abs() const { return std::max({tt.max_abs(), ij.max_abs(), ti.max_abs()}); }

MetricField assemble_spacetime(const StationaryMetric& sm) {
  require_positive(sm.V, "assemble_spacetime");
  const int n = sm.dim();
  const int d = n + 1;
  const Chart c = sm.chart().with_fiber("t");
  TensorField G(c, 0, 2, Symmetry::symmetric);
  const auto V = sm.V.comp(0);
  for (std::size_t k = 0; k < V.size(); ++k) {
    const double v2 = V[k] * V[k];
    G.at(k, 0) = -v2;
    for (int i = 0; i < n; ++i) {
      const double ti = sm.theta.at(k, i);
      G.at(k, i + 1) = G.at(k, (i + 1) * d) = -v2 * ti;
      for (int j = 0; j < n; ++j) G.at(k, (i + 1) * d + j + 1) = sm.g.g().at(k, i * n + j) - v2 * ti * sm.theta.at(k, j);
    }
  }
  return MetricField(std::move(G), Signature::lorentzian);
}

TwistField twist(const StationaryMetric& sm) {
  TwistField tw;
  tw.lambda = exterior_derivative(sm.theta);
  TensorField v2 = times(sm.V, sm.V);
  tw.lambda.scale_by(v2);
  tw.lambda *= -1.0;
  if (const auto r = sm.chart().grid().radial_axis()) {
    const int rc = sm.chart().coordinate_of_axis(*r);
    if (rc >= 0) {
      const int n = sm.dim();
      tw.radial = true;
      tw.xi_prime = TensorField(sm.chart(), 0, 1);
      tw.tangential = tw.lambda;
      const TensorField inv2 = reciprocal(sm.V, 2);
      for (int a = 0; a < n; ++a) {
        auto xp = tw.xi_prime.comp(a);
        auto l = tw.lambda.comp(rc * n + a);
        for (std::size_t k = 0; k < xp.size(); ++k) xp[k] = -l[k] * inv2.data()[k];
        std::fill(tw.tangential.comp(rc * n + a).begin(), tw.tangential.comp(rc * n + a).end(), 0.0);
        std::fill(tw.tangential.comp(a * n + rc).begin(), tw.tangential.comp(a * n + rc).end(), 0.0);
      }
    }
  }
  return tw;
}

ReducedResiduals reduced_residuals(const StationaryMetric& sm) {
  require_positive(sm.V, "reduced_residuals");
  const MetricField& m = sm.g;
  const double kappa = sm.kappa();
  const TensorField lam = twist(sm).lambda;
  const TensorField hess = hessian(m, sm.V);
  const TensorField lap = trace(m, hess);
  const TensorField inv1 = reciprocal(sm.V, 1);
  const TensorField inv2 = reciprocal(sm.V, 2);
  ReducedResiduals r;
  r.tt = times(sm.V, kappa * sm.V - lap) - 0.25 * norm2(m, lam);
  r.ij = ricci(m) + kappa * m.g();
  r.ij.axpy(-1.0, times(inv1, hess));
  r.ij.axpy(-0.5, times(inv2, compose(m, lam, lam)));
  r.ij.symmetrize();
  r.ij.set_symmetry(Symmetry::symmetric);
  r.ti = divergence(m, times(sm.V, lam));
  return r;
}

ReducedResiduals spacetime_residuals(const StationaryMetric& sm) {
  const MetricField G = assemble_spacetime(sm);
  const int n = sm.dim();
  const int d = n + 1;
  const TensorField E = ricci(G) + sm.kappa() * G.g();
  ReducedResiduals r;
  r.tt = TensorField::scalar(sm.chart());
  r.ij = TensorField(sm.chart(), 0, 2, Symmetry::symmetric);
  r.ti = TensorField(sm.chart(), 0, 1);
  for (std::size_t k = 0; k < sm.V.nodes(); ++k) {
    const double V = sm.V.data()[k];
    const double ett = E.at(k, 0);
    r.tt.data()[k] = -ett;
    for (int i = 0; i < n; ++i) {
      const double ti = sm.theta.at(k, i);
      const double eti = E.at(k, i + 1) - ti * ett;
      r.ti.at(k, i) = 2.0 * V * eti;
      for (int j = 0; j < n; ++j) {
        const double tj = sm.theta.at(k, j);
        r.ij.at(k, i * n + j) = E.at(k, (i + 1) * d + j + 1) - ti * E.at(k, j + 1) - tj * E.at(k, i + 1) + ti * tj * ett;
      }
    }
  }
  return r;
}

ReducedResiduals linearized_residual_analytic(const StationaryMetric& sm, const Perturbation& p) {
  const MetricField& m = sm.g;
  const double kappa = sm.kappa();
  const TensorField& V = sm.V;
  const TensorField& v = p.dV;
  const TensorField& h = p.dg;
  if (!v.same_shape(V) || !p.dtheta.same_shape(sm.theta) || !h.same_shape(m.g()))
    throw InputError("linearized_residual: perturbation does not match the data");
  const TensorField inv1 = reciprocal(V, 1);
  const TensorField inv2 = reciprocal(V, 2);
  const TensorField inv3 = reciprocal(V, 3);
  const TensorField dtheta = exterior_derivative(sm.theta);
  const TensorField lam = -1.0 * times(times(V, V), dtheta);
  // delta lambda = -2 V v d theta - V^2 d(delta theta)
  TensorField dlam = -2.0 * times(times(V, v), dtheta);
  dlam.axpy(-1.0, times(times(V, V), exterior_derivative(p.dtheta)));
  const TensorField dV = exterior_derivative(V);
  const TensorField hess = hessian(m, V);
  const TensorField lap = trace(m, hess);
  const TensorField dgam = christoffel_variation(m, h);
  const TensorField trh = trace(m, h);
  const TensorField lamlam = compose(m, lam, lam);

  ReducedResiduals r;
  // tt
  TensorField dlap = -1.0 * inner(m, h, hess);
  dlap += inner(m, divergence(m, h) + 0.5 * exterior_derivative(trh), dV);
  r.tt = times(v, kappa * V - lap) + times(V, kappa * v - dlap - laplacian(m, v));
  r.tt.axpy(-0.5, inner(m, h, lamlam));
  r.tt.axpy(-0.5, inner(m, lam, dlam));

  // ij
  TensorField dhess = hessian(m, v) - contract_gamma(dgam, dV);
  TensorField dll = compose(m, dlam, lam) + compose(m, lam, dlam) - compose(m, compose(m, lam, h), lam);
  r.ij = linearized_ricci(m, h) + kappa * h;
  r.ij += times(times(inv2, v), hess);
  r.ij.axpy(-1.0, times(inv1, dhess));
  r.ij += times(times(inv3, v), lamlam);
  r.ij.axpy(-0.5, times(inv2, dll));
  r.ij.symmetrize();
  r.ij.set_symmetry(Symmetry::symmetric);

  // ti
  const int d = m.dim();
  const TensorField W = times(V, lam);
  const TensorField dW = covariant_derivative(m, W);  // [k][i][j]
  const TensorField hup = raise_both(m, h);
  r.ti = divergence(m, times(v, lam) + times(V, dlam));
  for (int j = 0; j < d; ++j) {
    auto o = r.ti.comp(j);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        auto hh = hup.comp(i * d + k);
        auto w = dW.comp((k * d + i) * d + j);
        auto gi = m.inverse().comp(i * d + k);
        for (std::size_t n = 0; n < o.size(); ++n) o[n] += hh[n] * w[n];
        for (int l = 0; l < d; ++l) {
          auto a = dgam.comp((l * d + k) * d + i);
          auto wa = W.comp(l * d + j);
          auto b = dgam.comp((l * d + k) * d + j);
          auto wb = W.comp(i * d + l);
          for (std::size_t n = 0; n < o.size(); ++n) o[n] += gi[n] * (a[n] * wa[n] + b[n] * wb[n]);
        }
      }
  }
  return r;
}

StationaryMetric perturbed(const StationaryMetric& sm, const Perturbation& p, double eps) {
  TensorField g = sm.g.g();
  g.axpy(eps, p.dg);
  TensorField V = sm.V;
  V.axpy(eps, p.dV);
  TensorField th = sm.theta;
  th.axpy(eps, p.dtheta);
  return StationaryMetric(std::move(V), std::move(th), MetricField(std::move(g), Signature::riemannian), sm.Lambda);
}

LinearizationReport linearized_residual(const StationaryMetric& sm, const Perturbation& p, double eps) {
  if (!(eps > 0.0)) throw InputError("linearized_residual: eps must be positive");
  const ReducedResiduals base = reduced_residuals(sm);
  const ReducedResiduals plus = reduced_residuals(perturbed(sm, p, eps));
  LinearizationReport rep;
  rep.finite_difference.tt = (1.0 / eps) * (plus.tt - base.tt);
  rep.finite_difference.ij = (1.0 / eps) * (plus.ij - base.ij);
  rep.finite_difference.ti = (1.0 / eps) * (plus.ti - base.ti);
  rep.analytic = linearized_residual_analytic(sm, p);
  rep.mismatch = std::max({(rep.finite_difference.tt - rep.analytic.tt).max_abs(), (rep.finite_difference.ij - rep.analytic.ij).max_abs(),
                           (rep.finite_difference.ti - rep.analytic.ti).max_abs()});
  return rep;
}

Bundle to_bundle(const StationaryMetric& sm) {
  Bundle b;
  b.kind = "stationary";
  b.meta = {{"Lambda", hex(sm.Lambda)}, {"n", std::to_string(sm.dim())}};
  b.blocks.push_back(Block{"V", sm.chart(), {}, {{"V", sm.V}}});
  b.blocks.push_back(Block{"theta", sm.chart(), {}, {{"theta", sm.theta}}});
  b.blocks.push_back(Block{"g", sm.chart(), {}, {{"g", sm.g.g()}}});
  return b;
}

StationaryMetric stationary_from_bundle(const Bundle& b) {
  if (b.kind != "stationary") throw InputError("expected a stationary bundle, got " + b.kind);
  const TensorField& V = b.block("V").field("V");
  const Chart& c = V.chart();
  TensorField th = b.block("theta").field("theta").with_chart(c);
  TensorField g = b.block("g").field("g").with_chart(c);
  StationaryMetric sm(V, std::move(th), MetricField(std::move(g), Signature::riemannian), b.meta_number("Lambda"));
  if (b.has_meta("n") && std::stoi(b.meta_value("n")) != sm.dim()) throw InputError("stationary bundle: n does not match the chart");
  return sm;
}

}  // namespace stvac
