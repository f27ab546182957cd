#include "stvac/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "stvac/derivative.hpp"
#include "stvac/error.hpp"

namespace stvac {

namespace {

using Span = std::span<double>;
using CSpan = std::span<const double>;

inline void add_product(Span out, CSpan a, CSpan b, double s) {
  for (std::size_t n = 0; n < out.size(); ++n) out[n] += s * a[n] * b[n];
}

inline void add_scaled(Span out, CSpan a, double s) {
  for (std::size_t n = 0; n < out.size(); ++n) out[n] += s * a[n];
}

void require_metric_chart(const MetricField& m, const TensorField& t, const char* where) {
  if (!(m.chart() == t.chart())) throw InputError(std::string(where) + ": field and metric live on different charts");
}

void require_covariant(const TensorField& t, int down, const char* where) {
  if (t.up() != 0 || t.down() != down)
    throw InputError(std::string(where) + ": expected a covariant tensor of rank " + std::to_string(down));
}

std::size_t pow_dim(int d, int r) {
  std::size_t p = 1;
  for (int k = 0; k < r; ++k) p *= d;
  return p;
}

// contract every covariant slot with the inverse metric (shape unchanged)
TensorField raise_all(const MetricField& m, const TensorField& t) {
  const int d = t.dim();
  const int r = t.rank();
  TensorField cur = t;
  for (int slot = 0; slot < r; ++slot) {
    TensorField next = TensorField::like(t);
    const std::size_t stride = pow_dim(d, r - 1 - slot);
    for (std::size_t c = 0; c < t.components(); ++c) {
      const int a = static_cast<int>((c / stride) % d);
      const std::size_t base = c - a * stride;
      for (int b = 0; b < d; ++b) add_product(next.comp(c), m.inverse().comp(a * d + b), cur.comp(base + b * stride), 1.0);
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

TensorField partial(const TensorField& t, int coord) {
  const int axis = t.chart().axis_of(coord);
  TensorField out = TensorField::like(t);
  if (axis < 0) return out;
  for (std::size_t c = 0; c < t.components(); ++c) differentiate(t.grid(), axis, t.comp(c), out.comp(c));
  return out;
}

TensorField axis_derivative(const TensorField& t, int axis) {
  TensorField out = TensorField::like(t);
  for (std::size_t c = 0; c < t.components(); ++c) differentiate(t.grid(), axis, t.comp(c), out.comp(c));
  return out;
}

TensorField gradient_tensor(const TensorField& t) {
  const int d = t.dim();
  TensorField out(t.chart(), t.up(), t.down() + 1);
  const std::size_t up_block = pow_dim(d, t.up());
  const std::size_t down_block = pow_dim(d, t.down());
  for (int k = 0; k < d; ++k) {
    const int axis = t.chart().axis_of(k);
    if (axis < 0) continue;
    for (std::size_t u = 0; u < up_block; ++u)
      for (std::size_t l = 0; l < down_block; ++l) {
        const std::size_t src = u * down_block + l;
        const std::size_t dst = (u * d + k) * down_block + l;
        differentiate(t.grid(), axis, t.comp(src), out.comp(dst));
      }
  }
  return out;
}

TensorField second_partials(const TensorField& t) {
  const int d = t.dim();
  TensorField out(t.chart(), t.up(), t.down() + 2);
  const std::size_t up_block = pow_dim(d, t.up());
  const std::size_t down_block = pow_dim(d, t.down());
  std::vector<double> buf(t.nodes());
  for (int a = 0; a < d; ++a) {
    const int ax = t.chart().axis_of(a);
    if (ax < 0) continue;
    for (int b = a; b < d; ++b) {
      const int bx = t.chart().axis_of(b);
      if (bx < 0) continue;
      for (std::size_t u = 0; u < up_block; ++u)
        for (std::size_t l = 0; l < down_block; ++l) {
          const std::size_t src = u * down_block + l;
          auto dst = out.comp(((u * d + a) * d + b) * down_block + l);
          if (a == b) {
            differentiate2(t.grid(), ax, t.comp(src), dst);
          } else {
            differentiate(t.grid(), bx, t.comp(src), buf);
            differentiate(t.grid(), ax, buf, dst);
            std::copy(dst.begin(), dst.end(), out.comp(((u * d + b) * d + a) * down_block + l).begin());
          }
        }
    }
  }
  return out;
}

TensorField christoffel(const MetricField& m) {
  const int d = m.dim();
  const TensorField dg = gradient_tensor(m.g());  // [k][i][j] = d_k g_ij
  TensorField lower(m.chart(), 0, 3);             // Gamma_{l ij}
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        auto out = lower.comp((l * d + i) * d + j);
        auto a = dg.comp((i * d + j) * d + l);
        auto b = dg.comp((j * d + i) * d + l);
        auto c = dg.comp((l * d + i) * d + j);
        for (std::size_t n = 0; n < out.size(); ++n) out[n] = 0.5 * (a[n] + b[n] - c[n]);
        if (i != j) std::copy(out.begin(), out.end(), lower.comp((l * d + j) * d + i).begin());
      }
  TensorField gamma(m.chart(), 1, 2);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        auto out = gamma.comp((k * d + i) * d + j);
        for (int l = 0; l < d; ++l) add_product(out, m.inverse().comp(k * d + l), lower.comp((l * d + i) * d + j), 1.0);
        if (i != j) std::copy(out.begin(), out.end(), gamma.comp((k * d + j) * d + i).begin());
      }
  return gamma;
}

TensorField christoffel_gradient(const MetricField& m, const TensorField& gamma) {
  const int d = m.dim();
  const TensorField dg = gradient_tensor(m.g());   // [a][i][j]
  const TensorField ddg = second_partials(m.g());  // [a][b][i][j]
  auto DD = [&](int a, int b, int i, int j) { return ddg.comp(((a * d + b) * d + i) * d + j); };
  TensorField out(m.chart(), 1, 3);  // [k][a][i][j] = d_a Gamma^k_ij
  std::vector<double> lo(m.nodes());
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j)
        for (int l = 0; l < d; ++l) {
          // d_a Gamma_lij - d_a g_lq Gamma^q_ij
          auto x = DD(a, i, j, l);
          auto y = DD(a, j, i, l);
          auto z = DD(a, l, i, j);
          for (std::size_t n = 0; n < lo.size(); ++n) lo[n] = 0.5 * (x[n] + y[n] - z[n]);
          for (int q = 0; q < d; ++q) add_product(lo, dg.comp((a * d + l) * d + q), gamma.comp((q * d + i) * d + j), -1.0);
          for (int k = 0; k < d; ++k) add_product(out.comp(((k * d + a) * d + i) * d + j), m.inverse().comp(k * d + l), lo, 1.0);
        }
  for (int k = 0; k < d; ++k)
    for (int a = 0; a < d; ++a)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < i; ++j) {
          auto src = out.comp(((k * d + a) * d + j) * d + i);
          std::copy(src.begin(), src.end(), out.comp(((k * d + a) * d + i) * d + j).begin());
        }
  return out;
}

TensorField ricci(const MetricField& m) { return ricci(m, christoffel(m)); }

TensorField ricci(const MetricField& m, const TensorField& gamma) {
  const int d = m.dim();
  const TensorField dgam = christoffel_gradient(m, gamma);  // [k][a][i][j]
  auto DG = [&](int k, int a, int i, int j) { return dgam.comp(((k * d + a) * d + i) * d + j); };
  TensorField ric(m.chart(), 0, 2, Symmetry::symmetric);
  TensorField contr(m.chart(), 0, 1);  // Gamma^a_ab
  for (int b = 0; b < d; ++b)
    for (int a = 0; a < d; ++a) add_scaled(contr.comp(b), gamma.comp((a * d + a) * d + b), 1.0);
  for (int dd = 0; dd < d; ++dd)
    for (int b = dd; b < d; ++b) {
      auto out = ric.comp(dd * d + b);
      for (int a = 0; a < d; ++a) {
        add_scaled(out, DG(a, a, dd, b), 1.0);
        add_scaled(out, DG(a, dd, a, b), -0.5);
        add_scaled(out, DG(a, b, a, dd), -0.5);
      }
      for (int e = 0; e < d; ++e) {
        add_product(out, contr.comp(e), gamma.comp((e * d + dd) * d + b), 1.0);
        for (int a = 0; a < d; ++a)
          add_product(out, gamma.comp((a * d + dd) * d + e), gamma.comp((e * d + a) * d + b), -1.0);
      }
      if (b != dd) std::copy(out.begin(), out.end(), ric.comp(b * d + dd).begin());
    }
  return ric;
}

TensorField riemann(const MetricField& m, const TensorField& gamma) {
  const int d = m.dim();
  const TensorField dgam = christoffel_gradient(m, gamma);  // [a][c][d][b] = d_c Gamma^a_db
  TensorField r(m.chart(), 1, 3);
  auto G = [&](int a, int b, int c) { return gamma.comp((a * d + b) * d + c); };
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = c + 1; e < d; ++e) {
          auto out = r.comp(((a * d + b) * d + c) * d + e);
          add_scaled(out, dgam.comp(((a * d + c) * d + e) * d + b), 1.0);
          add_scaled(out, dgam.comp(((a * d + e) * d + c) * d + b), -1.0);
          for (int f = 0; f < d; ++f) {
            add_product(out, G(a, c, f), G(f, e, b), 1.0);
            add_product(out, G(a, e, f), G(f, c, b), -1.0);
          }
          auto anti = r.comp(((a * d + b) * d + e) * d + c);
          for (std::size_t n = 0; n < out.size(); ++n) anti[n] = -out[n];
        }
  return r;
}

TensorField scalar_curvature(const MetricField& m) { return trace(m, ricci(m)); }

TensorField covariant_derivative(const MetricField& m, const TensorField& t) {
  return covariant_derivative(m, t, christoffel(m));
}

TensorField covariant_derivative(const MetricField& m, const TensorField& t, const TensorField& gamma) {
  require_metric_chart(m, t, "covariant_derivative");
  const int d = t.dim();
  const int p = t.up(), q = t.down();
  TensorField out = gradient_tensor(t);
  std::vector<std::size_t> wt(p + q);  // weight of each slot in t's component index
  for (int s = 0; s < p + q; ++s) wt[s] = pow_dim(d, p + q - 1 - s);
  for (std::size_t c = 0; c < out.components(); ++c) {
    const auto idx = out.multi_index(c);
    const int k = idx[p];
    std::size_t tc = 0;
    for (int s = 0; s < p + q; ++s) tc += static_cast<std::size_t>(s < p ? idx[s] : idx[s + 1]) * wt[s];
    auto dst = out.comp(c);
    for (int s = 0; s < p + q; ++s) {
      const int cur = s < p ? idx[s] : idx[s + 1];
      const std::size_t base = tc - cur * wt[s];
      for (int e = 0; e < d; ++e) {
        if (s < p)
          add_product(dst, gamma.comp((cur * d + k) * d + e), t.comp(base + e * wt[s]), 1.0);
        else
          add_product(dst, gamma.comp((e * d + k) * d + cur), t.comp(base + e * wt[s]), -1.0);
      }
    }
  }
  return out;
}

TensorField second_covariant_derivative(const MetricField& m, const TensorField& t, const TensorField& gamma) {
  require_metric_chart(m, t, "second_covariant_derivative");
  if (t.up() != 0) throw InputError("second_covariant_derivative: expected a covariant tensor");
  const int d = t.dim();
  const int q = t.down();
  const std::size_t block = pow_dim(d, q);
  const TensorField dt = gradient_tensor(t);               // [b][c..]
  const TensorField ddt = second_partials(t);              // [a][b][c..]
  const TensorField nt = covariant_derivative(m, t, gamma);  // [b][c..]
  const TensorField dgam = christoffel_gradient(m, gamma);   // [e][a][b][c]
  auto G = [&](int e, int i, int j) { return gamma.comp((e * d + i) * d + j); };
  auto DG = [&](int e, int a, int i, int j) { return dgam.comp(((e * d + a) * d + i) * d + j); };
  TensorField out(t.chart(), 0, q + 2);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (std::size_t c = 0; c < block; ++c) {
        auto o = out.comp((a * d + b) * block + c);
        add_scaled(o, ddt.comp((a * d + b) * block + c), 1.0);
        for (int e = 0; e < d; ++e) add_product(o, G(e, a, b), nt.comp(e * block + c), -1.0);
        std::size_t rest = c;
        std::vector<int> idx(q);
        for (int s = q - 1; s >= 0; --s) {
          idx[s] = static_cast<int>(rest % d);
          rest /= d;
        }
        for (int s = 0; s < q; ++s) {
          const std::size_t w = pow_dim(d, q - 1 - s);
          const std::size_t base = c - idx[s] * w;
          for (int e = 0; e < d; ++e) {
            add_product(o, DG(e, a, b, idx[s]), t.comp(base + e * w), -1.0);
            add_product(o, G(e, b, idx[s]), dt.comp(a * block + base + e * w), -1.0);
            add_product(o, G(e, a, idx[s]), nt.comp(b * block + base + e * w), -1.0);
          }
        }
      }
  return out;
}

TensorField second_covariant_derivative(const MetricField& m, const TensorField& t) {
  return second_covariant_derivative(m, t, christoffel(m));
}

TensorField lichnerowicz(const MetricField& m, const TensorField& h) {
  require_covariant(h, 2, "lichnerowicz");
  require_metric_chart(m, h, "lichnerowicz");
  const double tol = 1e-10 * std::max(1.0, h.max_abs());
  if (h.symmetry_defect() > tol) throw InputError("lichnerowicz: h is not symmetric");
  const int d = m.dim();
  const TensorField gamma = christoffel(m);
  const TensorField riem = riemann(m, gamma);
  TensorField ric(m.chart(), 0, 2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int a = 0; a < d; ++a) add_scaled(ric.comp(i * d + j), riem.comp(((a * d + i) * d + a) * d + j), 1.0);
  const TensorField ddh = second_covariant_derivative(m, h, gamma);  // [l][k][i][j]
  TensorField mixed(m.chart(), 0, 2);                         // h^k_j stored as [k][j]
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) add_product(mixed.comp(k * d + j), m.inverse().comp(k * d + l), h.comp(l * d + j), 1.0);
  TensorField hup = raise_all(m, h);  // h^{kl}
  TensorField out(m.chart(), 0, 2, Symmetry::symmetric);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      auto o = out.comp(i * d + j);
      for (int l = 0; l < d; ++l)
        for (int k = 0; k < d; ++k)
          add_product(o, m.inverse().comp(l * d + k), ddh.comp(((l * d + k) * d + i) * d + j), -1.0);
      for (int k = 0; k < d; ++k) {
        add_product(o, ric.comp(i * d + k), mixed.comp(k * d + j), 1.0);
        add_product(o, ric.comp(j * d + k), mixed.comp(k * d + i), 1.0);
      }
      // R_ikjl = g_ie R^e_kjl
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          for (int e = 0; e < d; ++e) {
            auto g = m.g().comp(i * d + e);
            auto r = riem.comp(((e * d + k) * d + j) * d + l);
            auto hh = hup.comp(k * d + l);
            for (std::size_t n = 0; n < o.size(); ++n) o[n] -= 2.0 * g[n] * r[n] * hh[n];
          }
      if (i != j) std::copy(o.begin(), o.end(), out.comp(j * d + i).begin());
    }
  return out;
}

TensorField divergence(const MetricField& m, const TensorField& h) {
  require_covariant(h, 2, "divergence");
  require_metric_chart(m, h, "divergence");
  const int d = m.dim();
  const TensorField dh = covariant_derivative(m, h);  // [k][i][j]
  TensorField out(m.chart(), 0, 1);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        add_product(out.comp(j), m.inverse().comp(i * d + k), dh.comp((k * d + i) * d + j), -1.0);
  return out;
}

TensorField codifferential(const MetricField& m, const TensorField& w) {
  require_covariant(w, 1, "codifferential");
  const int d = m.dim();
  const TensorField dw = covariant_derivative(m, w);
  TensorField out = TensorField::scalar(m.chart());
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) add_product(out.comp(0), m.inverse().comp(i * d + k), dw.comp(k * d + i), -1.0);
  return out;
}

TensorField symmetrized_gradient(const MetricField& m, const TensorField& w) {
  require_covariant(w, 1, "symmetrized_gradient");
  require_metric_chart(m, w, "symmetrized_gradient");
  TensorField dw = covariant_derivative(m, w);
  dw.symmetrize();
  dw.set_symmetry(Symmetry::symmetric);
  return dw;
}

TensorField hessian(const MetricField& m, const TensorField& f) {
  require_covariant(f, 0, "hessian");
  TensorField h = second_covariant_derivative(m, f);
  h.symmetrize();
  h.set_symmetry(Symmetry::symmetric);
  return h;
}

TensorField laplacian(const MetricField& m, const TensorField& f) { return trace(m, hessian(m, f)); }

TensorField exterior_derivative(const TensorField& w) {
  if (w.up() != 0 || w.down() > 1) throw InputError("exterior_derivative: expected a function or one-form");
  if (w.down() == 0) return gradient_tensor(w);
  const int d = w.dim();
  TensorField dw = gradient_tensor(w);
  TensorField out(w.chart(), 0, 2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      auto o = out.comp(i * d + j);
      auto a = dw.comp(i * d + j);
      auto b = dw.comp(j * d + i);
      for (std::size_t n = 0; n < o.size(); ++n) o[n] = a[n] - b[n];
    }
  return out;
}

TensorField lie_derivative(const TensorField& X, const TensorField& t) {
  if (X.up() != 1 || X.down() != 0) throw InputError("lie_derivative: X must be a vector field");
  if (!(X.chart() == t.chart())) throw InputError("lie_derivative: chart mismatch");
  const int d = t.dim();
  const TensorField dt = gradient_tensor(t);
  const TensorField dX = gradient_tensor(X);  // [a][k] = d_k X^a
  if (t.up() == 1 && t.down() == 0) {
    TensorField out = TensorField::like(t);
    for (int a = 0; a < d; ++a)
      for (int k = 0; k < d; ++k) {
        add_product(out.comp(a), X.comp(k), dt.comp(a * d + k), 1.0);
        add_product(out.comp(a), t.comp(k), dX.comp(a * d + k), -1.0);
      }
    return out;
  }
  if (t.up() != 0 || t.down() > 2) throw InputError("lie_derivative: unsupported tensor rank");
  const int q = t.down();
  TensorField out = TensorField::like(t);
  const std::size_t block = pow_dim(d, q);
  for (std::size_t c = 0; c < block; ++c) {
    auto o = out.comp(c);
    for (int k = 0; k < d; ++k) add_product(o, X.comp(k), dt.comp(k * block + c), 1.0);
    const auto idx = t.multi_index(c);
    for (int s = 0; s < q; ++s) {
      const std::size_t w = pow_dim(d, q - 1 - s);
      const std::size_t base = c - idx[s] * w;
      for (int k = 0; k < d; ++k) add_product(o, t.comp(base + k * w), dX.comp(k * d + idx[s]), 1.0);
    }
  }
  return out;
}

TensorField lie_derivative_dual(const MetricField& m, const TensorField& w, const TensorField& t) {
  if (w.up() != 0 || w.down() != 1) throw InputError("lie_derivative_dual: w must be a one-form");
  if (t.up() != 0 || t.down() > 2) throw InputError("lie_derivative_dual: unsupported tensor rank");
  require_metric_chart(m, w, "lie_derivative_dual");
  require_metric_chart(m, t, "lie_derivative_dual");
  const int d = m.dim();
  const TensorField gamma = christoffel(m);
  const TensorField X = sharp(m, w);
  const int q = t.down();
  TensorField out = TensorField::like(t);
  const std::size_t block = pow_dim(d, q);
  if (q == 0) {
    const TensorField dt = gradient_tensor(t);
    for (int k = 0; k < d; ++k) add_product(out.comp(0), X.comp(k), dt.comp(k), 1.0);
    return out;
  }
  const TensorField nt = covariant_derivative(m, t, gamma);  // [k][c..]
  const TensorField nw = covariant_derivative(m, w, gamma);  // [a][j] = nabla_a w_j
  const TensorField& gi = m.inverse();
  TensorField nX(m.chart(), 0, 2);  // [a][k] = nabla_a X^k
  for (int a = 0; a < d; ++a)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) add_product(nX.comp(a * d + k), gi.comp(k * d + j), nw.comp(a * d + j), 1.0);
  for (std::size_t c = 0; c < block; ++c) {
    auto o = out.comp(c);
    for (int k = 0; k < d; ++k) add_product(o, X.comp(k), nt.comp(k * block + c), 1.0);
    const auto idx = t.multi_index(c);
    for (int s = 0; s < q; ++s) {
      const std::size_t wt = pow_dim(d, q - 1 - s);
      const std::size_t base = c - idx[s] * wt;
      for (int k = 0; k < d; ++k) add_product(o, t.comp(base + k * wt), nX.comp(idx[s] * d + k), 1.0);
    }
  }
  return out;
}

TensorField linearized_ricci(const MetricField& m, const TensorField& h) {
  TensorField out = 0.5 * lichnerowicz(m, h);
  // nabla_i (delta h)_j = -g^kl nabla_i nabla_k h_lj
  const int d = m.dim();
  const TensorField ddh = second_covariant_derivative(m, h);
  TensorField sg(m.chart(), 0, 2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) add_product(sg.comp(i * d + j), m.inverse().comp(k * d + l), ddh.comp(((i * d + k) * d + l) * d + j), -1.0);
  sg.symmetrize();
  out.axpy(-1.0, sg);
  out.axpy(-0.5, hessian(m, trace(m, h)));
  out.set_symmetry(Symmetry::symmetric);
  return out;
}

TensorField trace(const MetricField& m, const TensorField& h) {
  require_covariant(h, 2, "trace");
  const int d = m.dim();
  TensorField out = TensorField::scalar(h.chart());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) add_product(out.comp(0), m.inverse().comp(i * d + j), h.comp(i * d + j), 1.0);
  return out;
}

TensorField sharp(const MetricField& m, const TensorField& w) {
  require_covariant(w, 1, "sharp");
  const int d = m.dim();
  TensorField out(w.chart(), 1, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) add_product(out.comp(i), m.inverse().comp(i * d + j), w.comp(j), 1.0);
  return out;
}

TensorField flat(const MetricField& m, const TensorField& X) {
  if (X.up() != 1 || X.down() != 0) throw InputError("flat: expected a vector field");
  const int d = m.dim();
  TensorField out(X.chart(), 0, 1);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) add_product(out.comp(i), m.g().comp(i * d + j), X.comp(j), 1.0);
  return out;
}

TensorField compose(const MetricField& m, const TensorField& a, const TensorField& b) {
  require_covariant(a, 2, "compose");
  require_covariant(b, 2, "compose");
  const int d = m.dim();
  TensorField out(a.chart(), 0, 2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          auto o = out.comp(i * d + j);
          auto x = a.comp(i * d + k);
          auto gi = m.inverse().comp(k * d + l);
          auto y = b.comp(l * d + j);
          for (std::size_t n = 0; n < o.size(); ++n) o[n] += x[n] * gi[n] * y[n];
        }
  return out;
}

TensorField inner(const MetricField& m, const TensorField& a, const TensorField& b) {
  if (a.up() != 0 || b.up() != 0 || a.down() != b.down()) throw InputError("inner: expected covariant tensors of equal rank");
  const TensorField ra = raise_all(m, a);
  TensorField out = TensorField::scalar(a.chart());
  for (std::size_t c = 0; c < a.components(); ++c) add_product(out.comp(0), ra.comp(c), b.comp(c), 1.0);
  return out;
}

TensorField norm2(const MetricField& m, const TensorField& t) { return inner(m, t, t); }

TensorField contract_vector(const TensorField& t, const TensorField& X, int slot) {
  require_covariant(t, 2, "contract_vector");
  const int d = t.dim();
  TensorField out(t.chart(), 0, 1);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      add_product(out.comp(i), X.comp(k), t.comp(slot == 0 ? k * d + i : i * d + k), 1.0);
  return out;
}

TensorField outer(const TensorField& a, const TensorField& b) {
  if (a.up() != 0 || b.up() != 0 || !(a.chart() == b.chart())) throw InputError("outer: expected covariant tensors on one chart");
  TensorField out(a.chart(), 0, a.down() + b.down());
  for (std::size_t i = 0; i < a.components(); ++i)
    for (std::size_t j = 0; j < b.components(); ++j) add_product(out.comp(i * b.components() + j), a.comp(i), b.comp(j), 1.0);
  return out;
}

TensorField symmetric_product(const TensorField& a, const TensorField& b) {
  require_covariant(a, 1, "symmetric_product");
  require_covariant(b, 1, "symmetric_product");
  TensorField out = outer(a, b);
  out.symmetrize();
  out.set_symmetry(Symmetry::symmetric);
  return out;
}

}  // namespace stvac
