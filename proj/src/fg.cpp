#include "stvac/fg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "stvac/calculus.hpp"
#include "stvac/error.hpp"

namespace stvac {

namespace {

MetricField as_metric(const TensorField& g) {
  try {
    return MetricField(g, Signature::lorentzian);
  } catch (const SingularMetricError&) {
    return MetricField(g, Signature::riemannian);
  }
}

// (ab)_ij = a_ik b_kj for two-index fields of any variance
TensorField mat_mul(const TensorField& a, const TensorField& b) {
  const int d = a.dim();
  TensorField out(a.chart(), 0, 2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      auto o = out.comp(i * d + j);
      for (int k = 0; k < d; ++k) {
        auto x = a.comp(i * d + k), y = b.comp(k * d + j);
        for (std::size_t p = 0; p < o.size(); ++p) o[p] += x[p] * y[p];
      }
    }
  return out;
}

TensorField mat_trace(const TensorField& a) {
  const int d = a.dim();
  TensorField out = TensorField::scalar(a.chart());
  auto o = out.comp(0);
  for (int i = 0; i < d; ++i) {
    auto x = a.comp(i * d + i);
    for (std::size_t p = 0; p < o.size(); ++p) o[p] += x[p];
  }
  return out;
}

// power-series data of h = sum G_m rho^m needed by the recursion
struct SeriesTerms {
  std::vector<TensorField> H;    // h^-1
  std::vector<TensorField> Ric;  // Ric(h)
};

// series of h^-1 up to `top` and of Ric(h) up to `ric_top`, from coeff[0..]
SeriesTerms series_terms(const std::vector<TensorField>& G, const TensorField& H0, int top, int ric_top) {
  const Chart& c = H0.chart();
  const int d = c.dim();
  SeriesTerms s;
  s.H.push_back(H0);
  for (int j = 1; j <= top; ++j) {
    TensorField acc(c, 0, 2);
    for (int i = 1; i <= j; ++i) acc += mat_mul(G[i], s.H[j - i]);
    s.H.push_back(-1.0 * mat_mul(H0, acc));
  }
  // Gamma^k_ij series and its boundary gradient
  std::vector<TensorField> gam, dgam;
  std::vector<TensorField> low;
  for (int j = 0; j <= ric_top; ++j) {
    const TensorField dG = gradient_tensor(G[j]);  // [k][i][j] = d_k G_ij
    TensorField l(c, 0, 3);                         // [l][i][j]
    for (int a = 0; a < d; ++a)
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
          auto o = l.comp((a * d + i) * d + k);
          auto x = dG.comp((i * d + k) * d + a), y = dG.comp((k * d + i) * d + a), z = dG.comp((a * d + i) * d + k);
          for (std::size_t p = 0; p < o.size(); ++p) o[p] = 0.5 * (x[p] + y[p] - z[p]);
        }
    low.push_back(std::move(l));
  }
  for (int j = 0; j <= ric_top; ++j) {
    TensorField g(c, 1, 2);
    for (int a = 0; a <= j; ++a) {
      const TensorField& Ha = s.H[a];
      const TensorField& Lb = low[j - a];
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          auto h = Ha.comp(k * d + l);
          for (int i = 0; i < d * d; ++i) {
            auto o = g.comp(k * d * d + i);
            auto x = Lb.comp(l * d * d + i);
            for (std::size_t p = 0; p < o.size(); ++p) o[p] += h[p] * x[p];
          }
        }
    }
    dgam.push_back(gradient_tensor(g));  // [k][m][i][j]
    gam.push_back(std::move(g));
  }
  for (int j = 0; j <= ric_top; ++j) {
    TensorField R(c, 0, 2);
    for (int i = 0; i < d; ++i)
      for (int b = 0; b < d; ++b) {
        auto o = R.comp(i * d + b);
        for (int k = 0; k < d; ++k) {
          auto x = dgam[j].comp(((k * d + k) * d + i) * d + b), y = dgam[j].comp(((k * d + b) * d + i) * d + k);
          for (std::size_t p = 0; p < o.size(); ++p) o[p] += x[p] - y[p];
        }
        for (int a = 0; a <= j; ++a) {
          const TensorField& A = gam[a];
          const TensorField& B = gam[j - a];
          for (int k = 0; k < d; ++k)
            for (int q = 0; q < d; ++q) {
              auto x1 = A.comp((k * d + k) * d + q), y1 = B.comp((q * d + i) * d + b);
              auto x2 = A.comp((k * d + b) * d + q), y2 = B.comp((q * d + i) * d + k);
              for (std::size_t p = 0; p < o.size(); ++p) o[p] += x1[p] * y1[p] - x2[p] * y2[p];
            }
        }
      }
    R.symmetrize();
    s.Ric.push_back(std::move(R));
  }
  return s;
}

// coefficient of rho^(m-1) in the ij equation with G_m = 0
TensorField order_source(const std::vector<TensorField>& G, const SeriesTerms& s, int m) {
  const Chart& c = G[0].chart();
  auto P = [&](int j) { return static_cast<double>(j + 1) * G[j + 1]; };
  std::vector<TensorField> tau;
  for (int a = 0; a <= m - 1; ++a) {
    TensorField t = TensorField::scalar(c);
    for (int e = 0; e <= a; ++e) t += mat_trace(mat_mul(s.H[a - e], P(e)));
    tau.push_back(std::move(t));
  }
  TensorField E(c, 0, 2);
  for (int a = 0; a <= m - 1; ++a) E -= times(tau[a], G[m - 1 - a]);
  for (int a = 0; a <= m - 2; ++a)
    for (int b = 0; a + b <= m - 2; ++b) E -= mat_mul(mat_mul(P(a), s.H[b]), P(m - 2 - a - b));
  for (int a = 0; a <= m - 2; ++a) E += 0.5 * times(tau[a], P(m - 2 - a));
  if (m >= 2) E.axpy(-2.0, s.Ric[m - 2]);
  return E;
}

// sup over nodes of the part of E not proportional to G0
double traceless_sup(const TensorField& E, const TensorField& G0, const TensorField& H0, int n) {
  const TensorField tr = mat_trace(mat_mul(H0, E));
  TensorField tf = E;
  tf -= (1.0 / n) * times(tr, G0);
  return tf.max_abs();
}

}  // namespace

FGData fg_expand(const TensorField& G0, const TensorField& Gn, int order) {
  if (G0.up() != 0 || G0.down() != 2) throw InputError("fg_expand: G0 must be a covariant 2-tensor");
  if (!Gn.same_shape(G0) && !(Gn.up() == 0 && Gn.down() == 2 && Gn.chart() == G0.chart()))
    throw InputError("fg_expand: Gn must be a covariant 2-tensor on the chart of G0");
  const int n = G0.dim();
  if (n < 2 || n > 5) throw InputError("fg_expand: boundary dimension must be 2..5");
  if (order < 0 || order > n + 2) throw InputError("fg_expand: order must lie in 0..n+2");
  const MetricField m0 = as_metric(G0);
  const TensorField& H0 = m0.inverse();
  const Chart& c = G0.chart();
  const int d = n;

  FGData out;
  out.n = n;
  out.log_term = n % 2 == 0;
  out.coeff.push_back(G0);
  out.coeff.back().set_symmetry(Symmetry::symmetric);
  for (int k = 0; k <= 8; ++k) out.rho.push_back(0.005 * std::pow(10.0, 2.0 * k / 8.0));

  std::vector<TensorField> G{G0};
  G[0].set_symmetry(Symmetry::general);
  for (int mo = 1; mo <= order; ++mo) {
    G.emplace_back(c, 0, 2);  // G_m = 0 while forming the source
    const SeriesTerms s = series_terms(G, H0, mo - 1, std::max(mo - 2, 0));
    const TensorField E = order_source(G, s, mo);
    TensorField Gm(c, 0, 2);
    if (mo == n) {
      const double obstruction = traceless_sup(E, G0, H0, n);
      if (n % 2 == 0)
        throw InputError("fg_expand: even boundary dimension " + std::to_string(n) + " has a log term at order " + std::to_string(n) +
                         " (obstruction sup " + std::to_string(obstruction) + "); request order < n");
      // trace fixed by -n tr(G_n) G0 = -E, traceless part free
      const TensorField T = (1.0 / (n * n)) * mat_trace(mat_mul(H0, E));
      const TensorField given = mat_trace(mat_mul(H0, Gn));
      TensorField diff = given - T;
      if (diff.max_abs() > 1e-9 * std::max(1.0, Gn.max_abs()))
        throw InputError("fg_expand: trace of Gn is fixed by G0 and does not match (sup difference " + std::to_string(diff.max_abs()) + ")");
      Gm = Gn;
      Gm.set_symmetry(Symmetry::general);
    } else {
      // m (m - n) X - m tr(G0^-1 X) G0 = -E on symmetric components
      const int ns = d * (d + 1) / 2;
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) pairs.emplace_back(i, j);
      Eigen::MatrixXd M(ns, ns);
      Eigen::VectorXd rhs(ns);
      for (std::size_t p = 0; p < c.size(); ++p) {
        for (int col = 0; col < ns; ++col) {
          const auto [a, b] = pairs[col];
          const double trX = a == b ? H0.at(p, a * d + a) : 2.0 * H0.at(p, a * d + b);
          for (int row = 0; row < ns; ++row) {
            const auto [i, j] = pairs[row];
            const double X = (i == a && j == b) ? 1.0 : 0.0;
            M(row, col) = mo * (mo - n) * X - mo * trX * G0.at(p, i * d + j);
          }
        }
        for (int row = 0; row < ns; ++row) rhs(row) = -E.at(p, pairs[row].first * d + pairs[row].second);
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
        if (lu.rank() < ns) throw DomainError("fg_expand: singular linear system at order " + std::to_string(mo));
        const Eigen::VectorXd x = lu.solve(rhs);
        for (int row = 0; row < ns; ++row) {
          const auto [i, j] = pairs[row];
          Gm.at(p, i * d + j) = Gm.at(p, j * d + i) = x(row);
        }
      }
    }
    G.back() = Gm;
    TensorField sym = Gm;
    sym.set_symmetry(Symmetry::symmetric);
    out.coeff.push_back(std::move(sym));
  }
  return out;
}

TensorField fg_metric(const FGData& d, double rho) {
  TensorField h = d.coeff[0];
  double r = 1.0;
  for (int m = 1; m <= d.order(); ++m) {
    r *= rho;
    h.axpy(r, d.coeff[m]);
  }
  return h;
}

double fg_residual(const FGData& data, double rho) {
  if (!(rho > 0.0)) throw InputError("fg_residual: rho must be positive");
  const int n = data.n;
  const TensorField h = fg_metric(data, rho);
  TensorField hp(h.chart(), 0, 2, Symmetry::symmetric), hpp(h.chart(), 0, 2, Symmetry::symmetric);
  for (int m = 1; m <= data.order(); ++m) {
    hp.axpy(m * std::pow(rho, m - 1), data.coeff[m]);
    if (m >= 2) hpp.axpy(m * (m - 1) * std::pow(rho, m - 2), data.coeff[m]);
  }
  const MetricField mh = as_metric(h);
  const TensorField& hi = mh.inverse();
  const TensorField tau = mat_trace(mat_mul(hi, hp));
  const TensorField hp_hi_hp = mat_mul(mat_mul(hp, hi), hp);

  // tangential block: -(1/(2 rho)) [rho h'' + (1-n) h' - tau h - rho h' h^-1 h' + rho tau h' / 2 - 2 rho Ric(h)]
  TensorField gr = rho * hpp;
  gr.axpy(1.0 - n, hp);
  gr -= times(tau, h);
  gr.axpy(-rho, hp_hi_hp);
  gr += (0.5 * rho) * times(tau, hp);
  gr.axpy(-2.0 * rho, ricci(mh));
  const TensorField Eij = (-0.5 / rho) * gr;

  // rho-rho: -tr(h^-1 h'')/2 + tr(h^-1 h' h^-1 h')/4 + tau/(2 rho)
  TensorField Err = -0.5 * mat_trace(mat_mul(hi, hpp));
  Err += 0.25 * mat_trace(mat_mul(hi, hp_hi_hp));
  Err += (0.5 / rho) * tau;

  // rho-i: h^kl (D_k h'_il - D_i h'_kl) / 2
  const TensorField Dhp = covariant_derivative(mh, hp);  // [k][i][l]
  const int d = h.dim();
  TensorField Eri(h.chart(), 0, 1);
  for (int i = 0; i < d; ++i) {
    auto o = Eri.comp(i);
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        auto w = hi.comp(k * d + l), x = Dhp.comp((k * d + i) * d + l), y = Dhp.comp((i * d + k) * d + l);
        for (std::size_t p = 0; p < o.size(); ++p) o[p] += 0.5 * w[p] * (x[p] - y[p]);
      }
  }

  // |E|_g with g^-1 = rho^2 (drho^2 + h)^-1
  const TensorField ij2 = norm2(mh, Eij);
  const TensorField ri2 = norm2(mh, Eri);
  double sup = 0.0;
  for (std::size_t p = 0; p < h.nodes(); ++p) {
    const double v = Err.data()[p] * Err.data()[p] + 2.0 * ri2.data()[p] + ij2.data()[p];
    sup = std::max(sup, rho * rho * std::sqrt(std::abs(v)));
  }
  return sup;
}

FGDecay fg_decay(const FGData& d) {
  FGDecay out;
  out.rho = d.rho;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (double r : d.rho) {
    const double v = fg_residual(d, r);
    out.residual.push_back(v);
    if (!(v > 0.0)) continue;
    const double lx = std::log(r), ly = std::log(v);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    ++cnt;
  }
  out.slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : std::numeric_limits<double>::infinity();
  return out;
}

FGComparison fg_compare(const FGData& a, const FGData& b, double tol) {
  if (a.n != b.n) throw InputError("fg_compare: boundary dimensions differ");
  if (!(a.chart() == b.chart())) throw InputError("fg_compare: chart mismatch");
  FGComparison out;
  out.tolerance = tol;
  const int k = std::min(a.order(), b.order());
  for (int m = 0; m <= k; ++m) {
    TensorField diff = a.coeff[m] - b.coeff[m];
    out.difference.push_back(diff.max_abs());
    if (out.first_difference < 0 && out.difference.back() > tol) out.first_difference = m;
  }
  return out;
}

Bundle to_bundle(const FGData& d) {
  Bundle b;
  b.kind = "fg";
  b.meta = {{"n", std::to_string(d.n)}, {"order", std::to_string(d.order())}, {"log_term", d.log_term ? "1" : "0"}};
  std::string rho;
  for (double r : d.rho) rho += (rho.empty() ? "" : ",") + hex(r);
  b.meta.emplace_back("rho", rho);
  Block blk{"coefficients", d.chart(), {}, {}};
  for (int m = 0; m <= d.order(); ++m) blk.fields.emplace_back("G" + std::to_string(m), d.coeff[m]);
  b.blocks.push_back(std::move(blk));
  return b;
}

FGData fg_from_bundle(const Bundle& b) {
  if (b.kind != "fg") throw InputError("expected an fg bundle, got " + b.kind);
  FGData d;
  d.n = static_cast<int>(b.meta_number("n"));
  const int order = static_cast<int>(b.meta_number("order"));
  d.log_term = b.meta_value("log_term") == "1";
  const std::string rho = b.meta_value("rho");
  std::size_t pos = 0;
  while (pos < rho.size()) {
    const std::size_t next = std::min(rho.find(',', pos), rho.size());
    d.rho.push_back(parse_number(rho.substr(pos, next - pos)));
    pos = next + 1;
  }
  const Block& blk = b.block("coefficients");
  for (int m = 0; m <= order; ++m) d.coeff.push_back(blk.field("G" + std::to_string(m)));
  if (d.n != d.coeff[0].dim()) throw InputError("fg file: n does not match the boundary chart");
  return d;
}

}  // namespace stvac
