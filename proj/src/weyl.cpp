#include "stvac/weyl.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "stvac/calculus.hpp"
#include "stvac/error.hpp"

namespace stvac {

namespace {

constexpr double pi = std::numbers::pi;
// |u| beyond this makes e^{+-2u} leave the double range
constexpr double kMaxPotential = 300.0;

double k_quadrature(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

struct Fit {
  double slope = 0.0, rss = 0.0;
};

// y ~ c + slope x
Fit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
  Fit f;
  f.slope = sxy / sxx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - my - f.slope * (x[i] - mx);
    f.rss += e * e;
  }
  return f;
}

}  // namespace

AxisymmetricHarmonic::AxisymmetricHarmonic(std::vector<double> a, double R, bool exterior)
    : a_(std::move(a)), R_(R), exterior_(exterior) {
  if (a_.empty()) throw InputError("AxisymmetricHarmonic: no coefficients");
  if (!(R_ > 0.0) || !std::isfinite(R_)) throw InputError("AxisymmetricHarmonic: radius must be positive");
  double s = 0.0;
  for (int l = 0; l <= degree(); ++l) {
    if (!std::isfinite(a_[l])) throw InputError("AxisymmetricHarmonic: coefficient " + std::to_string(l) + " is not finite");
    s += std::abs(a_[l]) * (exterior_ ? std::pow(R_, -l - 1.0) : std::pow(R_, l));
  }
  if (!std::isfinite(s)) throw InputError("AxisymmetricHarmonic: series does not converge on the sphere of radius R");
}

std::vector<double> AxisymmetricHarmonic::boundary_coefficients() const {
  std::vector<double> b(a_.size());
  for (int l = 0; l <= degree(); ++l) b[l] = a_[l] * (exterior_ ? std::pow(R_, -l - 1.0) : std::pow(R_, l));
  return b;
}

bool AxisymmetricHarmonic::contains(double rho, double z) const {
  const double r = std::hypot(rho, z);
  const double tol = 1e-12 * R_;
  return exterior_ ? r >= R_ - tol : r <= R_ + tol;
}

AxisymmetricHarmonic::Sample AxisymmetricHarmonic::eval(double rho, double z) const {
  if (!contains(rho, z))
    throw DomainError("AxisymmetricHarmonic: point (rho, z) = (" + std::to_string(rho) + ", " + std::to_string(z) + ") lies outside the domain");
  const double r = std::hypot(rho, z);
  Sample s;
  if (r == 0.0) {
    s.u = a_[0];
    s.u_z = degree() >= 1 ? a_[1] : 0.0;
    return s;
  }
  const double c = z / r, sn = rho / r;
  // P_l, P'_l by recurrence; q = rt^(l-1) (interior) or rt^(-l-2) (exterior)
  double p0 = 1.0, p1 = c, d0 = 0.0, d1 = 1.0;
  double q = exterior_ ? 1.0 / (r * r) : 1.0 / r;
  const double step = exterior_ ? 1.0 / r : r;
  double ur = 0.0, ut = 0.0;  // d_rt u and (1/rt) d_vt u
  for (int l = 0; l <= degree(); ++l) {
    double P, dP;
    if (l == 0) {
      P = p0, dP = d0;
    } else if (l == 1) {
      P = p1, dP = d1;
    } else {
      P = ((2.0 * l - 1.0) * c * p1 - (l - 1.0) * p0) / l;
      dP = d0 + (2.0 * l - 1.0) * p1;
      p0 = p1, p1 = P, d0 = d1, d1 = dP;
    }
    s.u += a_[l] * q * r * P;
    ur += (exterior_ ? -(l + 1.0) : l) * a_[l] * q * P;
    ut -= sn * a_[l] * q * dP;
    q *= step;
  }
  s.u_rho = sn * ur + c * ut;
  s.u_z = c * ur - sn * ut;
  return s;
}

AxisymmetricHarmonic solve_axisym_laplace(const std::function<double(double, double)>& f, double R, int L, bool exterior) {
  if (L < 0) throw InputError("solve_axisym_laplace: truncation degree must be non-negative");
  const int N = 2 * L + 2;
  const auto half = boost::math::legendre_p_zeros<double>(N);
  std::vector<double> nodes, weights;
  for (double x : half) {
    const double dp = boost::math::legendre_p_prime(N, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes.push_back(x), weights.push_back(w);
    if (x != 0.0) nodes.push_back(-x), weights.push_back(w);
  }
  std::vector<double> values(nodes.size());
  double scale = 0.0, spread = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double th = std::acos(nodes[j]);
    values[j] = f(th, 0.0);
    if (!std::isfinite(values[j])) throw InputError("solve_axisym_laplace: boundary data is not finite");
    scale = std::max(scale, std::abs(values[j]));
    for (int m = 1; m < 7; ++m) spread = std::max(spread, std::abs(f(th, 2.0 * pi * m / 7.0) - values[j]));
  }
  if (spread > 1e-12 * (1.0 + scale))
    throw InputError("solve_axisym_laplace: boundary data depends on phi (variation " + std::to_string(spread) + ")");

  std::vector<double> a(L + 1, 0.0);
  for (int l = 0; l <= L; ++l) {
    double s = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) s += weights[j] * values[j] * boost::math::legendre_p(l, nodes[j]);
    const double b = 0.5 * (2.0 * l + 1.0) * s;
    a[l] = exterior ? b * std::pow(R, l + 1.0) : b * std::pow(R, -l);
  }
  return AxisymmetricHarmonic(std::move(a), R, exterior);
}

TensorField flat_laplacian(const AxisymmetricHarmonic& u, const Grid& rz) {
  const Chart chart = Chart(rz, {{"rho", 0}, {"z", 1}}).with_fiber("phi");
  auto g = TensorField::sample(chart, 0, 2, Symmetry::symmetric, [](const std::vector<double>& p, double* v) {
    v[0] = p[0] * p[0];
    v[4] = 1.0;
    v[8] = 1.0;
  });
  auto f = TensorField::sample(chart, 0, 0, Symmetry::general, [&](const std::vector<double>& p, double* v) { v[0] = u.eval(p[0], p[1]).u; });
  return laplacian(MetricField(std::move(g), Signature::riemannian), f);
}

double weyl_k(const AxisymmetricHarmonic& u, double rho, double z, KPath path) {
  if (rho < 0.0) throw InputError("weyl_k: rho must be non-negative");
  if (!u.contains(rho, z)) throw DomainError("weyl_k: point lies outside the domain of u");
  if (rho == 0.0) return 0.0;
  if (path == KPath::axis) {
    if (!u.contains(0.0, z)) throw DomainError("weyl_k: the path from the axis at z = " + std::to_string(z) + " leaves the domain of u");
    return k_quadrature(
        [&](double x) {
          const auto s = u.eval(x, z);
          return x * (s.u_rho * s.u_rho - s.u_z * s.u_z);
        },
        0.0, rho);
  }
  const double r = std::hypot(rho, z), th = std::atan2(rho, z);
  // dk/dvt along rt = const
  auto dk = [&](double t) {
    const double x = r * std::sin(t), y = r * std::cos(t);
    const auto s = u.eval(x, y);
    const double kr = x * (s.u_rho * s.u_rho - s.u_z * s.u_z), kz = 2.0 * x * s.u_rho * s.u_z;
    return kr * r * std::cos(t) - kz * r * std::sin(t);
  };
  return path == KPath::north_arc ? k_quadrature(dk, 0.0, th) : -k_quadrature(dk, th, pi);
}

WeylMetric weyl_metric(const AxisymmetricHarmonic& u, const Grid& rz) {
  if (rz.rank() != 2) throw InputError("weyl_metric: expected a grid with axes (rho, z)");
  for (int a = 0; a < 2; ++a)
    if (rz.axis(a).topology != Topology::interval) throw InputError("weyl_metric: rho and z axes must be intervals");
  if (!(rz.axis(0).origin > 0.0)) throw DomainError("weyl_metric: the grid touches the symmetry axis rho = 0");
  const Chart chart = Chart(rz, {{"rho", 0}, {"z", 1}}).with_fiber("phi");

  WeylMetric w;
  w.u = u;
  TensorField V = TensorField::scalar(chart);
  TensorField k = TensorField::scalar(chart);
  TensorField g(chart, 0, 2, Symmetry::symmetric);
  w.inf_V = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < rz.size(); ++n) {
    const double rho = rz.coord(n, 0), z = rz.coord(n, 1);
    if (!u.contains(rho, z))
      throw DomainError("weyl_metric: node " + std::to_string(n) + " lies outside the domain of u");
    const double un = u.eval(rho, z).u;
    if (!(std::abs(un) < kMaxPotential))
      throw DomainError("weyl_metric: V = e^u under- or overflows at node " + std::to_string(n) + " (u = " + std::to_string(un) + ")");
    const double kn = weyl_k(u, rho, z, KPath::north_arc);
    const double ks = weyl_k(u, rho, z, KPath::south_arc);
    w.path_defect = std::max(w.path_defect, std::abs(kn - ks));
    V.data()[n] = std::exp(un);
    k.data()[n] = kn;
    const double c = std::exp(-2.0 * un);
    g.at(n, 0) = c * rho * rho;
    g.at(n, 4) = g.at(n, 8) = c * std::exp(2.0 * kn);
    w.inf_V = std::min(w.inf_V, V.data()[n]);
    w.sup_V = std::max(w.sup_V, V.data()[n]);
  }
  w.k = std::move(k);
  w.metric = StationaryMetric(std::move(V), TensorField(chart, 0, 1), MetricField(std::move(g), Signature::riemannian), 0.0);
  return w;
}

std::string to_string(AnalyticityVerdict v) {
  switch (v) {
    case AnalyticityVerdict::analytic: return "analytic";
    case AnalyticityVerdict::smooth_non_analytic: return "smooth-non-analytic";
    case AnalyticityVerdict::insufficient_data: return "insufficient-data";
  }
  return "?";
}

AnalyticityReport analyticity_classify(std::span<const double> b) {
  AnalyticityReport rep;
  const int L = static_cast<int>(b.size()) - 1;
  if (L < kMinClassifyDegree) {
    rep.diagnostic = "degree " + std::to_string(L) + " below " + std::to_string(kMinClassifyDegree);
    return rep;
  }
  std::vector<double> xl, xs, xa, y;
  for (int l = 1; l <= L; ++l) {
    const double m = std::abs(b[l]);
    if (!std::isfinite(m) || m < 1e-300) continue;
    xl.push_back(l), xs.push_back(std::sqrt(static_cast<double>(l))), xa.push_back(std::log(static_cast<double>(l)));
    y.push_back(std::log(m));
  }
  rep.used = static_cast<int>(y.size());
  if (rep.used < kMinClassifyDegree / 2) {
    rep.diagnostic = "only " + std::to_string(rep.used) + " coefficients above 1e-300";
    return rep;
  }
  const Fit fg = line_fit(xl, y), fs = line_fit(xs, y), fa = line_fit(xa, y);
  rep.epsilon = -fg.slope, rep.beta = -fs.slope, rep.power = -fa.slope;
  const double n = rep.used;
  auto bic = [&](const Fit& f) { return n * std::log(std::max(f.rss / n, 1e-30)) + 2.0 * std::log(n); };
  rep.bic_geometric = bic(fg), rep.bic_stretched = bic(fs), rep.bic_algebraic = bic(fa);
  const double best = std::min({rep.bic_geometric, rep.bic_stretched, rep.bic_algebraic});
  if (best == rep.bic_geometric && rep.epsilon > 0.0) {
    rep.verdict = AnalyticityVerdict::analytic;
    rep.diagnostic = "geometric decay fits best";
  } else if (best == rep.bic_stretched && rep.beta > 0.0) {
    rep.verdict = AnalyticityVerdict::smooth_non_analytic;
    rep.diagnostic = "stretched-exponential decay fits best";
  } else {
    rep.diagnostic = best == rep.bic_algebraic ? "algebraic decay fits best" : "no decay";
  }
  return rep;
}

AnalyticityReport analyticity_classify(const AxisymmetricHarmonic& u) {
  const auto b = u.boundary_coefficients();
  return analyticity_classify(std::span<const double>(b));
}

std::vector<double> synthetic_spectrum(SpectrumKind kind, double rate, double noise, std::uint64_t seed, int L) {
  if (L < 0) throw InputError("synthetic_spectrum: degree must be non-negative");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> b(L + 1, 1.0);
  for (int l = 1; l <= L; ++l) {
    double lg = 0.0;
    switch (kind) {
      case SpectrumKind::geometric: lg = -rate * l; break;
      case SpectrumKind::stretched: lg = -rate * std::sqrt(static_cast<double>(l)); break;
      case SpectrumKind::algebraic: lg = -rate * std::log(static_cast<double>(l)); break;
    }
    lg += noise * gauss(rng);
    b[l] = (sign(rng) ? -1.0 : 1.0) * std::exp(lg);
  }
  return b;
}

}  // namespace stvac
