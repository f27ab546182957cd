#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "stvac/continuation.hpp"
#include "stvac/error.hpp"
#include "stvac/stationary.hpp"

namespace stvac {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using State = std::vector<double>;

struct BlowUp {
  std::string what;
};

double curvature_sign(Sector s) { return s == Sector::torus ? 0.0 : (s == Sector::sphere ? 1.0 : -1.0); }

// layout: g (k^2), Pi (k^2), V, V', xi (k), xi' (k)
State pack(const SectorState& s) {
  State y;
  y.insert(y.end(), s.g.begin(), s.g.end());
  y.insert(y.end(), s.Pi.begin(), s.Pi.end());
  y.push_back(s.V);
  y.push_back(s.Vp);
  y.insert(y.end(), s.xi.begin(), s.xi.end());
  y.insert(y.end(), s.xip.begin(), s.xip.end());
  return y;
}

SectorState unpack(const State& y, int k) {
  SectorState s;
  s.k = k;
  const std::size_t kk = static_cast<std::size_t>(k) * k;
  s.g.assign(y.begin(), y.begin() + kk);
  s.Pi.assign(y.begin() + kk, y.begin() + 2 * kk);
  s.V = y[2 * kk];
  s.Vp = y[2 * kk + 1];
  s.xi.assign(y.begin() + 2 * kk + 2, y.begin() + 2 * kk + 2 + k);
  s.xip.assign(y.begin() + 2 * kk + 2 + k, y.end());
  return s;
}

Mat as_mat(const std::vector<double>& v, int k) { return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(v.data(), k, k); }
Vec as_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

struct System {
  int k;
  double c, kappa;

  void operator()(const State& y, State& dy, double /*r*/) const {
    const std::size_t kk = static_cast<std::size_t>(k) * k;
    const Mat g = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(y.data(), k, k);
    const Mat P = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(y.data() + kk, k, k);
    const double V = y[2 * kk], Vp = y[2 * kk + 1];
    const Vec xp = Eigen::Map<const Vec>(y.data() + 2 * kk + 2 + k, k);
    for (double v : y)
      if (!std::isfinite(v)) throw BlowUp{"non-finite state"};
    if (!(V > 0.0)) throw BlowUp{"V reached zero"};
    Eigen::LDLT<Mat> ldlt(g);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0)) throw BlowUp{"slice metric degenerated"};
    const Mat gi = ldlt.solve(Mat::Identity(k, k));
    const double H = (gi * P).trace();
    const Vec xs = gi * xp;
    const double xi2 = xp.dot(xs);
    const Mat dP = c * (k - 1) * Mat::Identity(k, k) + kappa * g - H * P + 2.0 * P * gi * P - (Vp / V) * P + 0.5 * V * V * xp * xp.transpose();
    const double Vpp = -H * Vp + kappa * V - 0.5 * V * V * V * xi2;
    const Vec xpp = -3.0 * (Vp / V) * xp - H * xp + 2.0 * P * xs;
    dy.resize(y.size());
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        dy[i * k + j] = 2.0 * P(i, j);
        dy[kk + i * k + j] = 0.5 * (dP(i, j) + dP(j, i));
      }
    dy[2 * kk] = Vp;
    dy[2 * kk + 1] = Vpp;
    for (int i = 0; i < k; ++i) {
      dy[2 * kk + 2 + i] = xp(i);
      dy[2 * kk + 2 + k + i] = xpp(i);
    }
  }
};

void validate(const SectorProblem& p) {
  const SectorState& s = p.initial;
  const int k = s.k;
  const std::size_t kk = static_cast<std::size_t>(k) * k;
  if (k < 1) throw InputError("sector: slice dimension must be positive");
  if (s.g.size() != kk || s.Pi.size() != kk || s.xi.size() != static_cast<std::size_t>(k) || s.xip.size() != static_cast<std::size_t>(k))
    throw InputError("sector: state sizes do not match the slice dimension " + std::to_string(k));
  if (!(s.V > 0.0)) throw InputError("sector: V must be positive");
  const Mat g = as_mat(s.g, k), P = as_mat(s.Pi, k);
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-14 * (1 + g.cwiseAbs().maxCoeff()) ||
      (P - P.transpose()).cwiseAbs().maxCoeff() > 1e-14 * (1 + P.cwiseAbs().maxCoeff()))
    throw InputError("sector: g and Pi must be symmetric");
  if (Eigen::SelfAdjointEigenSolver<Mat>(g).eigenvalues().minCoeff() <= 0.0) throw InputError("sector: g must be positive definite");
  if (p.sector != Sector::torus) {
    // only isotropic data keep the round or hyperbolic model invariant
    const double a = g(0, 0), b = P(0, 0);
    const double tol = 1e-14 * (1 + std::abs(a) + std::abs(b));
    if ((g - a * Mat::Identity(k, k)).cwiseAbs().maxCoeff() > tol || (P - b * Mat::Identity(k, k)).cwiseAbs().maxCoeff() > tol)
      throw InputError("sector: " + to_string(p.sector) + " slices need g and Pi proportional to the model metric");
    if (as_vec(s.xi).cwiseAbs().maxCoeff() != 0.0 || as_vec(s.xip).cwiseAbs().maxCoeff() != 0.0)
      throw InputError("sector: " + to_string(p.sector) + " slices carry no invariant one-form, xi must vanish");
    if (p.sector == Sector::sphere && k < 2) throw InputError("sector: sphere slices need dimension at least 2");
  }
}

}  // namespace

std::string to_string(Sector s) {
  switch (s) {
    case Sector::torus: return "torus";
    case Sector::sphere: return "sphere";
    case Sector::hyperbolic: return "hyperbolic";
  }
  return "";
}

double sector_constraint(const SectorProblem& p, const SectorState& s) {
  const int k = s.k;
  const Mat g = as_mat(s.g, k), P = as_mat(s.Pi, k);
  const Vec xp = as_vec(s.xip);
  const Mat gi = g.inverse();
  const double kappa = kappa_of(p.Lambda, k + 1);
  const double R = curvature_sign(p.sector) * (k - 1) * gi.trace();
  const double H = (gi * P).trace();
  const double P2 = (gi * P * gi * P).trace();
  return R - H * H + P2 - 2.0 * H * s.Vp / s.V + k * kappa - 0.5 * s.V * s.V * xp.dot(gi * xp);
}

double sector_separation(const SectorState& a, const SectorState& b) {
  if (a.k != b.k) throw InputError("sector separation: different slice dimensions");
  double sep = std::abs(a.V - b.V);
  const Vec ea = Eigen::SelfAdjointEigenSolver<Mat>(as_mat(a.g, a.k)).eigenvalues();
  const Vec eb = Eigen::SelfAdjointEigenSolver<Mat>(as_mat(b.g, b.k)).eigenvalues();
  for (int i = 0; i < a.k; ++i) sep = std::max(sep, std::abs(std::sqrt(std::max(ea(i), 0.0)) - std::sqrt(std::max(eb(i), 0.0))));
  for (int i = 0; i < a.k; ++i) sep = std::max(sep, std::abs(a.xi[i] - b.xi[i]));
  return sep;
}

SectorSolution integrate_sector(const SectorProblem& p, double r0, const std::vector<double>& radii, double tolerance) {
  namespace odeint = boost::numeric::odeint;
  validate(p);
  if (!(tolerance > 0.0)) throw InputError("sector: tolerance must be positive");
  const int k = p.initial.k;
  const System sys{k, curvature_sign(p.sector), kappa_of(p.Lambda, k + 1)};
  SectorSolution out;
  if (radii.empty()) return out;
  const double dir = radii.back() >= r0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (dir * (radii[i] - (i == 0 ? r0 : radii[i - 1])) < 0.0) throw InputError("sector: radii must be monotone away from the start");

  // integrate_times reports the start as well
  const bool extra = radii.front() != r0;
  std::vector<double> times;
  if (extra) times.push_back(r0);
  times.insert(times.end(), radii.begin(), radii.end());
  State y = pack(p.initial);
  auto stepper = odeint::make_dense_output(tolerance, tolerance, odeint::runge_kutta_dopri5<State>());
  auto observe = [&](const State& s, double r) {
    out.radius.push_back(r);
    out.states.push_back(unpack(s, k));
    out.constraint.push_back(sector_constraint(p, out.states.back()));
  };
  try {
    odeint::integrate_times(stepper, sys, y, times.begin(), times.end(), dir * 1e-3, observe, odeint::max_step_checker(1000000));
  } catch (const BlowUp& e) {
    out.truncated = true;
    out.diagnostic = e.what + " beyond radius " + (out.radius.empty() ? std::to_string(r0) : std::to_string(out.radius.back()));
  } catch (const std::exception& e) {
    out.truncated = true;
    out.diagnostic = std::string("integrator stopped: ") + e.what();
  }
  if (extra && !out.radius.empty()) {
    out.radius.erase(out.radius.begin());
    out.states.erase(out.states.begin());
    out.constraint.erase(out.constraint.begin());
  }
  return out;
}

SeparationTrace continuation_ode(const SectorProblem& a, const SectorProblem& b, double r0, double r1, int samples, double tolerance) {
  if (samples < 2) throw InputError("continuation: at least two samples");
  if (a.initial.k != b.initial.k || a.sector != b.sector) throw InputError("continuation: data sets belong to different sectors");
  std::vector<double> radii(samples);
  for (int i = 0; i < samples; ++i) radii[i] = r0 + (r1 - r0) * i / (samples - 1);
  SeparationTrace t;
  t.a = integrate_sector(a, r0, radii, tolerance);
  t.b = integrate_sector(b, r0, radii, tolerance);
  const std::size_t n = std::min(t.a.states.size(), t.b.states.size());
  for (std::size_t i = 0; i < n; ++i) {
    t.radius.push_back(t.a.radius[i]);
    t.separation.push_back(sector_separation(t.a.states[i], t.b.states[i]));
    t.sup = std::max(t.sup, t.separation.back());
  }
  t.truncated = t.a.truncated || t.b.truncated;
  if (t.a.truncated) t.diagnostic = "first data set: " + t.a.diagnostic;
  if (t.b.truncated) t.diagnostic += (t.diagnostic.empty() ? "" : "; ") + std::string("second data set: ") + t.b.diagnostic;
  return t;
}

SectorProblem ads_sector(int k) {
  if (k < 1) throw InputError("sector: slice dimension must be positive");
  SectorProblem p;
  p.sector = Sector::torus;
  p.Lambda = -0.5 * k * (k + 1);
  SectorState& s = p.initial;
  s.k = k;
  s.g.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) s.g[i * k + i] = 1.0;
  s.Pi = s.g;
  s.V = s.Vp = 1.0;
  s.xi.assign(k, 0.0);
  s.xip.assign(k, 0.0);
  return p;
}

SectorProblem schwarzschild_sector(double mass, double rho_b) {
  if (!(mass >= 0.0) || !(rho_b > 2.0 * mass)) throw InputError("schwarzschild sector: need 0 <= 2m < rho_b");
  SectorProblem p;
  p.sector = Sector::sphere;
  p.Lambda = 0.0;
  const double V = std::sqrt(1.0 - 2.0 * mass / rho_b);
  SectorState& s = p.initial;
  s.k = 2;
  s.g = {rho_b * rho_b, 0.0, 0.0, rho_b * rho_b};
  // g = a^2 sigma with a' = V
  s.Pi = {rho_b * V, 0.0, 0.0, rho_b * V};
  s.V = V;
  s.Vp = mass / (rho_b * rho_b);
  s.xi = {0.0, 0.0};
  s.xip = {0.0, 0.0};
  return p;
}

double schwarzschild_lapse(double mass, double rho_b, double x) {
  if (!(mass >= 0.0) || !(rho_b > 2.0 * mass) || !(x >= 0.0)) throw InputError("schwarzschild lapse: need 0 <= 2m < rho_b and x >= 0");
  // distance from rho_b; d(distance)/d rho = 1/V >= 1
  auto dist = [&](double rho) {
    auto X = [&](double q) { return std::sqrt(q * (q - 2 * mass)) + 2 * mass * std::log(std::sqrt(q) + std::sqrt(q - 2 * mass)); };
    return X(rho) - X(rho_b);
  };
  if (x == 0.0) return std::sqrt(1.0 - 2.0 * mass / rho_b);
  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve([&](double q) { return dist(q) - x; }, rho_b, rho_b + x, boost::math::tools::eps_tolerance<double>(52), iters);
  const double rho = 0.5 * (root.first + root.second);
  return std::sqrt(1.0 - 2.0 * mass / rho);
}

}  // namespace stvac
