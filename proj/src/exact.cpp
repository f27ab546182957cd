#include "stvac/exact.hpp"

#include <cmath>

#include "stvac/error.hpp"

namespace stvac {

namespace {

// grid coordinate of chart coordinate c at node n (fibre coordinates read 0)
double coord(const Chart& chart, std::size_t n, int c) {
  const int ax = chart.axis_of(c);
  return ax < 0 ? 0.0 : chart.grid().coord(n, ax);
}

TensorField scalar_from(const Chart& chart, double (*f)(const Chart&, std::size_t, double), double arg) {
  TensorField s = TensorField::scalar(chart);
  for (std::size_t n = 0; n < s.nodes(); ++n) s.data()[n] = f(chart, n, arg);
  return s;
}

}  // namespace

MetricField flat_metric(const Chart& chart) {
  const int d = chart.dim();
  TensorField g(chart, 0, 2, Symmetry::symmetric);
  for (int i = 0; i < d; ++i) std::fill(g.comp(i * d + i).begin(), g.comp(i * d + i).end(), 1.0);
  return MetricField(std::move(g), Signature::riemannian);
}

MetricField hyperbolic_metric(const Chart& chart) {
  const int d = chart.dim();
  TensorField g(chart, 0, 2, Symmetry::symmetric);
  for (std::size_t n = 0; n < g.nodes(); ++n) {
    const double e2 = std::exp(2.0 * coord(chart, n, 0));
    g.at(n, 0) = 1.0;
    for (int i = 1; i < d; ++i) g.at(n, i * d + i) = e2;
  }
  return MetricField(std::move(g), Signature::riemannian);
}

StationaryMetric minkowski(const Chart& chart) {
  return StationaryMetric(TensorField::scalar(chart, 1.0), TensorField(chart, 0, 1), flat_metric(chart), 0.0);
}

StationaryMetric anti_de_sitter(const Chart& chart) {
  const int n = chart.dim();
  TensorField V = scalar_from(chart, [](const Chart& c, std::size_t k, double) { return std::exp(coord(c, k, 0)); }, 0.0);
  return StationaryMetric(std::move(V), TensorField(chart, 0, 1), hyperbolic_metric(chart), -0.5 * n * (n - 1));
}

StationaryMetric schwarzschild(const Chart& chart, double mass) {
  if (chart.dim() != 3) throw InputError("schwarzschild: expected coordinates (rho, theta, phi)");
  TensorField V = TensorField::scalar(chart);
  TensorField g(chart, 0, 2, Symmetry::symmetric);
  for (std::size_t k = 0; k < V.nodes(); ++k) {
    const double rho = coord(chart, k, 0);
    const double th = coord(chart, k, 1);
    const double f = 1.0 - 2.0 * mass / rho;
    if (!(f > 0.0)) throw DomainError("schwarzschild: chart reaches the horizon");
    V.data()[k] = std::sqrt(f);
    g.at(k, 0) = 1.0 / f;
    g.at(k, 4) = rho * rho;
    g.at(k, 8) = rho * rho * std::sin(th) * std::sin(th);
  }
  return StationaryMetric(std::move(V), TensorField(chart, 0, 1), MetricField(std::move(g), Signature::riemannian), 0.0);
}

}  // namespace stvac
