#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "stvac/calculus.hpp"
#include "stvac/grid.hpp"
#include "stvac/tensor.hpp"

namespace testing {

using namespace stvac;

inline double max_diff(const TensorField& a, const TensorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

// max |a - b| over nodes whose index on every interval axis is at least `margin` away from the ends
inline double max_diff_interior(const TensorField& a, const TensorField& b, int margin) {
  const Grid& g = a.grid();
  double m = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    bool keep = true;
    for (int ax = 0; ax < g.rank(); ++ax) {
      if (g.axis(ax).topology != Topology::interval) continue;
      const int i = g.index(n, ax);
      if (i < margin || i >= g.axis(ax).count - margin) keep = false;
    }
    if (!keep) continue;
    for (std::size_t c = 0; c < a.components(); ++c) m = std::max(m, std::abs(a.at(n, c) - b.at(n, c)));
  }
  return m;
}

using MetricFn = std::function<void(const std::vector<double>&, double*)>;

inline MetricField metric_from(const Chart& chart, const MetricFn& f, Signature s = Signature::riemannian) {
  return MetricField(TensorField::sample(chart, 0, 2, Symmetry::symmetric, f), s);
}

}  // namespace testing
