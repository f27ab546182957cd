#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "stvac/grid.hpp"

namespace stvac {

enum class Symmetry { general, symmetric };

// Grid-sampled tensor with `up` contravariant and `down` covariant indices.
// Storage is component-major (all nodes of component 0, then component 1,
// ...), contravariant indices first, row-major in the index tuple.
class TensorField {
 public:
  TensorField() = default;
  TensorField(Chart chart, int up, int down, Symmetry sym = Symmetry::general);

  static TensorField scalar(const Chart& chart, double value = 0.0);
  static TensorField like(const TensorField& t) { return TensorField(t.chart_, t.up_, t.down_, t.sym_); }

  // f(point, out): point holds the grid-axis coordinates, out the components
  template <class F>
  static TensorField sample(const Chart& chart, int up, int down, Symmetry sym, F&& f) {
    TensorField t(chart, up, down, sym);
    std::vector<double> comps(t.components());
    const Grid& g = chart.grid();
    for (std::size_t n = 0; n < g.size(); ++n) {
      const auto p = g.point(n);
      std::fill(comps.begin(), comps.end(), 0.0);
      f(p, comps.data());
      for (std::size_t c = 0; c < comps.size(); ++c) t.data_[c * t.nodes_ + n] = comps[c];
    }
    return t;
  }

  const Chart& chart() const { return chart_; }
  const Grid& grid() const { return chart_.grid(); }
  int up() const { return up_; }
  int down() const { return down_; }
  int rank() const { return up_ + down_; }
  int dim() const { return chart_.dim(); }
  Symmetry symmetry() const { return sym_; }
  void set_symmetry(Symmetry s) { sym_ = s; }
  std::size_t components() const { return comps_; }
  std::size_t nodes() const { return nodes_; }

  std::size_t index(std::initializer_list<int> idx) const;
  std::vector<int> multi_index(std::size_t comp) const;

  std::span<double> comp(std::size_t c) { return {data_.data() + c * nodes_, nodes_}; }
  std::span<const double> comp(std::size_t c) const { return {data_.data() + c * nodes_, nodes_}; }
  std::span<double> comp(std::initializer_list<int> idx) { return comp(index(idx)); }
  std::span<const double> comp(std::initializer_list<int> idx) const { return comp(index(idx)); }
  double& at(std::size_t node, std::size_t c) { return data_[c * nodes_ + node]; }
  double at(std::size_t node, std::size_t c) const { return data_[c * nodes_ + node]; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const TensorField& o) const;
  void require_same_shape(const TensorField& o, const char* where) const;

  // largest violation of symmetry in the last two covariant indices
  double symmetry_defect() const;
  void symmetrize();

  double max_abs() const;
  double max_abs(std::size_t c) const;

  TensorField& operator+=(const TensorField& o);
  TensorField& operator-=(const TensorField& o);
  TensorField& operator*=(double s);
  TensorField& axpy(double a, const TensorField& x);
  // pointwise product with a scalar field
  TensorField& scale_by(const TensorField& f);

  friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
  friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
  friend TensorField operator*(double s, TensorField a) { return a *= s; }
  friend TensorField operator*(TensorField a, double s) { return a *= s; }

  TensorField with_chart(const Chart& c) const;

 private:
  Chart chart_;
  int up_ = 0, down_ = 0;
  Symmetry sym_ = Symmetry::general;
  std::size_t comps_ = 1, nodes_ = 0;
  std::vector<double> data_;
};

TensorField times(const TensorField& f, const TensorField& t);  // f scalar field
TensorField apply(const TensorField& f, double (*fn)(double));
TensorField power(const TensorField& f, double p);  // pointwise f^p

// samples of a fine-grid field at the nodes of `coarse` (every other node)
TensorField restrict_to(const TensorField& fine, const Chart& coarse);
// sup |fine - coarse| / (2^p - 1) over the coarse nodes: Richardson estimate of
// the fine-grid truncation error
double truncation_estimate(const TensorField& fine, const TensorField& coarse, int order);
// bound used for "zero": 10 x the Richardson estimate, never below a round-off floor
double zero_tolerance(const TensorField& fine, const TensorField& coarse, int order, double floor = 1e-10);

enum class Signature { riemannian, lorentzian };

class MetricField {
 public:
  MetricField() = default;
  MetricField(TensorField g, Signature sig, double det_tolerance = 1e-12);

  const TensorField& g() const { return g_; }
  const TensorField& inverse() const { return inv_; }
  const std::vector<double>& det() const { return det_; }
  Signature signature() const { return sig_; }
  const Chart& chart() const { return g_.chart(); }
  int dim() const { return g_.dim(); }
  std::size_t nodes() const { return g_.nodes(); }

 private:
  TensorField g_, inv_;
  std::vector<double> det_;
  Signature sig_ = Signature::riemannian;
};

}  // namespace stvac
