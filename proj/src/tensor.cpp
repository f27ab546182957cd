#include "stvac/tensor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "stvac/error.hpp"

namespace stvac {

TensorField::TensorField(Chart chart, int up, int down, Symmetry sym)
    : chart_(std::move(chart)), up_(up), down_(down), sym_(sym) {
  if (up < 0 || down < 0) throw InputError("negative tensor rank");
  if (sym == Symmetry::symmetric && down < 2) throw InputError("symmetric flag needs two covariant indices");
  comps_ = 1;
  for (int k = 0; k < up + down; ++k) comps_ *= static_cast<std::size_t>(chart_.dim());
  nodes_ = chart_.size();
  data_.assign(comps_ * nodes_, 0.0);
}

TensorField TensorField::scalar(const Chart& chart, double value) {
  TensorField t(chart, 0, 0);
  std::fill(t.data_.begin(), t.data_.end(), value);
  return t;
}

std::size_t TensorField::index(std::initializer_list<int> idx) const {
  if (static_cast<int>(idx.size()) != rank()) throw InputError("index count does not match tensor rank");
  std::size_t c = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim()) throw InputError("tensor index out of range");
    c = c * dim() + i;
  }
  return c;
}

std::vector<int> TensorField::multi_index(std::size_t comp) const {
  std::vector<int> idx(rank());
  for (int k = rank() - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(comp % dim());
    comp /= dim();
  }
  return idx;
}

bool TensorField::same_shape(const TensorField& o) const {
  return up_ == o.up_ && down_ == o.down_ && chart_ == o.chart_;
}

void TensorField::require_same_shape(const TensorField& o, const char* where) const {
  if (!same_shape(o)) throw InputError(std::string(where) + ": tensor shape or chart mismatch");
}

double TensorField::symmetry_defect() const {
  if (down_ < 2) return 0.0;
  const std::size_t d = dim();
  const std::size_t blocks = comps_ / (d * d);
  double worst = 0.0;
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        auto x = comp(b * d * d + i * d + j);
        auto y = comp(b * d * d + j * d + i);
        for (std::size_t n = 0; n < nodes_; ++n) worst = std::max(worst, std::abs(x[n] - y[n]));
      }
  return worst;
}

void TensorField::symmetrize() {
  if (down_ < 2) return;
  const std::size_t d = dim();
  const std::size_t blocks = comps_ / (d * d);
  for (std::size_t b = 0; b < blocks; ++b)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        auto x = comp(b * d * d + i * d + j);
        auto y = comp(b * d * d + j * d + i);
        for (std::size_t n = 0; n < nodes_; ++n) x[n] = y[n] = 0.5 * (x[n] + y[n]);
      }
}

double TensorField::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double TensorField::max_abs(std::size_t c) const {
  double m = 0.0;
  for (double v : comp(c)) m = std::max(m, std::abs(v));
  return m;
}

TensorField& TensorField::operator+=(const TensorField& o) {
  require_same_shape(o, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  if (o.sym_ != sym_) sym_ = Symmetry::general;
  return *this;
}

TensorField& TensorField::operator-=(const TensorField& o) {
  require_same_shape(o, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  if (o.sym_ != sym_) sym_ = Symmetry::general;
  return *this;
}

TensorField& TensorField::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

TensorField& TensorField::axpy(double a, const TensorField& x) {
  require_same_shape(x, "axpy");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * x.data_[i];
  if (x.sym_ != sym_) sym_ = Symmetry::general;
  return *this;
}

TensorField& TensorField::scale_by(const TensorField& f) {
  if (f.rank() != 0 || f.nodes() != nodes_) throw InputError("scale_by: expected a scalar field on the same grid");
  for (std::size_t c = 0; c < comps_; ++c) {
    auto x = comp(c);
    for (std::size_t n = 0; n < nodes_; ++n) x[n] *= f.data_[n];
  }
  return *this;
}

TensorField TensorField::with_chart(const Chart& c) const {
  if ((rank() > 0 && c.dim() != dim()) || c.size() != nodes_) throw InputError("with_chart: incompatible chart");
  TensorField t = *this;
  t.chart_ = c;
  return t;
}

TensorField times(const TensorField& f, const TensorField& t) {
  TensorField r = t;
  return r.scale_by(f);
}

TensorField apply(const TensorField& f, double (*fn)(double)) {
  TensorField r = f;
  for (double& v : r.data()) v = fn(v);
  return r;
}

TensorField power(const TensorField& f, double p) {
  TensorField r = f;
  for (double& v : r.data()) v = std::pow(v, p);
  return r;
}

TensorField restrict_to(const TensorField& fine, const Chart& coarse) {
  const Grid& fg = fine.grid();
  const Grid& cg = coarse.grid();
  if (fg.rank() != cg.rank() || coarse.dim() != fine.dim()) throw InputError("restrict_to: incompatible charts");
  for (int a = 0; a < fg.rank(); ++a) {
    const Axis& f = fg.axis(a);
    const Axis& c = cg.axis(a);
    const int want = f.topology == Topology::interval ? (f.count + 1) / 2 : f.count / 2;
    if (c.count != want || std::abs(c.spacing - 2 * f.spacing) > 1e-12 * c.spacing || std::abs(c.origin - f.origin) > 1e-12 * (1 + std::abs(f.origin)))
      throw InputError("restrict_to: coarse grid is not every other fine node");
  }
  TensorField out(coarse, fine.up(), fine.down(), fine.symmetry());
  for (std::size_t n = 0; n < cg.size(); ++n) {
    std::size_t fn = 0;
    for (int a = 0; a < cg.rank(); ++a) fn += static_cast<std::size_t>(2 * cg.index(n, a)) * fg.stride(a);
    for (std::size_t c = 0; c < out.components(); ++c) out.at(n, c) = fine.at(fn, c);
  }
  return out;
}

double truncation_estimate(const TensorField& fine, const TensorField& coarse, int order) {
  const TensorField r = restrict_to(fine, coarse.chart());
  double m = 0.0;
  for (std::size_t i = 0; i < r.data().size(); ++i) m = std::max(m, std::abs(r.data()[i] - coarse.data()[i]));
  return m / (std::pow(2.0, order) - 1.0);
}

double zero_tolerance(const TensorField& fine, const TensorField& coarse, int order, double floor) {
  return std::max(10.0 * truncation_estimate(fine, coarse, order), floor);
}

MetricField::MetricField(TensorField g, Signature sig, double det_tolerance) : g_(std::move(g)), sig_(sig) {
  if (g_.up() != 0 || g_.down() != 2) throw InputError("metric must be a covariant 2-tensor");
  const double defect = g_.symmetry_defect();
  if (defect > 1e-12 * std::max(1.0, g_.max_abs())) throw InputError("metric components are not symmetric");
  g_.set_symmetry(Symmetry::symmetric);
  const int d = g_.dim();
  const std::size_t nn = g_.nodes();
  inv_ = TensorField(g_.chart(), 2, 0);
  det_.assign(nn, 0.0);
  Eigen::MatrixXd m(d, d);
  for (std::size_t n = 0; n < nn; ++n) {
    double scale = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        m(i, j) = g_.at(n, i * d + j);
        scale = std::max(scale, std::abs(m(i, j)));
      }
    if (!std::isfinite(scale)) throw SingularMetricError(n, "non-finite metric component");
    const double det = m.determinant();
    det_[n] = det;
    if (!(std::abs(det) > det_tolerance * std::pow(scale, d))) throw SingularMetricError(n, "degenerate metric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    int neg = 0;
    for (int i = 0; i < d; ++i) neg += es.eigenvalues()(i) < 0.0;
    const int want = sig_ == Signature::riemannian ? 0 : 1;
    if (neg != want) throw SingularMetricError(n, "metric signature does not match the declared one");
    const Eigen::MatrixXd mi = m.inverse();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) inv_.at(n, i * d + j) = 0.5 * (mi(i, j) + mi(j, i));
  }
}

}  // namespace stvac
