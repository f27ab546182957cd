#include "stvac/grid.hpp"

#include <algorithm>

#include "stvac/error.hpp"

namespace stvac {

Axis Axis::interval(std::string name, double a, double b, int count) {
  if (count < 2) throw InputError("axis " + name + ": need at least two nodes");
  return Axis{std::move(name), Topology::interval, count, a, (b - a) / (count - 1), false};
}

Axis Axis::periodic(std::string name, double a, double b, int count) {
  if (count < 1) throw InputError("axis " + name + ": empty");
  return Axis{std::move(name), Topology::periodic, count, a, (b - a) / count, false};
}

Axis Axis::radial_interval(std::string name, double a, double b, int count) {
  Axis ax = interval(std::move(name), a, b, count);
  ax.radial = true;
  return ax;
}

Grid::Grid(std::vector<Axis> axes, int fd_order) : axes_(std::move(axes)), order_(fd_order) {
  if (axes_.empty()) throw InputError("grid needs at least one axis");
  if (order_ < 2 || order_ % 2 != 0 || order_ > 12)
    throw InputError("finite-difference order must be even and in [2, 12]");
  int radial = 0;
  for (const auto& ax : axes_) {
    if (ax.count < 5) throw InputError("axis " + ax.name + ": fewer than 5 nodes");
    if (ax.topology == Topology::interval && ax.count < order_ + 2)
      throw InputError("axis " + ax.name + ": fewer nodes than the stencil width");
    if (!(ax.spacing > 0.0)) throw InputError("axis " + ax.name + ": spacing must be positive");
    if (ax.radial) ++radial;
  }
  if (radial > 1) throw InputError("at most one axis may carry the radial tag");
  strides_.assign(axes_.size(), 1);
  for (int a = rank() - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * axes_[a + 1].count;
  size_ = strides_[0] * axes_[0].count;
}

std::vector<double> Grid::point(std::size_t node) const {
  std::vector<double> p(axes_.size());
  for (int a = 0; a < rank(); ++a) p[a] = coord(node, a);
  return p;
}

std::optional<int> Grid::radial_axis() const {
  for (int a = 0; a < rank(); ++a)
    if (axes_[a].radial) return a;
  return std::nullopt;
}

int Grid::find_axis(const std::string& name) const {
  for (int a = 0; a < rank(); ++a)
    if (axes_[a].name == name) return a;
  return -1;
}

bool Grid::coarsenable() const {
  for (const auto& ax : axes_) {
    if (ax.topology == Topology::interval && (ax.count % 2 == 0 || (ax.count + 1) / 2 < std::max(5, order_ + 2)))
      return false;
    if (ax.topology == Topology::periodic && (ax.count % 2 != 0 || ax.count / 2 < 5)) return false;
  }
  return true;
}

Grid Grid::coarsened() const {
  if (!coarsenable()) throw InputError("grid cannot be coarsened by two");
  std::vector<Axis> c = axes_;
  for (auto& ax : c) {
    ax.count = ax.topology == Topology::interval ? (ax.count + 1) / 2 : ax.count / 2;
    ax.spacing *= 2.0;
  }
  return Grid(c, order_);
}

Grid Grid::without_axis(int a) const {
  std::vector<Axis> c = axes_;
  c.erase(c.begin() + a);
  return Grid(c, order_);
}

Chart::Chart(Grid grid, std::vector<Coordinate> coords) : grid_(std::move(grid)), coords_(std::move(coords)) {
  std::vector<int> used(grid_.rank(), 0);
  for (const auto& c : coords_) {
    if (c.axis >= grid_.rank()) throw InputError("coordinate " + c.name + " names a missing axis");
    if (c.axis >= 0 && used[c.axis]++) throw InputError("axis used by two coordinates");
  }
  if (coords_.empty()) throw InputError("chart needs at least one coordinate");
}

Chart Chart::of(const Grid& grid) {
  std::vector<Coordinate> c;
  for (int a = 0; a < grid.rank(); ++a) c.push_back({grid.axis(a).name, a});
  return Chart(grid, std::move(c));
}

int Chart::coordinate_of_axis(int axis) const {
  for (int c = 0; c < dim(); ++c)
    if (coords_[c].axis == axis) return c;
  return -1;
}

Chart Chart::with_fiber(const std::string& name) const {
  std::vector<Coordinate> c;
  c.push_back({name, -1});
  c.insert(c.end(), coords_.begin(), coords_.end());
  return Chart(grid_, std::move(c));
}

Chart Chart::without_axis_coordinate(int axis) const {
  std::vector<Coordinate> c;
  for (const auto& co : coords_)
    if (co.axis != axis) c.push_back(co);
  return Chart(grid_, std::move(c));
}

Chart Chart::on_grid(const Grid& g) const {
  if (g.rank() != grid_.rank()) throw InputError("grid rank mismatch");
  return Chart(g, coords_);
}

}  // namespace stvac
