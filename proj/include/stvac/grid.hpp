#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace stvac {

enum class Topology { periodic, interval };

struct Axis {
  std::string name;
  Topology topology = Topology::interval;
  int count = 0;
  double origin = 0.0;
  double spacing = 0.0;
  bool radial = false;

  double coord(int i) const { return origin + i * spacing; }
  double end() const { return coord(count - 1); }

  static Axis interval(std::string name, double a, double b, int count);
  // nodes a + k(b-a)/count, k < count; b is identified with a
  static Axis periodic(std::string name, double a, double b, int count);
  static Axis radial_interval(std::string name, double a, double b, int count);

  bool operator==(const Axis&) const = default;
};

// Tensor-product grid. Node index runs fastest along the last axis.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<Axis> axes, int fd_order = 4);

  int rank() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int a) const { return axes_.at(a); }
  const std::vector<Axis>& axes() const { return axes_; }
  int fd_order() const { return order_; }
  std::size_t size() const { return size_; }
  std::size_t stride(int a) const { return strides_[a]; }

  int index(std::size_t node, int a) const {
    return static_cast<int>((node / strides_[a]) % axes_[a].count);
  }
  double coord(std::size_t node, int a) const { return axes_[a].coord(index(node, a)); }
  std::vector<double> point(std::size_t node) const;

  std::optional<int> radial_axis() const;
  int find_axis(const std::string& name) const;  // -1 when absent

  // every other node; interval axes need odd counts, periodic axes even counts
  Grid coarsened() const;
  bool coarsenable() const;
  Grid with_order(int p) const { return Grid(axes_, p); }
  Grid without_axis(int a) const;

  bool operator==(const Grid& o) const { return axes_ == o.axes_ && order_ == o.order_; }

 private:
  std::vector<Axis> axes_;
  int order_ = 4;
  std::size_t size_ = 0;
  std::vector<std::size_t> strides_;
};

// Chart coordinates: each is either a grid axis or an ignorable fibre
// direction (t) along which every field is constant. Grid axes that carry no
// coordinate are parameters of a family, e.g. the radial axis for slice fields.
struct Coordinate {
  std::string name;
  int axis = -1;
  bool operator==(const Coordinate&) const = default;
};

class Chart {
 public:
  Chart() = default;
  Chart(Grid grid, std::vector<Coordinate> coords);
  static Chart of(const Grid& grid);

  const Grid& grid() const { return grid_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const Coordinate& coordinate(int c) const { return coords_.at(c); }
  const std::vector<Coordinate>& coordinates() const { return coords_; }
  int axis_of(int c) const { return coords_[c].axis; }
  int coordinate_of_axis(int axis) const;  // -1 when the axis is a parameter
  std::size_t size() const { return grid_.size(); }

  Chart with_fiber(const std::string& name) const;  // prepends the fibre coordinate
  Chart without_axis_coordinate(int axis) const;     // slice chart over the same grid
  Chart on_grid(const Grid& g) const;                // same coordinate map on another grid

  bool operator==(const Chart& o) const { return grid_ == o.grid_ && coords_ == o.coords_; }

 private:
  Grid grid_;
  std::vector<Coordinate> coords_;
};

}  // namespace stvac
