#pragma once

#include <array>
#include <cstddef>
#include <functional>

#include <Eigen/Core>

namespace freeze {

/// A point in the (at most two-dimensional) computational domain. Unused
/// coordinates are zero.
using Point = std::array<double, 2>;

/// Axis-aligned bounds (lower, upper) of one coordinate direction.
struct Interval {
  double lower;
  double upper;
};

/// A strided run of cells along one axis: cell `i` of the line has flat
/// index `start + i * stride`.
struct Line {
  std::ptrdiff_t start;
  std::ptrdiff_t stride;
  int length;
};

/// Uniform cell-centred rectangular grid in one or two dimensions.
///
/// Along axis j the domain [lower_j, upper_j] is split into `cells(j) =
/// interior(j) + 2` cells of width dx(j). Face f of that axis sits at
/// lower_j + f * dx(j), f = 0..cells(j); faces 0 and cells(j) lie on the
/// domain boundary. Flat cell indices run with axis 0 fastest.
class Grid {
 public:
  Grid() = default;

  int dim() const { return dim_; }
  const Interval& bounds(int axis) const { return bounds_[axis]; }
  int interior(int axis) const { return interior_[axis]; }
  int cells(int axis) const { return cells_[axis]; }
  double dx(int axis) const { return dx_[axis]; }
  double min_dx() const;
  double cell_volume() const;
  std::ptrdiff_t size() const { return static_cast<std::ptrdiff_t>(cells_[0]) * cells_[1]; }

  std::ptrdiff_t flatten(int k0, int k1 = 0) const { return k0 + static_cast<std::ptrdiff_t>(cells_[0]) * k1; }
  std::array<int, 2> unflatten(std::ptrdiff_t index) const;

  double center(int axis, int k) const { return bounds_[axis].lower + (k + 0.5) * dx_[axis]; }
  double face(int axis, int f) const { return bounds_[axis].lower + f * dx_[axis]; }
  Point center_point(std::ptrdiff_t index) const;
  /// Largest |xi_j| over the closed domain.
  double max_abs_coordinate(int axis) const;

  /// Number of grid lines running along `axis` (1 in 1D).
  int line_count(int axis) const { return axis == 0 ? cells_[1] : cells_[0]; }
  Line line(int axis, int l) const;
  /// Centre coordinate of line `l` in the direction transverse to `axis`.
  double line_offset(int axis, int l) const;

  /// Faces per axis, stored line by line: face f of line l is
  /// `l * (cells(axis) + 1) + f`.
  std::ptrdiff_t face_count(int axis) const {
    return static_cast<std::ptrdiff_t>(line_count(axis)) * (cells_[axis] + 1);
  }
  bool is_boundary_face(int axis, int f) const { return f == 0 || f == cells_[axis]; }

  friend Grid build_grid(int dim, const std::array<Interval, 2>& bounds, const std::array<int, 2>& interior);

 private:
  int dim_ = 1;
  std::array<Interval, 2> bounds_{{{0.0, 1.0}, {0.0, 1.0}}};
  std::array<int, 2> interior_{0, 0};
  std::array<int, 2> cells_{1, 1};
  std::array<double, 2> dx_{1.0, 1.0};
};

/// Builds a grid with `interior[j]` cells plus one boundary layer on each
/// side per axis. Throws invalid-bounds / too-few-cells.
Grid build_grid(int dim, const std::array<Interval, 2>& bounds, const std::array<int, 2>& interior);
Grid build_grid_1d(Interval bounds, int interior);
Grid build_grid_2d(Interval x, Interval y, int interior_x, int interior_y);

/// Cell averages over a grid.
struct CellField {
  Grid grid;
  Eigen::VectorXd values;

  double operator[](std::ptrdiff_t k) const { return values[k]; }
  std::ptrdiff_t size() const { return values.size(); }
};

CellField make_field(const Grid& grid, Eigen::VectorXd values);

/// Midpoint-rule cell averages v_k = u0(xi_k). Throws non-finite.
CellField cell_average_init(const Grid& grid, const std::function<double(const Point&)>& u0);

/// Sum of vol(C_k) * v_k.
double total_mass(const CellField& field);

}  // namespace freeze
