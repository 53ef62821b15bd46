#include "freeze/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freeze/error.hpp"

namespace freeze {

double Grid::min_dx() const { return dim_ == 1 ? dx_[0] : std::min(dx_[0], dx_[1]); }

double Grid::cell_volume() const { return dim_ == 1 ? dx_[0] : dx_[0] * dx_[1]; }

std::array<int, 2> Grid::unflatten(std::ptrdiff_t index) const {
  return {static_cast<int>(index % cells_[0]), static_cast<int>(index / cells_[0])};
}

Point Grid::center_point(std::ptrdiff_t index) const {
  const auto k = unflatten(index);
  return {center(0, k[0]), dim_ == 2 ? center(1, k[1]) : 0.0};
}

double Grid::max_abs_coordinate(int axis) const {
  return std::max(std::abs(bounds_[axis].lower), std::abs(bounds_[axis].upper));
}

Line Grid::line(int axis, int l) const {
  if (axis == 0) return {static_cast<std::ptrdiff_t>(l) * cells_[0], 1, cells_[0]};
  return {l, cells_[0], cells_[1]};
}

double Grid::line_offset(int axis, int l) const {
  if (dim_ == 1) return 0.0;
  return axis == 0 ? center(1, l) : center(0, l);
}

Grid build_grid(int dim, const std::array<Interval, 2>& bounds, const std::array<int, 2>& interior) {
  if (dim != 1 && dim != 2) {
    throw Error(ErrorCode::invalid_argument, "grid dimension must be 1 or 2");
  }
  Grid g;
  g.dim_ = dim;
  for (int j = 0; j < dim; ++j) {
    const auto& b = bounds[j];
    if (!(std::isfinite(b.lower) && std::isfinite(b.upper) && b.lower < b.upper)) {
      std::ostringstream msg;
      msg << "axis " << j << ": need finite lower < upper, got (" << b.lower << ", " << b.upper << ")";
      throw Error(ErrorCode::invalid_bounds, msg.str());
    }
    // minmod reaches two neighbours on each side of an interior cell
    if (interior[j] < 4) {
      std::ostringstream msg;
      msg << "axis " << j << ": need at least 4 cells, got " << interior[j];
      throw Error(ErrorCode::too_few_cells, msg.str());
    }
    g.bounds_[j] = b;
    g.interior_[j] = interior[j];
    g.cells_[j] = interior[j] + 2;
    g.dx_[j] = (b.upper - b.lower) / g.cells_[j];
  }
  return g;
}

Grid build_grid_1d(Interval bounds, int interior) { return build_grid(1, {bounds, Interval{0.0, 1.0}}, {interior, 0}); }

Grid build_grid_2d(Interval x, Interval y, int interior_x, int interior_y) {
  return build_grid(2, {x, y}, {interior_x, interior_y});
}

CellField make_field(const Grid& grid, Eigen::VectorXd values) {
  if (values.size() != grid.size()) {
    std::ostringstream msg;
    msg << "field has " << values.size() << " entries, grid has " << grid.size() << " cells";
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
  return CellField{grid, std::move(values)};
}

CellField cell_average_init(const Grid& grid, const std::function<double(const Point&)>& u0) {
  Eigen::VectorXd values(grid.size());
  for (std::ptrdiff_t k = 0; k < grid.size(); ++k) {
    const Point xi = grid.center_point(k);
    const double v = u0(xi);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "initial function is not finite at (" << xi[0] << ", " << xi[1] << ")";
      throw Error(ErrorCode::non_finite, msg.str());
    }
    values[k] = v;
  }
  return CellField{grid, std::move(values)};
}

double total_mass(const CellField& field) { return field.grid.cell_volume() * field.values.sum(); }

}  // namespace freeze
