#include "freeze/central_flux.hpp"

#include <cmath>
#include <sstream>

#include "freeze/error.hpp"

namespace freeze {

double face_flux(const FluxFunction& flux, const Point& xi_face, double u_minus, double u_plus, double a_bound) {
  if (a_bound < 0.0) throw Error(ErrorCode::invalid_argument, "wave speed bound must be non-negative");
  double h = 0.0;
  if (!flux.is_zero()) h = 0.5 * (flux.eval(xi_face, u_plus) + flux.eval(xi_face, u_minus));
  if (flux.carries_dissipation) h -= a_bound * (u_plus - u_minus);
  if (!std::isfinite(h)) {
    std::ostringstream msg;
    msg << "face flux at (" << xi_face[0] << ", " << xi_face[1] << ")";
    throw Error(ErrorCode::non_finite, msg.str());
  }
  return h;
}

Point face_point(const Grid& grid, int axis, int l, int f) {
  if (axis == 0) return {grid.face(0, f), grid.line_offset(0, l)};
  return {grid.line_offset(1, l), grid.face(1, f)};
}

void zero_boundary_faces(const Grid& grid, int axis, Eigen::VectorXd& faces) {
  const int nf = grid.cells(axis) + 1;
  for (int l = 0; l < grid.line_count(axis); ++l) {
    faces[static_cast<std::ptrdiff_t>(l) * nf] = 0.0;
    faces[static_cast<std::ptrdiff_t>(l) * nf + nf - 1] = 0.0;
  }
}

Eigen::VectorXd hyperbolic_face_fluxes(const Grid& grid, const FaceLimits& limits, int axis, const FluxFunction& flux,
                                       double a_bound) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(grid.face_count(axis));
  if (flux.is_zero() && !flux.carries_dissipation) return h;
  const int nf = grid.cells(axis) + 1;
  const auto& minus = limits.minus[axis];
  const auto& plus = limits.plus[axis];
  for (int l = 0; l < grid.line_count(axis); ++l) {
    const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(l) * nf;
    for (int f = 1; f + 1 < nf; ++f) {
      h[base + f] = face_flux(flux, face_point(grid, axis, l, f), minus[base + f], plus[base + f], a_bound);
    }
  }
  return h;
}

Eigen::VectorXd diffusion_face_fluxes(const CellField& field, int axis, double nu) {
  if (nu < 0.0) throw Error(ErrorCode::invalid_argument, "viscosity must be non-negative");
  const Grid& grid = field.grid;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(grid.face_count(axis));
  if (nu == 0.0) return p;
  const int nf = grid.cells(axis) + 1;
  const double scale = nu / grid.dx(axis);
  for (int l = 0; l < grid.line_count(axis); ++l) {
    const Line line = grid.line(axis, l);
    const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(l) * nf;
    for (int f = 1; f + 1 < nf; ++f) {
      const auto right = line.start + f * line.stride;
      p[base + f] = scale * (field.values[right] - field.values[right - line.stride]);
    }
  }
  return p;
}

void enforce_noflux(FaceFluxSet& set, const Grid& grid) {
  for (int axis = 0; axis < grid.dim(); ++axis) {
    if (set.hyperbolic[axis].size() > 0) zero_boundary_faces(grid, axis, set.hyperbolic[axis]);
    if (set.diffusive[axis].size() > 0) zero_boundary_faces(grid, axis, set.diffusive[axis]);
  }
}

void accumulate_face_difference(const Grid& grid, int axis, const Eigen::VectorXd& faces, double scale,
                                Eigen::VectorXd& out) {
  const int nf = grid.cells(axis) + 1;
  const double factor = scale / grid.dx(axis);
  for (int l = 0; l < grid.line_count(axis); ++l) {
    const Line line = grid.line(axis, l);
    const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(l) * nf;
    for (int i = 0; i < line.length; ++i) {
      out[line.start + i * line.stride] += factor * (faces[base + i + 1] - faces[base + i]);
    }
  }
}

Eigen::VectorXd semi_discrete_hyperbolic_rhs(std::span<const FluxFunction> fluxes, const CellField& field,
                                             double a_bound, const LimiterConfig& config) {
  const Grid& grid = field.grid;
  if (static_cast<int>(fluxes.size()) != grid.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "need one flux function per axis");
  }
  const FaceLimits limits = face_limits(field, config);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(grid.size());
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const Eigen::VectorXd h = hyperbolic_face_fluxes(grid, limits, axis, fluxes[axis], a_bound);
    accumulate_face_difference(grid, axis, h, -1.0, rhs);
  }
  return rhs;
}

Eigen::VectorXd diffusion_rhs(const CellField& field, double nu) {
  const Grid& grid = field.grid;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(grid.size());
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const Eigen::VectorXd p = diffusion_face_fluxes(field, axis, nu);
    accumulate_face_difference(grid, axis, p, 1.0, rhs);
  }
  return rhs;
}

}  // namespace freeze
