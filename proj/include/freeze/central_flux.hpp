#pragma once

#include <array>
#include <functional>
#include <span>

#include <Eigen/Core>

#include "freeze/limiter.hpp"
#include "freeze/mesh.hpp"

namespace freeze {

/// A space-dependent scalar flux f(xi, u). An empty `eval` stands for the
/// identically zero flux. Only fluxes flagged `carries_dissipation` receive
/// the central-scheme regularisation a (u+ - u-).
struct FluxFunction {
  std::function<double(const Point&, double)> eval;
  bool carries_dissipation = false;

  bool is_zero() const { return !static_cast<bool>(eval); }
};

/// Numerical flux through one face:
/// [f(xi, u+) + f(xi, u-)] / 2 - a (u+ - u-)   (dissipation only if flagged).
double face_flux(const FluxFunction& flux, const Point& xi_face, double u_minus, double u_plus, double a_bound);

/// Face values per axis, laid out as Grid::face_count describes.
using FaceArray = std::array<Eigen::VectorXd, 2>;

struct FaceFluxSet {
  FaceArray hyperbolic;
  FaceArray diffusive;
};

/// Coordinates of face f on line l of `axis`.
Point face_point(const Grid& grid, int axis, int l, int f);

/// Numerical hyperbolic flux on every face of `axis`; boundary faces are 0.
Eigen::VectorXd hyperbolic_face_fluxes(const Grid& grid, const FaceLimits& limits, int axis,
                                       const FluxFunction& flux, double a_bound);

/// nu (v_{k+e_j} - v_k) / dx_j on interior faces, 0 on boundary faces.
Eigen::VectorXd diffusion_face_fluxes(const CellField& field, int axis, double nu);

/// Sets every flux on a boundary face to exactly zero.
void enforce_noflux(FaceFluxSet& set, const Grid& grid);
void zero_boundary_faces(const Grid& grid, int axis, Eigen::VectorXd& faces);

/// out_k += scale * (F_{k+1/2} - F_{k-1/2}) / dx_axis.
void accumulate_face_difference(const Grid& grid, int axis, const Eigen::VectorXd& faces, double scale,
                                Eigen::VectorXd& out);

/// du_k/dtau = -sum_j (H_{k+1/2} - H_{k-1/2}) / dx_j with `fluxes[j]` the
/// flux in direction j (one entry per axis).
Eigen::VectorXd semi_discrete_hyperbolic_rhs(std::span<const FluxFunction> fluxes, const CellField& field,
                                             double a_bound, const LimiterConfig& config);

/// sum_j (P_{k+1/2} - P_{k-1/2}) / dx_j for the linear diffusive flux.
Eigen::VectorXd diffusion_rhs(const CellField& field, double nu);

}  // namespace freeze
