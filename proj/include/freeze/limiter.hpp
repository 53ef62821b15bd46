#pragma once

#include <algorithm>
#include <array>
#include <initializer_list>
#include <span>

#include <Eigen/Core>

#include "freeze/mesh.hpp"

namespace freeze {

struct LimiterConfig {
  double theta = 1.5;
};

/// Throws invalid-argument unless 1 <= theta <= 2.
void validate(const LimiterConfig& config);

/// max_i(min(a_i, 0)) + min_i(max(a_i, 0)). Needs at least two finite
/// arguments.
double minmod(std::span<const double> args);
double minmod(std::initializer_list<double> args);

/// Undivided three-argument minmod slope used by the reconstruction:
/// mm(theta (u - um), (up - um) / 2, theta (up - u)).
inline double limited_slope(double um, double u, double up, double theta) {
  const double a = theta * (u - um);
  const double b = 0.5 * (up - um);
  const double c = theta * (up - u);
  const double lo = std::max({std::min(a, 0.0), std::min(b, 0.0), std::min(c, 0.0)});
  const double hi = std::min({std::max(a, 0.0), std::max(b, 0.0), std::max(c, 0.0)});
  return lo + hi;
}

/// One-sided limits of the piecewise linear reconstruction at every face.
/// `minus[axis][face]` is the limit from below, `plus[axis][face]` from
/// above; faces are laid out as described by Grid::face_count.
struct FaceLimits {
  std::array<Eigen::VectorXd, 2> minus;
  std::array<Eigen::VectorXd, 2> plus;
};

/// Undivided limited slopes of every cell along `axis`; the first and last
/// cell of each line get zero slope.
Eigen::VectorXd limited_slopes(const CellField& field, int axis, const LimiterConfig& config);

FaceLimits face_limits(const CellField& field, const LimiterConfig& config);

}  // namespace freeze
