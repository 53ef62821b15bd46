#include "freeze/limiter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freeze/error.hpp"

namespace freeze {

void validate(const LimiterConfig& config) {
  if (!(config.theta >= 1.0 && config.theta <= 2.0)) {
    throw Error(ErrorCode::invalid_argument, "limiter theta must lie in [1, 2]");
  }
}

double minmod(std::span<const double> args) {
  if (args.size() < 2) throw Error(ErrorCode::invalid_argument, "minmod needs at least two arguments");
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (double a : args) {
    if (!std::isfinite(a)) throw Error(ErrorCode::non_finite, "minmod argument");
    lo = std::max(lo, std::min(a, 0.0));
    hi = std::min(hi, std::max(a, 0.0));
  }
  return lo + hi;
}

double minmod(std::initializer_list<double> args) { return minmod(std::span<const double>(args.begin(), args.size())); }

Eigen::VectorXd limited_slopes(const CellField& field, int axis, const LimiterConfig& config) {
  const Grid& g = field.grid;
  const auto& u = field.values;
  Eigen::VectorXd slope = Eigen::VectorXd::Zero(g.size());
  for (int l = 0; l < g.line_count(axis); ++l) {
    const Line line = g.line(axis, l);
    for (int i = 1; i + 1 < line.length; ++i) {
      const auto k = line.start + i * line.stride;
      slope[k] = limited_slope(u[k - line.stride], u[k], u[k + line.stride], config.theta);
    }
  }
  return slope;
}

FaceLimits face_limits(const CellField& field, const LimiterConfig& config) {
  validate(config);
  const Grid& g = field.grid;
  if (g.cells(0) < 4 || (g.dim() == 2 && g.cells(1) < 4)) {
    throw Error(ErrorCode::too_few_cells, "face limits need at least 4 cells per axis");
  }
  const auto& u = field.values;
  FaceLimits out;
  for (int axis = 0; axis < g.dim(); ++axis) {
    const Eigen::VectorXd slope = limited_slopes(field, axis, config);
    const int nf = g.cells(axis) + 1;
    auto& minus = out.minus[axis];
    auto& plus = out.plus[axis];
    minus.resize(g.face_count(axis));
    plus.resize(g.face_count(axis));
    for (int l = 0; l < g.line_count(axis); ++l) {
      const Line line = g.line(axis, l);
      const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(l) * nf;
      // boundary faces see only one cell; their fluxes are zeroed anyway
      const auto first = line.start;
      const auto last = line.start + (line.length - 1) * line.stride;
      minus[base] = plus[base] = u[first];
      minus[base + nf - 1] = plus[base + nf - 1] = u[last];
      for (int f = 1; f < line.length; ++f) {
        const auto left = line.start + (f - 1) * line.stride;
        const auto right = left + line.stride;
        minus[base + f] = u[left] + 0.5 * slope[left];
        plus[base + f] = u[right] - 0.5 * slope[right];
      }
    }
  }
  return out;
}

}  // namespace freeze
