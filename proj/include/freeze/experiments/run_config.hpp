#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "freeze/freezing_rhs.hpp"
#include "freeze/mesh.hpp"

namespace freeze {

enum class InitialCondition { bump_1d, bump_2d, expression };

/// Everything a run needs. Parsed from key=value text; see README for the
/// key list. `cells` counts all cells per axis, boundary cells included,
/// so dx = (upper - lower) / cells.
struct RunConfig {
  int dim = 1;
  double nu = 0.4;
  std::optional<double> p;                  ///< default (d + 1) / d
  std::vector<double> direction;            ///< default all ones
  std::array<Interval, 2> domain{{{-5.0, 5.0}, {-5.0, 5.0}}};
  std::array<int, 2> cells{100, 100};
  PhaseCondition phase = PhaseCondition::orthogonal;
  InitialCondition initial = InitialCondition::bump_1d;
  std::string expression;
  double tau_end = 10.0;
  std::optional<double> cfl;                ///< default 1/3 in 1D, 0.2 in 2D
  double theta = 1.5;
  std::string output = "out";
  int snapshots = 50;
  bool stop_on_stationary = true;
  std::vector<double> grids;                ///< convergence study: dx list
  int reference_refinement = 4;             ///< reference dx = min(grids) / this
  bool squared_v_error = true;              ///< v error as integral of |dv|^2

  double resolved_p() const { return p ? *p : (dim + 1.0) / dim; }
  double resolved_cfl() const { return cfl ? *cfl : (dim == 1 ? 1.0 / 3.0 : 0.2); }
};

/// Throws config naming the line for unknown keys or malformed values.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Applies one key=value pair (also used for command-line overrides).
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Checks cross-field consistency (dimension, sizes, ranges).
void validate(const RunConfig& config);

/// Grid, limiter and model parameters; the fixed-phase reference is set
/// by the caller from the initial field.
FreezingProblem make_problem(const RunConfig& config);
CellField initial_field(const RunConfig& config, const Grid& grid);

/// The 1D profile sin(2x) on [-pi/2, 0] and sin(x) on [0, pi], 0 elsewhere.
double bump_profile_1d(double x);
/// cos(y) times the 1D profile for |y| < pi/2, 0 elsewhere.
double bump_profile_2d(double x, double y);

}  // namespace freeze
