#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "freeze/dae_verification.hpp"
#include "freeze/experiments/output.hpp"
#include "freeze/experiments/run_config.hpp"
#include "freeze/freezing_integrator.hpp"

namespace freeze {

/// Integration of one configuration; the fixed phase uses the sampled
/// initial data as reference.
IntegrationResult run_freezing(const RunConfig& config, const StepCallback& on_step = {});

struct RunSummary {
  IntegrationResult result;
  std::vector<SnapshotEntry> snapshots;
  double initial_mass = 0.0;
};

/// Runs `config` and writes series.csv, manifest.csv and snapshot_NNNN.csv
/// into config.output. Snapshots are taken at the first accepted step at or
/// after each of `snapshots` evenly spaced tau instants (0 and tau_end
/// included) and at the final state.
RunSummary run_experiment(const RunConfig& config);

/// Mean of the fine cells nested in each coarse cell. Throws unless every
/// coarse cell holds a whole number of fine cells.
Eigen::VectorXd coarsen_average(const CellField& fine, const Grid& coarse);

struct ConvergenceRow {
  double dx = 0.0;
  double err_v = 0.0;      ///< integral of |v - v_ref|^2 or its root, per config
  double err_v_l2 = 0.0;   ///< always the root
  double err_mu = 0.0;     ///< max-norm
  double err_t = 0.0;
  double err_group = 0.0;  ///< max(|alpha - alpha_ref|, |b - b_ref|)
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double reference_dx = 0.0;
  double slope_v = 0.0;
  double slope_mu = 0.0;
  double slope_t = 0.0;
  double slope_group = 0.0;
  /// Non-empty if a grid run failed; rows are then empty and slopes NaN.
  std::string failure;
};

/// Runs every dx of config.grids and a reference at min(grids) /
/// config.reference_refinement to config.tau_end and fits log-log slopes.
/// The reference is skipped once a grid run fails (no rows are reported
/// then); throws if the reference run itself fails.
ConvergenceStudy convergence_study(const RunConfig& config);
void write_convergence_table(std::ostream& out, const ConvergenceStudy& study);

/// Number of sign changes of successive cell differences along every grid
/// line, ignoring differences below 1e-8 max|v|.
int oscillation_indicator(const CellField& field);

struct CflReport {
  std::vector<double> tau;
  std::vector<int> oscillations;
  std::vector<double> max_norm;           ///< of v
  std::vector<double> physical_max_norm;  ///< of u = v / alpha
  int initial_oscillations = 0;
  double initial_max_norm = 0.0;
  bool aborted = false;
  std::string abort_reason;
};

/// Runs config (stationarity stop off) and records the oscillation
/// indicator and max-norm after every step. Integrator failures are
/// reported, not thrown.
CflReport cfl_violation_demo(const RunConfig& config);

struct RoundTripStudy {
  std::vector<double> dx;
  std::vector<double> error;  ///< L2 distance of reconstructed and direct u
  double slope = 0.0;
};

/// For each dx: freezing run to config.tau_end, reconstruction of u at the
/// reached time t, and a direct run (mu = 0) to that t on the same grid.
RoundTripStudy round_trip_study(const RunConfig& config, const std::vector<double>& dx_list);

struct DaeOrderReport {
  OrderStudy index1;
  OrderStudy index2;
  OrderStudy linear;
};

/// The three manufactured order studies over h in {0.1, 0.05, 0.025, 0.0125}
/// on [0, 1].
DaeOrderReport dae_order_studies();

/// Cell count for spacing dx on [lower, upper]; throws unless it divides.
int cells_for_spacing(const Interval& bounds, double dx);

}  // namespace freeze
