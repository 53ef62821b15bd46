#include "freeze/experiments/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "freeze/error.hpp"

namespace freeze {

IntegrationResult run_freezing(const RunConfig& config, const StepCallback& on_step) {
  FreezingProblem problem = make_problem(config);
  const CellField u0 = initial_field(config, problem.grid);
  if (problem.phase == PhaseCondition::fixed) set_reference(problem, u0);
  IntegrateOptions options;
  options.stop_on_stationary = config.stop_on_stationary;
  return integrate(problem, u0, config.tau_end, options, on_step);
}

RunSummary run_experiment(const RunConfig& config) {
  namespace fs = std::filesystem;
  const fs::path dir(config.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());

  std::ofstream series = open_output(dir / "series.csv");
  write_series_header(series, config.dim);

  RunSummary summary;
  const int n = config.snapshots;
  int next = 0;
  auto target = [&](int i) { return n == 1 ? 0.0 : config.tau_end * i / (n - 1); };
  auto snapshot = [&](const StepRecord& r, const FreezingState& s) {
    std::ostringstream name;
    name << "snapshot_" << std::setw(4) << std::setfill('0') << summary.snapshots.size() << ".csv";
    std::ofstream out = open_output(dir / name.str());
    write_snapshot(out, s.v);
    summary.snapshots.push_back({static_cast<int>(summary.snapshots.size()), r.step, r.tau, r.t, name.str()});
  };

  long last_snapshot_step = -1;
  summary.result = run_freezing(config, [&](const StepRecord& r, const FreezingState& s) {
    if (r.step == 0) summary.initial_mass = r.mass;
    write_series_row(series, r);
    bool due = false;
    while (next < n && r.tau >= target(next)) {
      due = true;
      ++next;
    }
    if (due) {
      snapshot(r, s);
      last_snapshot_step = r.step;
    }
  });
  if (last_snapshot_step != summary.result.steps) snapshot(summary.result.last, summary.result.state);

  std::ofstream manifest = open_output(dir / "manifest.csv");
  write_manifest(manifest, summary.snapshots);
  return summary;
}

int cells_for_spacing(const Interval& bounds, double dx) {
  const double exact = (bounds.upper - bounds.lower) / dx;
  const long cells = std::lround(exact);
  if (cells < 6 || std::abs(exact - cells) > 1e-9 * exact) {
    std::ostringstream msg;
    msg << "spacing " << dx << " does not divide [" << bounds.lower << ", " << bounds.upper << "]";
    throw Error(ErrorCode::config, msg.str());
  }
  return static_cast<int>(cells);
}

Eigen::VectorXd coarsen_average(const CellField& fine, const Grid& coarse) {
  const Grid& g = fine.grid;
  if (g.dim() != coarse.dim()) throw Error(ErrorCode::dimension_mismatch, "grid dimensions differ");
  std::array<int, 2> ratio{1, 1};
  for (int j = 0; j < g.dim(); ++j) {
    if (g.cells(j) % coarse.cells(j) != 0) {
      throw Error(ErrorCode::dimension_mismatch, "fine cells are not nested in coarse cells");
    }
    ratio[j] = g.cells(j) / coarse.cells(j);
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(coarse.size());
  for (std::ptrdiff_t k = 0; k < g.size(); ++k) {
    const auto idx = g.unflatten(k);
    out[coarse.flatten(idx[0] / ratio[0], idx[1] / ratio[1])] += fine.values[k];
  }
  return out / static_cast<double>(ratio[0] * ratio[1]);
}

namespace {

RunConfig with_spacing(RunConfig config, double dx) {
  for (int j = 0; j < config.dim; ++j) config.cells[j] = cells_for_spacing(config.domain[j], dx);
  config.stop_on_stationary = false;
  return config;
}

}  // namespace

ConvergenceStudy convergence_study(const RunConfig& config) {
  if (config.grids.size() < 2) throw Error(ErrorCode::config, "convergence study needs at least two grids");
  for (std::size_t i = 1; i < config.grids.size(); ++i) {
    if (!(config.grids[i] < config.grids[i - 1])) throw Error(ErrorCode::config, "grids must refine strictly");
  }
  ConvergenceStudy study;
  study.reference_dx = config.grids.back() / config.reference_refinement;
  // grid runs first: a failing grid makes the costly reference run pointless
  std::vector<IntegrationResult> runs;
  for (double dx : config.grids) {
    try {
      runs.push_back(run_freezing(with_spacing(config, dx)));
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "dx = " << dx << ": " << e.what();
      study.failure = msg.str();
      break;
    }
  }
  IntegrationResult ref;
  if (study.failure.empty()) {
    try {
      ref = run_freezing(with_spacing(config, study.reference_dx));
    } catch (const Error& e) {
      throw Error(e.code(), std::string("reference run: ") + e.what());
    }
  }

  std::vector<double> hs, ev, em, et, eg;
  for (std::size_t i = 0; study.failure.empty() && i < runs.size(); ++i) {
    const IntegrationResult& r = runs[i];
    const double dx = config.grids[i];
    const Grid& grid = r.state.v.grid;
    const Eigen::VectorXd diff = r.state.v.values - coarsen_average(ref.state.v, grid);
    ConvergenceRow row;
    row.dx = dx;
    const double sq = grid.cell_volume() * diff.squaredNorm();
    row.err_v_l2 = std::sqrt(sq);
    row.err_v = config.squared_v_error ? sq : row.err_v_l2;
    row.err_mu = (r.state.mu - ref.state.mu).lpNorm<Eigen::Infinity>();
    row.err_t = std::abs(r.state.t - ref.state.t);
    row.err_group = std::max(std::abs(r.state.alpha - ref.state.alpha),
                             (r.state.b - ref.state.b).lpNorm<Eigen::Infinity>());
    study.rows.push_back(row);
    hs.push_back(dx);
    ev.push_back(row.err_v);
    em.push_back(row.err_mu);
    et.push_back(row.err_t);
    eg.push_back(row.err_group);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!study.failure.empty() || hs.size() < 2) {
    study.slope_v = study.slope_mu = study.slope_t = study.slope_group = nan;
    return study;
  }
  study.slope_v = fitted_slope(hs, ev);
  study.slope_mu = fitted_slope(hs, em);
  study.slope_t = fitted_slope(hs, et);
  study.slope_group = fitted_slope(hs, eg);
  return study;
}

void write_convergence_table(std::ostream& out, const ConvergenceStudy& study) {
  out << "dx,err_v,err_v_l2,err_mu,err_t,err_alpha_b\n";
  for (const auto& r : study.rows) {
    out << format_double(r.dx) << ',' << format_double(r.err_v) << ',' << format_double(r.err_v_l2) << ','
        << format_double(r.err_mu) << ',' << format_double(r.err_t) << ',' << format_double(r.err_group) << '\n';
  }
}

int oscillation_indicator(const CellField& field) {
  const Grid& g = field.grid;
  const auto& v = field.values;
  if (v.size() == 0) return 0;
  const double floor = 1e-8 * v.lpNorm<Eigen::Infinity>();
  if (floor == 0.0) return 0;
  int count = 0;
  for (int axis = 0; axis < g.dim(); ++axis) {
    for (int l = 0; l < g.line_count(axis); ++l) {
      const Line line = g.line(axis, l);
      int previous = 0;
      for (int i = 1; i < line.length; ++i) {
        const auto k = line.start + i * line.stride;
        const double d = v[k] - v[k - line.stride];
        if (std::abs(d) < floor) continue;
        const int sign = d > 0.0 ? 1 : -1;
        if (previous != 0 && sign != previous) ++count;
        previous = sign;
      }
    }
  }
  return count;
}

CflReport cfl_violation_demo(const RunConfig& config) {
  RunConfig c = config;
  c.stop_on_stationary = false;
  CflReport report;
  try {
    run_freezing(c, [&](const StepRecord& r, const FreezingState& s) {
      const int osc = oscillation_indicator(s.v);
      const double vmax = s.v.values.lpNorm<Eigen::Infinity>();
      if (r.step == 0) {
        report.initial_oscillations = osc;
        report.initial_max_norm = vmax;
      }
      report.tau.push_back(r.tau);
      report.oscillations.push_back(osc);
      report.max_norm.push_back(vmax);
      report.physical_max_norm.push_back(vmax / s.alpha);
    });
  } catch (const Error& e) {
    report.aborted = true;
    report.abort_reason = e.what();
  }
  return report;
}

RoundTripStudy round_trip_study(const RunConfig& config, const std::vector<double>& dx_list) {
  if (config.dim != 1) throw Error(ErrorCode::config, "round-trip study is one-dimensional");
  RoundTripStudy study;
  for (double dx : dx_list) {
    RunConfig frozen = with_spacing(config, dx);
    frozen.phase = PhaseCondition::orthogonal;
    FreezingProblem problem = make_problem(frozen);
    const IntegrationResult fr = run_freezing(frozen);

    RunConfig direct = frozen;
    direct.phase = PhaseCondition::none;
    direct.tau_end = fr.state.t;
    const IntegrationResult dr = run_freezing(direct);

    const CellField u = reconstruct_solution(problem, fr.state, dr.state.v.grid);
    const double err = std::sqrt(dr.state.v.grid.cell_volume() * (u.values - dr.state.v.values).squaredNorm());
    study.dx.push_back(dx);
    study.error.push_back(err);
  }
  study.slope = fitted_slope(study.dx, study.error);
  return study;
}

DaeOrderReport dae_order_studies() {
  const std::vector<double> hs{0.1, 0.05, 0.025, 0.0125};
  DaeOrderReport report;
  const Index1Example e1;
  report.index1 = order_study(e1, e1.initial_state(), 1.0, hs);
  const Index2Example e2;
  report.index2 = order_study(e2, e2.initial_state(), 1.0, hs);
  const LinearDecayExample e3(-1.0);
  DaeState exact = e3.initial_state();
  exact.v[0] = std::exp(e3.lambda());
  exact.tau = 1.0;
  exact.t = 1.0;
  report.linear = order_study(e3, e3.initial_state(), 1.0, hs, exact);
  return report;
}

}  // namespace freeze
