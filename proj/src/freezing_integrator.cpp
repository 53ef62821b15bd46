#include "freeze/freezing_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freeze/error.hpp"

namespace freeze {

FreezingDae::FreezingDae(FreezingProblem problem)
    : problem_(std::move(problem)), p_(diffusion_operator(problem_.grid, problem_.nu)) {
  validate(problem_);
}

void FreezingDae::set_wave_speed(double a_bound) {
  if (!(a_bound >= 0.0) || !std::isfinite(a_bound)) {
    throw Error(ErrorCode::invalid_argument, "wave speed bound must be finite and non-negative");
  }
  a_bound_ = a_bound;
}

DaeIndex FreezingDae::index() const {
  return problem_.phase == PhaseCondition::fixed ? DaeIndex::two : DaeIndex::one;
}

Linearization FreezingDae::linearize(const Eigen::VectorXd& v) const {
  if (!v.allFinite()) throw Error(ErrorCode::non_finite, "state passed to the freezing operator");
  const bool same_v = cache_ && cache_->v.size() == v.size() && cache_->v == v;
  if (!same_v) {
    const CellField field = make_field(problem_.grid, v);
    Cache c;
    c.v = v;
    c.limits = face_limits(field, problem_.limiter);
    c.h1 = assemble_h1(problem_, field, c.limits);
    cache_ = std::move(c);
  }
  if (cache_->a_bound != a_bound_) {
    cache_->h0 = assemble_h0(problem_, problem_.grid, cache_->limits, a_bound_);
    cache_->a_bound = a_bound_;
  }
  return {cache_->h0, cache_->h1};
}

MultiplierSystem FreezingDae::multiplier_system(const Eigen::VectorXd& v, const Linearization& lin,
                                                const Eigen::VectorXd& pv) const {
  if (problem_.phase == PhaseCondition::none) {
    const auto m = multiplier_size();
    return {Eigen::MatrixXd::Identity(m, m), Eigen::VectorXd::Zero(m)};
  }
  // uniform cell volumes: the common factor drops out of the normal equations
  const double w = problem_.grid.cell_volume();
  (void)v;
  return {w * (lin.h1.transpose() * lin.h1), w * (lin.h1.transpose() * (pv - lin.h0))};
}

Eigen::VectorXd FreezingDae::weights() const {
  return Eigen::VectorXd::Constant(state_size(), problem_.grid.cell_volume());
}

const Eigen::MatrixXd& FreezingDae::constraint_matrix() const {
  if (!problem_.reference) throw Error(ErrorCode::missing_reference, "fixed phase constraint");
  return problem_.reference->psi();
}

const Eigen::VectorXd& FreezingDae::constraint_target() const {
  if (!problem_.reference) throw Error(ErrorCode::missing_reference, "fixed phase constraint");
  return problem_.reference->target();
}

Eigen::VectorXd FreezingDae::group_rate(const Eigen::VectorXd& g, const Eigen::VectorXd& mu) const {
  const int d = problem_.dim();
  Eigen::VectorXd r(d + 1);
  r[0] = g[0] * mu[0];
  const double scale = std::pow(g[0], problem_.p - 1.0);
  for (int j = 0; j < d; ++j) r[1 + j] = scale * mu[1 + j];
  return r;
}

double FreezingDae::time_rate(const Eigen::VectorXd& g) const { return std::pow(g[0], 2.0 * problem_.p - 2.0); }

bool FreezingDae::group_admissible(const Eigen::VectorXd& g) const { return g.allFinite() && g[0] > 0.0; }

namespace {

StepRecord make_record(const FreezingDae& dae, const FreezingState& state, const Linearization& lin,
                       const Eigen::VectorXd& pv, long step) {
  const FreezingProblem& problem = dae.problem();
  StepRecord r;
  r.step = step;
  r.tau = state.tau;
  r.dtau = state.dtau;
  r.t = state.t;
  r.alpha = state.alpha;
  r.b = state.b;
  r.mu = state.mu;
  r.mass = total_mass(state.v);
  r.wave_speed = dae.wave_speed();

  const Eigen::VectorXd h1mu = lin.h1 * state.mu;
  const Eigen::VectorXd f = pv - h1mu - lin.h0;
  r.rhs_norm = f.size() > 0 ? f.lpNorm<Eigen::Infinity>() : 0.0;

  const double w = problem.grid.cell_volume();
  const double sw = std::sqrt(w);
  switch (problem.phase) {
    case PhaseCondition::orthogonal: {
      const double num = (w * (lin.h1.transpose() * f)).lpNorm<Eigen::Infinity>();
      const double den = sw * lin.h1.norm() * sw * (lin.h0.norm() + h1mu.norm() + pv.norm());
      r.phase_residual = num / (den + 1e-300);
      break;
    }
    case PhaseCondition::fixed: {
      const auto& ref = *problem.reference;
      const double num = (ref.psi().transpose() * state.v.values - ref.target()).lpNorm<Eigen::Infinity>();
      r.phase_residual = num / (ref.psi().norm() * ref.field().values.norm() + 1e-300);
      break;
    }
    case PhaseCondition::none:
      r.phase_residual = 0.0;
      break;
  }
  return r;
}

}  // namespace

IntegrationResult integrate(const FreezingProblem& problem, const CellField& initial, double tau_end,
                            const IntegrateOptions& options, const StepCallback& on_step) {
  if (!(tau_end >= 0.0) || !std::isfinite(tau_end)) {
    throw Error(ErrorCode::invalid_argument, "final time must be finite and >= 0");
  }
  if (initial.grid.size() != problem.grid.size()) {
    throw Error(ErrorCode::dimension_mismatch, "initial field lives on a different grid");
  }
  FreezingDae dae(problem);
  ImexStepper stepper(dae, heun_crank_nicolson(), options.solver);
  const int d = problem.dim();

  FreezingState state;
  state.v = initial;
  state.b = Eigen::VectorXd::Zero(d);
  state.mu = Eigen::VectorXd::Zero(d + 1);

  // the bound depends on mu and H0 on the bound: one refinement pass
  dae.set_wave_speed(wave_speed_bound(problem, state.v, state.mu));
  state.mu = stepper.consistent_multipliers(state.v.values);
  dae.set_wave_speed(wave_speed_bound(problem, state.v, state.mu));
  state.mu = stepper.consistent_multipliers(state.v.values);

  IntegrationResult result;
  {
    const Linearization lin = dae.linearize(state.v.values);
    result.last = make_record(dae, state, lin, dae.implicit_operator() * state.v.values, 0);
    if (on_step) on_step(result.last, state);
  }

  DaeState ds;
  ds.v = state.v.values;
  ds.mu = state.mu;
  ds.g = Eigen::VectorXd::Zero(d + 1);
  ds.g[0] = 1.0;

  long step = 0;
  int quiet = 0;
  while (state.tau < tau_end) {
    if (step >= options.max_steps) {
      std::ostringstream msg;
      msg << "step limit " << options.max_steps << " reached at tau = " << state.tau;
      throw Error(ErrorCode::step_size_underflow, msg.str());
    }
    const double a = wave_speed_bound(problem, state.v, state.mu);
    dae.set_wave_speed(a);
    const double target = cfl_target(problem.cfl, problem.grid.min_dx(), a);
    const double dtau = adapt_timestep(state.dtau, target);
    if (dtau < options.min_step) {
      std::ostringstream msg;
      msg << "step size " << dtau << " below floor " << options.min_step << " at step " << step
          << ", tau = " << state.tau << ", wave speed " << a << ", alpha " << state.alpha;
      throw Error(ErrorCode::step_size_underflow, msg.str());
    }
    const bool last = state.tau + dtau >= tau_end;
    const double h = last ? tau_end - state.tau : dtau;

    StepResult sr;
    try {
      sr = stepper.step(ds, h);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "step " << step + 1 << " at tau = " << state.tau << ": " << e.what();
      throw Error(e.code(), msg.str());
    }
    ++step;
    state.v.values = ds.v;
    state.mu = ds.mu;
    state.alpha = ds.g[0];
    state.b = ds.g.tail(d);
    state.t = ds.t;
    state.tau = last ? tau_end : ds.tau;
    ds.tau = state.tau;
    state.dtau = dtau;

    result.last = make_record(dae, state, sr.final_linearization, sr.final_pv, step);
    result.last.dtau = h;
    result.last.min_rcond = sr.min_rcond;
    if (on_step) on_step(result.last, state);

    const double vmax = state.v.values.lpNorm<Eigen::Infinity>();
    if (result.last.rhs_norm <= options.stationary_tolerance * (1.0 + vmax)) {
      ++quiet;
    } else {
      quiet = 0;
    }
    if (options.stop_on_stationary && quiet >= options.stationary_steps) {
      result.stationary = true;
      break;
    }
    if (options.stop_after > 0 && step >= options.stop_after) break;
  }
  result.state = std::move(state);
  result.steps = step;
  return result;
}

namespace {

// Linear interpolation of cell-centre data along one axis; returns the two
// neighbour indices and the weight of the upper one.
bool bracket(const Grid& grid, int axis, double x, int& lo, double& w) {
  const auto& b = grid.bounds(axis);
  if (x < b.lower || x > b.upper) return false;
  const double s = (x - b.lower) / grid.dx(axis) - 0.5;
  const int n = grid.cells(axis);
  if (s <= 0.0) {
    lo = 0;
    w = 0.0;
  } else if (s >= n - 1) {
    lo = n - 2;
    w = 1.0;
  } else {
    lo = static_cast<int>(std::floor(s));
    w = s - lo;
  }
  return true;
}

}  // namespace

CellField reconstruct_solution(const FreezingProblem& problem, const FreezingState& state, const Grid& target) {
  const Grid& grid = problem.grid;
  if (target.dim() != grid.dim()) throw Error(ErrorCode::dimension_mismatch, "target grid dimension");
  const double inv_alpha = 1.0 / state.alpha;
  const double stretch = std::pow(state.alpha, problem.p - 1.0);
  const auto& v = state.v.values;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(target.size());
  for (std::ptrdiff_t k = 0; k < target.size(); ++k) {
    const Point x = target.center_point(k);
    int i0 = 0, i1 = 0;
    double w0 = 0.0, w1 = 0.0;
    if (!bracket(grid, 0, (x[0] - state.b[0]) / stretch, i0, w0)) continue;
    if (grid.dim() == 1) {
      out[k] = inv_alpha * ((1.0 - w0) * v[i0] + w0 * v[i0 + 1]);
      continue;
    }
    if (!bracket(grid, 1, (x[1] - state.b[1]) / stretch, i1, w1)) continue;
    const double lower = (1.0 - w0) * v[grid.flatten(i0, i1)] + w0 * v[grid.flatten(i0 + 1, i1)];
    const double upper = (1.0 - w0) * v[grid.flatten(i0, i1 + 1)] + w0 * v[grid.flatten(i0 + 1, i1 + 1)];
    out[k] = inv_alpha * ((1.0 - w1) * lower + w1 * upper);
  }
  return make_field(target, std::move(out));
}

}  // namespace freeze
