#include "freeze/imex_dae.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freeze/error.hpp"

namespace freeze {

ButcherPair heun_crank_nicolson() {
  ButcherPair pair;
  pair.c = Eigen::Vector3d(0.0, 1.0, 1.0);
  pair.a = Eigen::Matrix3d::Zero();
  pair.a(1, 0) = 1.0;
  pair.a(2, 0) = 0.5;
  pair.a(2, 1) = 0.5;
  pair.a_hat = Eigen::Matrix3d::Zero();
  pair.a_hat(1, 0) = 0.5;
  pair.a_hat(1, 1) = 0.5;
  pair.a_hat(2, 0) = 0.5;
  pair.a_hat(2, 2) = 0.5;
  return pair;
}

void validate(const ButcherPair& pair) {
  const auto n = pair.c.size();
  if (n < 2 || pair.a.rows() != n || pair.a.cols() != n || pair.a_hat.rows() != n || pair.a_hat.cols() != n) {
    throw Error(ErrorCode::dimension_mismatch, "tableau sizes must agree and allow at least one stage");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j >= i && pair.a(i, j) != 0.0) {
        throw Error(ErrorCode::invalid_argument, "explicit tableau must be strictly lower triangular");
      }
      if (j > i && pair.a_hat(i, j) != 0.0) {
        throw Error(ErrorCode::invalid_argument, "implicit tableau must be lower triangular");
      }
    }
  }
  if (pair.a_hat(0, 0) != 0.0) throw Error(ErrorCode::invalid_argument, "first internal value must be explicit");
}

MultiplierSystem SemiExplicitDae::multiplier_system(const Eigen::VectorXd&, const Linearization& lin,
                                                    const Eigen::VectorXd& pv) const {
  const Eigen::VectorXd w = weights();
  const Eigen::MatrixXd wh1 = w.asDiagonal() * lin.h1;
  return {wh1.transpose() * lin.h1, wh1.transpose() * (pv - lin.h0)};
}

Eigen::VectorXd SemiExplicitDae::weights() const { return Eigen::VectorXd::Ones(state_size()); }

const Eigen::MatrixXd& SemiExplicitDae::constraint_matrix() const {
  throw Error(ErrorCode::invalid_argument, "model has no index-2 constraint");
}

const Eigen::VectorXd& SemiExplicitDae::constraint_target() const {
  throw Error(ErrorCode::invalid_argument, "model has no index-2 constraint");
}

Eigen::VectorXd SemiExplicitDae::group_rate(const Eigen::VectorXd&, const Eigen::VectorXd&) const {
  return Eigen::VectorXd::Zero(group_size());
}

double SemiExplicitDae::time_rate(const Eigen::VectorXd&) const { return 1.0; }

bool SemiExplicitDae::group_admissible(const Eigen::VectorXd& g) const { return g.allFinite(); }

StageSolution stage_solve_index1(const ImplicitFactor& factor, const Eigen::VectorXd& r1, double coupling,
                                 const Eigen::MatrixXd& h1, const MultiplierSystem& system) {
  const SmallSolve mu = solve_small(system.lhs, system.rhs);
  Eigen::VectorXd rhs = r1;
  if (coupling != 0.0) rhs.noalias() -= coupling * (h1 * mu.x);
  return {factor.solve(rhs), mu.x, mu.rcond};
}

StageSolution stage_solve_index2(const ImplicitFactor& factor, const Eigen::VectorXd& r1, double coupling,
                                 const Eigen::MatrixXd& h1, const Eigen::MatrixXd& psi,
                                 const Eigen::VectorXd& target) {
  const Eigen::MatrixXd a_star = factor.solve(Eigen::MatrixXd(coupling * h1));
  const Eigen::VectorXd v_star = factor.solve(r1);
  const SmallSolve mu = solve_small(psi.transpose() * a_star, psi.transpose() * v_star - target);
  Eigen::VectorXd v = v_star;
  v.noalias() -= a_star * mu.x;
  return {v, mu.x, mu.rcond};
}

GroupUpdate group_time_step(const SemiExplicitDae& dae, const Eigen::VectorXd& g0, double t0,
                            std::span<const Eigen::VectorXd> stage_mu, double h, const ButcherPair& pair) {
  const int s = pair.stages();
  if (static_cast<int>(stage_mu.size()) < s) {
    throw Error(ErrorCode::dimension_mismatch, "need one multiplier per stage");
  }
  std::vector<Eigen::VectorXd> g(static_cast<std::size_t>(s) + 1);
  std::vector<Eigen::VectorXd> rate(static_cast<std::size_t>(s));
  std::vector<double> trate(static_cast<std::size_t>(s));
  g[0] = g0;
  double t = t0;
  for (int i = 1; i <= s; ++i) {
    rate[i - 1] = dae.group_rate(g[i - 1], stage_mu[i - 1]);
    trate[i - 1] = dae.time_rate(g[i - 1]);
    g[i] = g0;
    t = t0;
    for (int nu = 0; nu < i; ++nu) {
      const double w = h * pair.a(i, nu);
      if (w == 0.0) continue;
      g[i] += w * rate[nu];
      t += w * trate[nu];
    }
    if (!dae.group_admissible(g[i])) {
      std::ostringstream msg;
      msg << "group value at internal stage " << i << " is inadmissible (step size " << h << " too large?)";
      throw Error(ErrorCode::group_degenerate, msg.str());
    }
  }
  return {g[s], t};
}

ImexStepper::ImexStepper(const SemiExplicitDae& dae, ButcherPair pair, ImplicitSolverOptions options)
    : dae_(dae), pair_(std::move(pair)), options_(options) {
  validate(pair_);
}

void ImexStepper::invalidate() {
  cache_.clear();
  cached_h_ = -1.0;
}

const ImplicitFactor& ImexStepper::factor(double h, double coeff) {
  if (h != cached_h_) {
    cache_.clear();
    cached_h_ = h;
  }
  for (const auto& f : cache_) {
    if (f.coeff() == coeff) return f;
  }
  cache_.push_back(factor_implicit(dae_.implicit_operator(), h, coeff, options_));
  ++factorizations_;
  return cache_.back();
}

Eigen::VectorXd ImexStepper::consistent_multipliers(const Eigen::VectorXd& v) const {
  const Linearization lin = dae_.linearize(v);
  const Eigen::VectorXd pv = dae_.implicit_operator() * v;
  if (dae_.index() == DaeIndex::one) {
    const MultiplierSystem sys = dae_.multiplier_system(v, lin, pv);
    return solve_small(sys.lhs, sys.rhs).x;
  }
  const Eigen::MatrixXd& psi = dae_.constraint_matrix();
  return solve_small(psi.transpose() * lin.h1, psi.transpose() * (pv - lin.h0)).x;
}

StepResult ImexStepper::step(DaeState& state, double h) {
  if (!(h >= 0.0) || !std::isfinite(h)) throw Error(ErrorCode::invalid_argument, "step size must be >= 0");
  if (state.v.size() != dae_.state_size()) throw Error(ErrorCode::dimension_mismatch, "state size");
  const int s = pair_.stages();
  const SparseMatrix& p = dae_.implicit_operator();
  const bool index1 = dae_.index() == DaeIndex::one;

  std::vector<Eigen::VectorXd> v(static_cast<std::size_t>(s) + 1);
  std::vector<Eigen::VectorXd> pv(static_cast<std::size_t>(s) + 1);
  std::vector<Linearization> lin(static_cast<std::size_t>(s) + 1);
  StepResult result;
  result.stage_mu.resize(static_cast<std::size_t>(s));
  result.min_rcond = 1.0;

  v[0] = state.v;
  for (int i = 1; i <= s; ++i) {
    lin[i - 1] = dae_.linearize(v[i - 1]);
    pv[i - 1] = p * v[i - 1];
    Eigen::VectorXd r1 = v[0];
    for (int nu = 0; nu < i; ++nu) {
      if (pair_.a_hat(i, nu) != 0.0) r1 += h * pair_.a_hat(i, nu) * pv[nu];
      if (pair_.a(i, nu) != 0.0) {
        r1 -= h * pair_.a(i, nu) * lin[nu].h0;
        if (nu < i - 1) r1.noalias() -= h * pair_.a(i, nu) * (lin[nu].h1 * result.stage_mu[nu]);
      }
    }
    const ImplicitFactor& m = factor(h, pair_.a_hat(i, i));
    const double coupling = h * pair_.a(i, i - 1);
    StageSolution stage;
    try {
      if (index1) {
        stage = stage_solve_index1(m, r1, coupling, lin[i - 1].h1,
                                   dae_.multiplier_system(v[i - 1], lin[i - 1], pv[i - 1]));
      } else {
        stage = stage_solve_index2(m, r1, coupling, lin[i - 1].h1, dae_.constraint_matrix(),
                                   dae_.constraint_target());
      }
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "stage " << i << ": " << e.what();
      throw Error(e.code(), msg.str());
    }
    if (!stage.v.allFinite() || !stage.mu.allFinite()) {
      std::ostringstream msg;
      msg << "stage " << i << " produced a non-finite value";
      throw Error(ErrorCode::non_finite, msg.str());
    }
    v[i] = std::move(stage.v);
    result.stage_mu[i - 1] = std::move(stage.mu);
    result.min_rcond = std::min(result.min_rcond, stage.rcond);
  }

  lin[s] = dae_.linearize(v[s]);
  pv[s] = p * v[s];
  Eigen::VectorXd mu_next;
  if (index1) {
    const MultiplierSystem sys = dae_.multiplier_system(v[s], lin[s], pv[s]);
    const SmallSolve sol = solve_small(sys.lhs, sys.rhs);
    mu_next = sol.x;
    result.min_rcond = std::min(result.min_rcond, sol.rcond);
  } else {
    mu_next = result.stage_mu[s - 1];
  }

  const GroupUpdate group = group_time_step(dae_, state.g, state.t, result.stage_mu, h, pair_);
  state.v = v[s];
  state.mu = std::move(mu_next);
  state.g = group.g;
  state.t = group.t;
  state.tau += h;
  result.final_linearization = std::move(lin[s]);
  result.final_pv = std::move(pv[s]);
  return result;
}

double cfl_target(double cfl, double min_dx, double wave_speed) {
  return cfl * min_dx / std::max(wave_speed, 1e-14);
}

double adapt_timestep(double current, double target) {
  if (!(current > 0.0) || current > target) return target;
  if (target >= 2.0 * current) return 2.0 * current;
  return current;
}

}  // namespace freeze
