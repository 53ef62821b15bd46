#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "freeze/linear_solvers.hpp"

namespace freeze {

/// An explicit / diagonally implicit Runge-Kutta pair with s stages
/// (s + 1 internal values). Row i of `a` and `a_hat` produces internal
/// value i; the last rows are the weights b and b_hat.
struct ButcherPair {
  Eigen::VectorXd c;
  Eigen::MatrixXd a;
  Eigen::MatrixXd a_hat;

  int stages() const { return static_cast<int>(c.size()) - 1; }
};

/// Heun's method paired with the Crank-Nicolson (trapezoidal) rule.
ButcherPair heun_crank_nicolson();

/// Throws invalid-argument unless `a` is strictly lower triangular and
/// `a_hat` lower triangular with matching sizes.
void validate(const ButcherPair& pair);

enum class DaeIndex { one = 1, two = 2 };

/// V' = P V - H1(V) mu - H0(V) at a given V.
struct Linearization {
  Eigen::VectorXd h0;
  Eigen::MatrixXd h1;
};

/// lhs mu = rhs, the linear equation fixing mu at a given V (index 1).
struct MultiplierSystem {
  Eigen::MatrixXd lhs;
  Eigen::VectorXd rhs;
};

/// A semi-explicit DAE
///   V' = P V - H1(V) mu - H0(V),
///   0  = Psi(V, mu)          (index 1, linear in mu), or
///   0  = Psi^T V - r         (index 2),
/// coupled to group ODEs g' = r_alg(g, mu) and a time ODE t' = r_time(g).
class SemiExplicitDae {
 public:
  virtual ~SemiExplicitDae() = default;

  virtual DaeIndex index() const = 0;
  virtual Eigen::Index state_size() const = 0;
  virtual Eigen::Index multiplier_size() const = 0;
  virtual Eigen::Index group_size() const { return 0; }

  virtual Linearization linearize(const Eigen::VectorXd& v) const = 0;
  /// The linear operator treated implicitly; constant for the whole run.
  virtual const SparseMatrix& implicit_operator() const = 0;

  /// Index 1 only. The default is the weighted least-squares closure
  /// H1^T W (P V - H1 mu - H0) = 0.
  virtual MultiplierSystem multiplier_system(const Eigen::VectorXd& v, const Linearization& lin,
                                             const Eigen::VectorXd& pv) const;
  /// Quadrature weights W of the default closure (all ones by default).
  virtual Eigen::VectorXd weights() const;

  /// Index 2 only: Psi (state_size x multiplier_size) and r.
  virtual const Eigen::MatrixXd& constraint_matrix() const;
  virtual const Eigen::VectorXd& constraint_target() const;

  virtual Eigen::VectorXd group_rate(const Eigen::VectorXd& g, const Eigen::VectorXd& mu) const;
  virtual double time_rate(const Eigen::VectorXd& g) const;
  virtual bool group_admissible(const Eigen::VectorXd& g) const;
};

struct DaeState {
  Eigen::VectorXd v;
  Eigen::VectorXd mu;
  Eigen::VectorXd g;
  double t = 0.0;
  double tau = 0.0;
};

struct StageSolution {
  Eigen::VectorXd v;
  Eigen::VectorXd mu;
  double rcond = 0.0;
};

/// Block elimination for an index-1 stage: mu from the small system, then
/// V = M^{-1} (r1 - coupling H1 mu) with M the factored implicit matrix.
StageSolution stage_solve_index1(const ImplicitFactor& factor, const Eigen::VectorXd& r1, double coupling,
                                 const Eigen::MatrixXd& h1, const MultiplierSystem& system);

/// Block elimination for an index-2 stage:
///   A* = M^{-1} coupling H1,  V* = M^{-1} r1,
///   mu = (Psi^T A*)^{-1} (Psi^T V* - target),  V = V* - A* mu.
StageSolution stage_solve_index2(const ImplicitFactor& factor, const Eigen::VectorXd& r1, double coupling,
                                 const Eigen::MatrixXd& h1, const Eigen::MatrixXd& psi,
                                 const Eigen::VectorXd& target);

struct GroupUpdate {
  Eigen::VectorXd g;
  double t = 0.0;
};

/// Explicit-tableau update of (g, t) from the stage multipliers mu_0..mu_{s-1}.
/// Throws group-degenerate if an internal group value is inadmissible.
GroupUpdate group_time_step(const SemiExplicitDae& dae, const Eigen::VectorXd& g0, double t0,
                            std::span<const Eigen::VectorXd> stage_mu, double h, const ButcherPair& pair);

struct StepResult {
  std::vector<Eigen::VectorXd> stage_mu;  ///< mu_0 .. mu_{s-1}
  Linearization final_linearization;      ///< at the new V
  Eigen::VectorXd final_pv;               ///< P V at the new V
  double min_rcond = 0.0;                 ///< smallest condition estimate of the small solves
};

/// Half-explicit IMEX Runge-Kutta stepper. Owns a cache of factorizations of
/// I - h a_hat_ii P keyed by h; a change of h drops the cache.
class ImexStepper {
 public:
  explicit ImexStepper(const SemiExplicitDae& dae, ButcherPair pair = heun_crank_nicolson(),
                       ImplicitSolverOptions options = {});

  const ButcherPair& tableau() const { return pair_; }

  /// mu consistent with v: the index-1 closure, or for index 2 the hidden
  /// constraint Psi^T (P V - H1 mu - H0) = 0.
  Eigen::VectorXd consistent_multipliers(const Eigen::VectorXd& v) const;

  /// Advances `state` by h (v, mu, g, t, tau).
  StepResult step(DaeState& state, double h);

  void invalidate();
  std::size_t factorizations() const { return factorizations_; }

 private:
  const ImplicitFactor& factor(double h, double coeff);

  const SemiExplicitDae& dae_;
  ButcherPair pair_;
  ImplicitSolverOptions options_;
  double cached_h_ = -1.0;
  std::vector<ImplicitFactor> cache_;
  std::size_t factorizations_ = 0;
};

/// lambda * min_dx / max(a, 1e-14).
double cfl_target(double cfl, double min_dx, double wave_speed);

/// Keeps `current` unless it exceeds `target` (then target) or target >=
/// 2 current (then 2 current). A non-positive `current` starts at target.
double adapt_timestep(double current, double target);

}  // namespace freeze
