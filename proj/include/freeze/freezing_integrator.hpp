#pragma once

#include <functional>
#include <optional>

#include <Eigen/Core>

#include "freeze/freezing_rhs.hpp"
#include "freeze/imex_dae.hpp"
#include "freeze/linear_solvers.hpp"

namespace freeze {

/// The method-of-lines freezing system as a semi-explicit DAE. The group is
/// g = (alpha, b_1..b_d) with alpha' = alpha mu_1, b' = alpha^{p-1} mu_{2:}
/// and t' = alpha^{2p-2}.
///
/// The wave-speed bound enters H0 only; it is set once per step. Limits and
/// H1 of the last state are cached so a new bound costs one flux pass.
class FreezingDae : public SemiExplicitDae {
 public:
  explicit FreezingDae(FreezingProblem problem);

  const FreezingProblem& problem() const { return problem_; }
  void set_wave_speed(double a_bound);
  double wave_speed() const { return a_bound_; }

  DaeIndex index() const override;
  Eigen::Index state_size() const override { return problem_.grid.size(); }
  Eigen::Index multiplier_size() const override { return problem_.multiplier_count(); }
  Eigen::Index group_size() const override { return problem_.dim() + 1; }

  Linearization linearize(const Eigen::VectorXd& v) const override;
  const SparseMatrix& implicit_operator() const override { return p_; }
  MultiplierSystem multiplier_system(const Eigen::VectorXd& v, const Linearization& lin,
                                     const Eigen::VectorXd& pv) const override;
  Eigen::VectorXd weights() const override;
  const Eigen::MatrixXd& constraint_matrix() const override;
  const Eigen::VectorXd& constraint_target() const override;

  Eigen::VectorXd group_rate(const Eigen::VectorXd& g, const Eigen::VectorXd& mu) const override;
  double time_rate(const Eigen::VectorXd& g) const override;
  bool group_admissible(const Eigen::VectorXd& g) const override;

 private:
  FreezingProblem problem_;
  SparseMatrix p_;
  double a_bound_ = 0.0;

  struct Cache {
    Eigen::VectorXd v;
    FaceLimits limits;
    Eigen::MatrixXd h1;
    double a_bound = -1.0;
    Eigen::VectorXd h0;
  };
  mutable std::optional<Cache> cache_;
};

struct FreezingState {
  CellField v;
  Eigen::VectorXd mu;
  double alpha = 1.0;
  Eigen::VectorXd b;
  double t = 0.0;
  double tau = 0.0;
  double dtau = 0.0;
};

/// Per-step diagnostics handed to the callback. Step 0 is the initial state.
struct StepRecord {
  long step = 0;
  double tau = 0.0;
  double dtau = 0.0;
  double t = 0.0;
  double alpha = 1.0;
  Eigen::VectorXd b;
  Eigen::VectorXd mu;
  /// Relative phase residual: orthogonal |H1^T W F| / (|H1|_W (|H0|_W +
  /// |H1 mu|_W + |Pv|_W)), fixed |Psi^T v - r| / (|Psi| |u_ref|).
  double phase_residual = 0.0;
  double rhs_norm = 0.0;  ///< max-norm of F(v, mu)
  double mass = 0.0;
  double wave_speed = 0.0;
  double min_rcond = 1.0;
};

struct IntegrateOptions {
  bool stop_on_stationary = true;
  int stationary_steps = 10;
  double stationary_tolerance = 1e-10;
  double min_step = 1e-12;
  long max_steps = 50000000;  ///< exceeding it is an error
  long stop_after = 0;        ///< if positive, a normal stop after this many steps
  ImplicitSolverOptions solver;
};

struct IntegrationResult {
  FreezingState state;
  long steps = 0;
  bool stationary = false;
  StepRecord last;
};

using StepCallback = std::function<void(const StepRecord&, const FreezingState&)>;

/// Consistent-initializes mu and advances the freezing system to tau_end
/// (exactly; the last step is shortened) or until the solution is
/// stationary. Errors are rethrown with the step count and tau attached.
IntegrationResult integrate(const FreezingProblem& problem, const CellField& initial, double tau_end,
                            const IntegrateOptions& options = {}, const StepCallback& on_step = {});

/// Cell values of u(., t) = alpha^{-1} v((x - b) / alpha^{p-1}) at the
/// centres of `target`, by linear interpolation of v between cell centres
/// (zero outside the computational domain).
CellField reconstruct_solution(const FreezingProblem& problem, const FreezingState& state, const Grid& target);

}  // namespace freeze
