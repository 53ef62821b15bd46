#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "freeze/central_flux.hpp"
#include "freeze/limiter.hpp"
#include "freeze/mesh.hpp"

namespace freeze {

enum class PhaseCondition {
  orthogonal,  ///< minimise the weighted norm of v_tau (index 1)
  fixed,       ///< pin v to a hyperplane through a reference profile (index 2)
  none,        ///< mu identically zero: plain Burgers evolution in the original frame
};

class FixedPhaseReference;

/// Parameters of the freezing system for u_t + (1/p) div(a |u|^p) = nu Lap u
/// on a fixed rectangle with no-flux boundaries.
struct FreezingProblem {
  Grid grid;
  double nu = 0.0;
  double p = 2.0;
  std::vector<double> direction{1.0};
  LimiterConfig limiter;
  PhaseCondition phase = PhaseCondition::orthogonal;
  /// Cached reference-side data for the fixed phase condition; built by
  /// set_reference and replaced whenever the reference changes.
  std::shared_ptr<const FixedPhaseReference> reference;
  double cfl = 1.0 / 3.0;

  int dim() const { return grid.dim(); }
  /// Number of algebraic unknowns mu (scaling + one shift per axis).
  int multiplier_count() const { return grid.dim() + 1; }
  /// Coefficient s of the zero-order term f_{1,0}(v) = s v, s = 1 - d (p - 1).
  double source_coefficient() const { return 1.0 - grid.dim() * (p - 1.0); }
  /// True iff p = (d + 1) / d, so the source term vanishes.
  bool conservative() const;
};

void validate(const FreezingProblem& problem);

/// The fluxes f_{i,j} of the recast equation, i = 0..d+1 (families) and
/// j = 0..d-1 (axes), plus the source coefficient of f_{1,0}. Only family
/// 0 carries the central-scheme dissipation.
struct FluxFamily {
  std::vector<std::array<FluxFunction, 2>> families;
  double source_coefficient = 0.0;
};

FluxFamily flux_family(const FreezingProblem& problem);

/// The pieces of v' = -H0(v) - H1(v) mu + P v.
struct OperatorBundle {
  Eigen::VectorXd h0;
  Eigen::MatrixXd h1;  ///< N x (d+1); column 0 includes -f_{1,0}(v)
  Eigen::VectorXd pv;
};

/// Family-0 flux divergence including the dissipation with bound `a_bound`.
Eigen::VectorXd assemble_h0(const FreezingProblem& problem, const Grid& grid, const FaceLimits& limits,
                            double a_bound);
/// Flux divergences of the group families; independent of the wave speed.
Eigen::MatrixXd assemble_h1(const FreezingProblem& problem, const CellField& field, const FaceLimits& limits);

OperatorBundle assemble_operators(const FreezingProblem& problem, const CellField& field, double a_bound);

/// F = -H0 - H1 mu + Pv.
Eigen::VectorXd evaluate_rhs(const OperatorBundle& bundle, const Eigen::VectorXd& mu);
Eigen::VectorXd freezing_rhs(const FreezingProblem& problem, const CellField& field, const Eigen::VectorXd& mu,
                             double a_bound);

/// Rough global bound on the hyperbolic wave speeds:
/// max_j |a_j| sup|v|^{p-1} + max_j (|mu_1| max|xi_j| + |mu_{1+j}|).
double wave_speed_bound(const FreezingProblem& problem, const CellField& field, const Eigen::VectorXd& mu);

/// Reference-side quantities of the fixed phase condition, computed once.
class FixedPhaseReference {
 public:
  FixedPhaseReference(const FreezingProblem& problem, CellField reference);

  const CellField& field() const { return field_; }
  /// Psi = W H1(u_ref), one column per multiplier (W = cell volumes).
  const Eigen::MatrixXd& psi() const { return psi_; }
  /// Psi^T u_ref.
  const Eigen::VectorXd& target() const { return target_; }
  /// -Psi^T (v - u_ref).
  Eigen::VectorXd residual(const Eigen::VectorXd& v) const;

 private:
  CellField field_;
  Eigen::MatrixXd psi_;
  Eigen::VectorXd target_;
};

void set_reference(FreezingProblem& problem, const CellField& reference);

/// Orthogonal: residual_i = -sum_k vol (H1 col i)_k F_k.
Eigen::VectorXd orthogonal_residual(const FreezingProblem& problem, const OperatorBundle& bundle,
                                    const Eigen::VectorXd& mu);
/// Dispatches on the problem's phase condition. `mu` is required for the
/// orthogonal phase, ignored otherwise.
Eigen::VectorXd phase_residual(const FreezingProblem& problem, const CellField& field,
                               const std::optional<Eigen::VectorXd>& mu, double a_bound);

struct MultiplierSolve {
  Eigen::VectorXd mu;
  double rcond = 0.0;  ///< reciprocal condition estimate of the small system
};

/// mu = (H1^T W H1)^{-1} H1^T W (-H0 + Pv). Throws singular-system.
MultiplierSolve solve_mu_orthogonal(const FreezingProblem& problem, const CellField& field, double a_bound);
MultiplierSolve solve_mu_orthogonal(const FreezingProblem& problem, const OperatorBundle& bundle);

/// Consistent initial multipliers: the orthogonal solve, or for the fixed
/// phase the hidden constraint Psi^T F(v0, mu0) = 0.
MultiplierSolve consistent_initialize(const FreezingProblem& problem, const CellField& field, double a_bound);

}  // namespace freeze
