#include "freeze/freezing_rhs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freeze/error.hpp"
#include "freeze/linear_solvers.hpp"

namespace freeze {

bool FreezingProblem::conservative() const { return std::abs(source_coefficient()) < 1e-14; }

void validate(const FreezingProblem& problem) {
  const int d = problem.dim();
  if (static_cast<int>(problem.direction.size()) != d) {
    throw Error(ErrorCode::dimension_mismatch, "direction vector must have one entry per axis");
  }
  bool nonzero = false;
  for (double a : problem.direction) {
    if (!std::isfinite(a)) throw Error(ErrorCode::non_finite, "direction vector");
    nonzero = nonzero || a != 0.0;
  }
  if (!nonzero) throw Error(ErrorCode::invalid_argument, "direction vector must be nonzero");
  if (!(problem.p > 1.0) || !std::isfinite(problem.p)) throw Error(ErrorCode::invalid_argument, "need p > 1");
  if (!(problem.nu >= 0.0) || !std::isfinite(problem.nu)) throw Error(ErrorCode::invalid_argument, "need nu >= 0");
  if (!(problem.cfl > 0.0)) throw Error(ErrorCode::invalid_argument, "need a positive CFL number");
  validate(problem.limiter);
  if (problem.phase == PhaseCondition::fixed && !problem.reference) {
    throw Error(ErrorCode::missing_reference, "fixed phase condition needs a reference field");
  }
}

FluxFamily flux_family(const FreezingProblem& problem) {
  const int d = problem.dim();
  const double p = problem.p;
  FluxFamily out;
  out.source_coefficient = problem.source_coefficient();
  out.families.resize(static_cast<std::size_t>(d) + 2);
  for (int j = 0; j < d; ++j) {
    const double aj = problem.direction[j];
    // |v|^p with an explicit zero branch; pow of a negative base is undefined
    if (aj != 0.0) {
      out.families[0][j].eval = [aj, p](const Point&, double v) {
        return v == 0.0 ? 0.0 : aj / p * std::pow(std::abs(v), p);
      };
    }
    out.families[0][j].carries_dissipation = true;
    out.families[1][j].eval = [j, p](const Point& xi, double v) { return -(p - 1.0) * xi[j] * v; };
    for (int i = 0; i < d; ++i) {
      if (i == j) out.families[2 + i][j].eval = [](const Point&, double v) { return -v; };
    }
  }
  return out;
}

Eigen::VectorXd assemble_h0(const FreezingProblem& problem, const Grid& grid, const FaceLimits& limits,
                            double a_bound) {
  const FluxFamily family = flux_family(problem);
  Eigen::VectorXd h0 = Eigen::VectorXd::Zero(grid.size());
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const Eigen::VectorXd h = hyperbolic_face_fluxes(grid, limits, axis, family.families[0][axis], a_bound);
    accumulate_face_difference(grid, axis, h, 1.0, h0);
  }
  return h0;
}

Eigen::MatrixXd assemble_h1(const FreezingProblem& problem, const CellField& field, const FaceLimits& limits) {
  const Grid& grid = field.grid;
  const int d = grid.dim();
  const FluxFamily family = flux_family(problem);
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(grid.size(), d + 1);
  for (int i = 1; i <= d + 1; ++i) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(grid.size());
    for (int axis = 0; axis < d; ++axis) {
      const Eigen::VectorXd h = hyperbolic_face_fluxes(grid, limits, axis, family.families[i][axis], 0.0);
      accumulate_face_difference(grid, axis, h, 1.0, col);
    }
    h1.col(i - 1) = col;
  }
  if (family.source_coefficient != 0.0) h1.col(0) -= family.source_coefficient * field.values;
  return h1;
}

OperatorBundle assemble_operators(const FreezingProblem& problem, const CellField& field, double a_bound) {
  if (!field.values.allFinite()) throw Error(ErrorCode::non_finite, "field passed to operator assembly");
  const FaceLimits limits = face_limits(field, problem.limiter);
  OperatorBundle bundle;
  bundle.h0 = assemble_h0(problem, field.grid, limits, a_bound);
  bundle.h1 = assemble_h1(problem, field, limits);
  bundle.pv = diffusion_rhs(field, problem.nu);
  return bundle;
}

Eigen::VectorXd evaluate_rhs(const OperatorBundle& bundle, const Eigen::VectorXd& mu) {
  if (mu.size() != bundle.h1.cols()) {
    std::ostringstream msg;
    msg << "mu has " << mu.size() << " entries, expected " << bundle.h1.cols();
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
  Eigen::VectorXd f = -bundle.h0;
  f.noalias() -= bundle.h1 * mu;
  f += bundle.pv;
  return f;
}

Eigen::VectorXd freezing_rhs(const FreezingProblem& problem, const CellField& field, const Eigen::VectorXd& mu,
                             double a_bound) {
  if (mu.size() != problem.multiplier_count()) {
    throw Error(ErrorCode::dimension_mismatch, "mu must have d+1 entries");
  }
  return evaluate_rhs(assemble_operators(problem, field, a_bound), mu);
}

double wave_speed_bound(const FreezingProblem& problem, const CellField& field, const Eigen::VectorXd& mu) {
  const int d = problem.dim();
  if (mu.size() != d + 1) throw Error(ErrorCode::dimension_mismatch, "mu must have d+1 entries");
  double amax = 0.0;
  for (double a : problem.direction) amax = std::max(amax, std::abs(a));
  const double vmax = field.values.size() > 0 ? field.values.cwiseAbs().maxCoeff() : 0.0;
  const double burgers = vmax == 0.0 ? 0.0 : amax * std::pow(vmax, problem.p - 1.0);
  double group = 0.0;
  for (int j = 0; j < d; ++j) {
    group = std::max(group, std::abs(mu[0]) * field.grid.max_abs_coordinate(j) + std::abs(mu[1 + j]));
  }
  return burgers + group;
}

FixedPhaseReference::FixedPhaseReference(const FreezingProblem& problem, CellField reference)
    : field_(std::move(reference)) {
  if (!field_.values.allFinite()) throw Error(ErrorCode::non_finite, "reference field");
  const FaceLimits limits = face_limits(field_, problem.limiter);
  psi_ = field_.grid.cell_volume() * assemble_h1(problem, field_, limits);
  target_ = psi_.transpose() * field_.values;
}

Eigen::VectorXd FixedPhaseReference::residual(const Eigen::VectorXd& v) const {
  if (v.size() != psi_.rows()) throw Error(ErrorCode::dimension_mismatch, "field size differs from reference");
  return -(psi_.transpose() * (v - field_.values));
}

void set_reference(FreezingProblem& problem, const CellField& reference) {
  if (reference.grid.size() != problem.grid.size()) {
    throw Error(ErrorCode::dimension_mismatch, "reference field lives on a different grid");
  }
  problem.reference = std::make_shared<const FixedPhaseReference>(problem, reference);
}

Eigen::VectorXd orthogonal_residual(const FreezingProblem& problem, const OperatorBundle& bundle,
                                    const Eigen::VectorXd& mu) {
  return -problem.grid.cell_volume() * (bundle.h1.transpose() * evaluate_rhs(bundle, mu));
}

Eigen::VectorXd phase_residual(const FreezingProblem& problem, const CellField& field,
                               const std::optional<Eigen::VectorXd>& mu, double a_bound) {
  switch (problem.phase) {
    case PhaseCondition::orthogonal:
      if (!mu) throw Error(ErrorCode::invalid_argument, "orthogonal phase residual needs mu");
      return orthogonal_residual(problem, assemble_operators(problem, field, a_bound), *mu);
    case PhaseCondition::fixed:
      if (!problem.reference) throw Error(ErrorCode::missing_reference, "fixed phase residual");
      return problem.reference->residual(field.values);
    case PhaseCondition::none:
      break;
  }
  return mu ? Eigen::VectorXd(*mu) : Eigen::VectorXd::Zero(problem.multiplier_count());
}

MultiplierSolve solve_mu_orthogonal(const FreezingProblem& problem, const OperatorBundle& bundle) {
  const double w = problem.grid.cell_volume();
  const Eigen::MatrixXd gram = w * (bundle.h1.transpose() * bundle.h1);
  const Eigen::VectorXd rhs = w * (bundle.h1.transpose() * (bundle.pv - bundle.h0));
  const SmallSolve s = solve_small(gram, rhs);
  return {s.x, s.rcond};
}

MultiplierSolve solve_mu_orthogonal(const FreezingProblem& problem, const CellField& field, double a_bound) {
  return solve_mu_orthogonal(problem, assemble_operators(problem, field, a_bound));
}

MultiplierSolve consistent_initialize(const FreezingProblem& problem, const CellField& field, double a_bound) {
  switch (problem.phase) {
    case PhaseCondition::orthogonal:
      return solve_mu_orthogonal(problem, field, a_bound);
    case PhaseCondition::fixed: {
      if (!problem.reference) throw Error(ErrorCode::missing_reference, "fixed phase initialization");
      const OperatorBundle bundle = assemble_operators(problem, field, a_bound);
      const Eigen::MatrixXd& psi = problem.reference->psi();
      const SmallSolve s = solve_small(psi.transpose() * bundle.h1, psi.transpose() * (bundle.pv - bundle.h0));
      return {s.x, s.rcond};
    }
    case PhaseCondition::none:
      break;
  }
  return {Eigen::VectorXd::Zero(problem.multiplier_count()), 1.0};
}

}  // namespace freeze
