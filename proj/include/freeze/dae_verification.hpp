#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "freeze/imex_dae.hpp"

namespace freeze {

/// Scalar index-1 test problem
///   V' = -V + mu,  0 = mu - V^2,  g' = g mu,  t' = g^2
/// with -V treated implicitly.
class Index1Example : public SemiExplicitDae {
 public:
  Index1Example();
  DaeIndex index() const override { return DaeIndex::one; }
  Eigen::Index state_size() const override { return 1; }
  Eigen::Index multiplier_size() const override { return 1; }
  Eigen::Index group_size() const override { return 1; }
  Linearization linearize(const Eigen::VectorXd& v) const override;
  const SparseMatrix& implicit_operator() const override { return p_; }
  MultiplierSystem multiplier_system(const Eigen::VectorXd& v, const Linearization& lin,
                                     const Eigen::VectorXd& pv) const override;
  Eigen::VectorXd group_rate(const Eigen::VectorXd& g, const Eigen::VectorXd& mu) const override;
  double time_rate(const Eigen::VectorXd& g) const override;

  DaeState initial_state(double v0 = 0.5) const;

 private:
  SparseMatrix p_;
};

/// Two-component index-2 test problem
///   V' = P V + mu e,  0 = V_1 - 1,  P = [[-2, 1], [1, -2]],  e = (1, 1),
/// started from V = (1, 0), with g' = g mu and t' = g^2.
class Index2Example : public SemiExplicitDae {
 public:
  Index2Example();
  DaeIndex index() const override { return DaeIndex::two; }
  Eigen::Index state_size() const override { return 2; }
  Eigen::Index multiplier_size() const override { return 1; }
  Eigen::Index group_size() const override { return 1; }
  Linearization linearize(const Eigen::VectorXd& v) const override;
  const SparseMatrix& implicit_operator() const override { return p_; }
  const Eigen::MatrixXd& constraint_matrix() const override { return psi_; }
  const Eigen::VectorXd& constraint_target() const override { return target_; }
  Eigen::VectorXd group_rate(const Eigen::VectorXd& g, const Eigen::VectorXd& mu) const override;
  double time_rate(const Eigen::VectorXd& g) const override;

  DaeState initial_state() const;

 private:
  SparseMatrix p_;
  Eigen::MatrixXd psi_;
  Eigen::VectorXd target_;
};

/// V' = lambda V with no multipliers; the stepper reduces to Crank-Nicolson.
class LinearDecayExample : public SemiExplicitDae {
 public:
  explicit LinearDecayExample(double lambda = -1.0);
  DaeIndex index() const override { return DaeIndex::one; }
  Eigen::Index state_size() const override { return 1; }
  Eigen::Index multiplier_size() const override { return 0; }
  Linearization linearize(const Eigen::VectorXd& v) const override;
  const SparseMatrix& implicit_operator() const override { return p_; }

  double lambda() const { return lambda_; }
  DaeState initial_state() const;

 private:
  double lambda_;
  SparseMatrix p_;
};

struct OrderRow {
  double h = 0.0;
  double err_v = 0.0;
  double err_mu = 0.0;
  double err_g = 0.0;
  double err_t = 0.0;
};

struct OrderStudy {
  std::vector<OrderRow> rows;
  double slope_v = 0.0;
  /// NaN when the corresponding error vanishes identically (no multipliers
  /// or no group).
  double slope_mu = 0.0;
  double slope_g = 0.0;
  double slope_t = 0.0;
};

/// Least-squares slope of log(err) against log(h); NaN if any error is
/// not positive.
double fitted_slope(std::span<const double> h, std::span<const double> err);

/// Integrates `dae` from `initial` (mu made consistent first) to `horizon`
/// with each h of `h_list` and compares with `reference`, or with a run at
/// min(h_list) / 64 when no reference is given. Needs >= 4 geometrically
/// decreasing step sizes that divide the horizon.
OrderStudy order_study(const SemiExplicitDae& dae, const DaeState& initial, double horizon,
                       std::span<const double> h_list, const std::optional<DaeState>& reference = std::nullopt);

/// Fixed-step integration used by order_study.
DaeState integrate_fixed(const SemiExplicitDae& dae, DaeState state, double horizon, double h);

/// CSV with columns h,err_V,err_mu,err_g,err_t.
void write_order_table(std::ostream& out, const OrderStudy& study);

}  // namespace freeze
