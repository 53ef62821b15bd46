#pragma once

#include <cstddef>
#include <memory>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "freeze/mesh.hpp"

namespace freeze {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// The no-flux diffusion operator P with P v = diffusion_rhs(v, nu), as a
/// sparse matrix. Field independent, so build it once per grid.
SparseMatrix diffusion_operator(const Grid& grid, double nu);

enum class ImplicitSolverKind {
  automatic,           ///< identity / tridiagonal / sparse direct / CG by structure and size
  identity,
  tridiagonal,
  sparse_direct,
  conjugate_gradient,
};

struct ImplicitSolverOptions {
  ImplicitSolverKind kind = ImplicitSolverKind::automatic;
  std::ptrdiff_t direct_limit = 100000;  ///< automatic switches to CG above this size
  double cg_tolerance = 1e-12;
};

/// A factorization of I - h * coeff * P, immutable once built.
class ImplicitFactor {
 public:
  double h() const { return h_; }
  double coeff() const { return coeff_; }
  double shift() const { return h_ * coeff_; }
  std::ptrdiff_t size() const { return n_; }
  ImplicitSolverKind kind() const { return kind_; }

  /// Solves (I - h coeff P) x = rhs.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// Column-wise solve.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

  friend ImplicitFactor factor_implicit(const SparseMatrix& p, double h, double coeff,
                                        const ImplicitSolverOptions& options);

 private:
  struct Impl;
  double h_ = 0.0;
  double coeff_ = 0.0;
  std::ptrdiff_t n_ = 0;
  ImplicitSolverKind kind_ = ImplicitSolverKind::identity;
  std::shared_ptr<const Impl> impl_;
};

/// Factorizes I - h coeff P. Throws invalid-argument for h coeff < 0 and
/// non-spd when the matrix fails the symmetry / Gershgorin (>= 1) check.
ImplicitFactor factor_implicit(const SparseMatrix& p, double h, double coeff,
                               const ImplicitSolverOptions& options = {});

/// Solve guarded against a factor built for a different step size.
Eigen::VectorXd solve_implicit(const ImplicitFactor& factor, const Eigen::VectorXd& rhs, double h);

struct SmallSolve {
  Eigen::VectorXd x;
  double rcond = 0.0;  ///< reciprocal condition number estimate (1-norm)
};

/// Dense LU solve with partial pivoting for the (d+1) x (d+1) systems.
/// Throws singular-system when rcond falls below `min_rcond`.
SmallSolve solve_small(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs, double min_rcond = 1e-14);

}  // namespace freeze
