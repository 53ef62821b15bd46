#include "freeze/linear_solvers.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/LU>
#include <Eigen/SparseCholesky>

#include "freeze/error.hpp"

namespace freeze {

SparseMatrix diffusion_operator(const Grid& grid, double nu) {
  if (!(nu >= 0.0)) throw Error(ErrorCode::invalid_argument, "viscosity must be non-negative");
  SparseMatrix p(grid.size(), grid.size());
  if (nu == 0.0) return p;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(grid.size()) * 5);
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const double c = nu / (grid.dx(axis) * grid.dx(axis));
    for (int l = 0; l < grid.line_count(axis); ++l) {
      const Line line = grid.line(axis, l);
      for (int f = 1; f < line.length; ++f) {
        const auto left = line.start + (f - 1) * line.stride;
        const auto right = left + line.stride;
        entries.emplace_back(left, left, -c);
        entries.emplace_back(left, right, c);
        entries.emplace_back(right, right, -c);
        entries.emplace_back(right, left, c);
      }
    }
  }
  p.setFromTriplets(entries.begin(), entries.end());
  return p;
}

struct ImplicitFactor::Impl {
  // Thomas algorithm: multipliers below the diagonal, the untouched
  // super-diagonal and the eliminated pivots.
  Eigen::VectorXd multiplier;
  Eigen::VectorXd upper;
  Eigen::VectorXd pivot;
  SparseMatrix matrix;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
};

namespace {

bool is_tridiagonal(const SparseMatrix& m) {
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      if (std::abs(it.row() - it.col()) > 1 && it.value() != 0.0) return false;
    }
  }
  return true;
}

// I - sP must be symmetric with every Gershgorin disc inside [1, inf).
void check_spd(const SparseMatrix& a) {
  const SparseMatrix diff = SparseMatrix(a.transpose()) - a;
  double scale = 1.0;
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  }
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      if (std::abs(it.value()) > 1e-13 * scale) throw Error(ErrorCode::non_spd, "implicit matrix is not symmetric");
    }
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(a.rows());
  Eigen::VectorXd radius = Eigen::VectorXd::Zero(a.rows());
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      if (it.row() == it.col()) {
        diag[it.row()] += it.value();
      } else {
        radius[it.row()] += std::abs(it.value());
      }
    }
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (diag[i] - radius[i] < 1.0 - 1e-12 * std::max(1.0, diag[i])) {
      std::ostringstream msg;
      msg << "row " << i << ": Gershgorin lower bound " << diag[i] - radius[i] << " < 1";
      throw Error(ErrorCode::non_spd, msg.str());
    }
  }
}

}  // namespace

ImplicitFactor factor_implicit(const SparseMatrix& p, double h, double coeff, const ImplicitSolverOptions& options) {
  if (p.rows() != p.cols()) throw Error(ErrorCode::dimension_mismatch, "implicit operator must be square");
  const double shift = h * coeff;
  if (!(shift >= 0.0) || !std::isfinite(shift)) {
    throw Error(ErrorCode::invalid_argument, "need h * coeff >= 0");
  }
  ImplicitFactor out;
  out.h_ = h;
  out.coeff_ = coeff;
  out.n_ = p.rows();

  ImplicitSolverKind kind = options.kind;
  const bool trivial = shift == 0.0 || p.nonZeros() == 0;
  if (kind == ImplicitSolverKind::automatic) {
    if (trivial) {
      kind = ImplicitSolverKind::identity;
    } else if (is_tridiagonal(p)) {
      kind = ImplicitSolverKind::tridiagonal;
    } else if (p.rows() > options.direct_limit) {
      kind = ImplicitSolverKind::conjugate_gradient;
    } else {
      kind = ImplicitSolverKind::sparse_direct;
    }
  }
  out.kind_ = kind;
  if (kind == ImplicitSolverKind::identity) {
    if (!trivial) throw Error(ErrorCode::invalid_argument, "identity solver requested for a nontrivial operator");
    return out;
  }

  SparseMatrix eye(p.rows(), p.cols());
  eye.setIdentity();
  auto impl = std::make_shared<ImplicitFactor::Impl>();
  impl->matrix = eye - shift * p;
  impl->matrix.makeCompressed();
  check_spd(impl->matrix);

  switch (kind) {
    case ImplicitSolverKind::tridiagonal: {
      if (!is_tridiagonal(p)) throw Error(ErrorCode::invalid_argument, "operator is not tridiagonal");
      const Eigen::Index n = p.rows();
      Eigen::VectorXd diag(n), lower = Eigen::VectorXd::Zero(n);
      impl->upper = Eigen::VectorXd::Zero(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        diag[i] = impl->matrix.coeff(i, i);
        if (i > 0) lower[i] = impl->matrix.coeff(i, i - 1);
        if (i + 1 < n) impl->upper[i] = impl->matrix.coeff(i, i + 1);
      }
      impl->multiplier = Eigen::VectorXd::Zero(n);
      impl->pivot = diag;
      for (Eigen::Index i = 1; i < n; ++i) {
        impl->multiplier[i] = lower[i] / impl->pivot[i - 1];
        impl->pivot[i] = diag[i] - impl->multiplier[i] * impl->upper[i - 1];
      }
      break;
    }
    case ImplicitSolverKind::sparse_direct:
      impl->ldlt.compute(impl->matrix);
      if (impl->ldlt.info() != Eigen::Success) throw Error(ErrorCode::non_spd, "sparse LDL^T factorization failed");
      break;
    case ImplicitSolverKind::conjugate_gradient:
      impl->cg.setTolerance(options.cg_tolerance);
      impl->cg.setMaxIterations(static_cast<Eigen::Index>(std::max<std::ptrdiff_t>(1000, 10 * p.rows())));
      impl->cg.compute(impl->matrix);
      break;
    default:
      break;
  }
  out.impl_ = std::move(impl);
  return out;
}

Eigen::VectorXd ImplicitFactor::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != n_) {
    std::ostringstream msg;
    msg << "right-hand side has " << rhs.size() << " entries, factor has " << n_;
    throw Error(ErrorCode::dimension_mismatch, msg.str());
  }
  switch (kind_) {
    case ImplicitSolverKind::identity:
    case ImplicitSolverKind::automatic:
      return rhs;
    case ImplicitSolverKind::tridiagonal: {
      const Impl& f = *impl_;
      Eigen::VectorXd x = rhs;
      for (Eigen::Index i = 1; i < n_; ++i) x[i] -= f.multiplier[i] * x[i - 1];
      x[n_ - 1] /= f.pivot[n_ - 1];
      for (Eigen::Index i = n_ - 2; i >= 0; --i) x[i] = (x[i] - f.upper[i] * x[i + 1]) / f.pivot[i];
      return x;
    }
    case ImplicitSolverKind::sparse_direct:
      return impl_->ldlt.solve(rhs);
    case ImplicitSolverKind::conjugate_gradient: {
      Eigen::VectorXd x = impl_->cg.solve(rhs);
      if (impl_->cg.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "conjugate gradients stopped at residual " << impl_->cg.error() << " after " << impl_->cg.iterations()
            << " iterations";
        throw Error(ErrorCode::singular_system, msg.str());
      }
      return x;
    }
  }
  return rhs;
}

Eigen::MatrixXd ImplicitFactor::solve(const Eigen::MatrixXd& rhs) const {
  Eigen::MatrixXd out(rhs.rows(), rhs.cols());
  for (Eigen::Index c = 0; c < rhs.cols(); ++c) out.col(c) = solve(Eigen::VectorXd(rhs.col(c)));
  return out;
}

Eigen::VectorXd solve_implicit(const ImplicitFactor& factor, const Eigen::VectorXd& rhs, double h) {
  if (h != factor.h()) {
    std::ostringstream msg;
    msg << "factor built for h = " << factor.h() << ", used with h = " << h;
    throw Error(ErrorCode::stale_factor, msg.str());
  }
  return factor.solve(rhs);
}

SmallSolve solve_small(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs, double min_rcond) {
  if (m.rows() != m.cols() || m.rows() != rhs.size()) {
    throw Error(ErrorCode::dimension_mismatch, "small system must be square and match the right-hand side");
  }
  if (!m.allFinite() || !rhs.allFinite()) throw Error(ErrorCode::non_finite, "small system entries");
  if (m.rows() == 0) return {Eigen::VectorXd(), 1.0};
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond >= min_rcond)) {
    std::ostringstream msg;
    msg << "small system is singular to working precision (rcond " << rcond << ")";
    throw Error(ErrorCode::singular_system, msg.str());
  }
  return {lu.solve(rhs), rcond};
}

}  // namespace freeze
