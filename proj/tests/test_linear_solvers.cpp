#include <vector>

#include <doctest.h>

#include <Eigen/Dense>

#include "freeze/central_flux.hpp"
#include "freeze/error.hpp"
#include "freeze/linear_solvers.hpp"
#include "oracle.hpp"

using namespace freeze;

TEST_CASE("diffusion operator is symmetric with zero row sums") {
  const Grid g = build_grid_2d({0.0, 1.0}, {0.0, 2.0}, 5, 7);
  const SparseMatrix p = diffusion_operator(g, 0.3);
  const Eigen::MatrixXd d(p);
  CHECK((d - d.transpose()).norm() == 0.0);
  CHECK(d.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(d.diagonal().maxCoeff() < 0.0);

  oracle::Gen gen(31);
  const CellField f = make_field(g, gen.vector(g.size()));
  CHECK(((p * f.values) - diffusion_rhs(f, 0.3)).norm() <= 1e-12);
}

TEST_CASE("1D implicit solve matches the Thomas oracle") {
  oracle::Gen gen(32);
  for (int trial = 0; trial < 20; ++trial) {
    const Grid g = build_grid_1d({0.0, 1.0}, gen.integer(4, 200));
    const double nu = gen.uniform(0.01, 2), h = gen.uniform(1e-4, 1e-1), c = 0.5;
    const SparseMatrix p = diffusion_operator(g, nu);
    const ImplicitFactor f = factor_implicit(p, h, c);
    CHECK(f.kind() == ImplicitSolverKind::tridiagonal);
    const auto n = g.size();
    std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0);
    const double r = h * c * nu / (g.dx(0) * g.dx(0));
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      if (k > 0) {
        lo[k] = -r;
        di[k] += r;
      }
      if (k + 1 < n) {
        up[k] = -r;
        di[k] += r;
      }
    }
    const Eigen::VectorXd rhs = gen.vector(n);
    const Eigen::VectorXd expected = oracle::thomas(lo, di, up, rhs);
    REQUIRE((f.solve(rhs) - expected).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + expected.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("every solver kind agrees with a dense LU") {
  oracle::Gen gen(33);
  const Grid g = build_grid_2d({0.0, 1.0}, {0.0, 1.0}, 9, 6);
  const SparseMatrix p = diffusion_operator(g, 0.7);
  const double h = 0.01;
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(g.size(), g.size()) - h * Eigen::MatrixXd(p);
  const Eigen::VectorXd rhs = gen.vector(g.size());
  const Eigen::VectorXd expected = m.partialPivLu().solve(rhs);
  for (auto kind : {ImplicitSolverKind::automatic, ImplicitSolverKind::sparse_direct,
                    ImplicitSolverKind::conjugate_gradient}) {
    ImplicitSolverOptions o;
    o.kind = kind;
    const ImplicitFactor f = factor_implicit(p, h, 1.0, o);
    REQUIRE((f.solve(rhs) - expected).norm() <= 1e-10 * expected.norm());
    const Eigen::MatrixXd cols = gen.matrix(g.size(), 3);
    REQUIRE((f.solve(cols) - m.partialPivLu().solve(cols)).norm() <= 1e-10 * cols.norm() * 10);
  }
  ImplicitSolverOptions small;
  small.direct_limit = 10;
  CHECK(factor_implicit(p, h, 1.0, small).kind() == ImplicitSolverKind::conjugate_gradient);
}

TEST_CASE("zero shift is the identity") {
  const Grid g = build_grid_1d({0.0, 1.0}, 10);
  const ImplicitFactor f = factor_implicit(diffusion_operator(g, 1.0), 0.1, 0.0);
  CHECK(f.kind() == ImplicitSolverKind::identity);
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(12, 0, 1);
  CHECK(f.solve(x) == x);
  const ImplicitFactor z = factor_implicit(diffusion_operator(g, 0.0), 0.1, 0.5);
  CHECK(z.solve(x) == x);
}

TEST_CASE("solver guards") {
  const Grid g = build_grid_1d({0.0, 1.0}, 10);
  const SparseMatrix p = diffusion_operator(g, 1.0);
  CHECK_THROWS_AS(factor_implicit(p, -0.1, 1.0), Error);
  const ImplicitFactor f = factor_implicit(p, 0.1, 0.5);
  try {
    solve_implicit(f, Eigen::VectorXd::Zero(12), 0.2);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::stale_factor);
  }
  CHECK_NOTHROW(solve_implicit(f, Eigen::VectorXd::Zero(12), 0.1));

  SparseMatrix bad = p;
  bad.coeffRef(0, 1) += 1.0;
  try {
    factor_implicit(bad, 0.1, 0.5);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_spd);
  }
}

TEST_CASE("small dense solve") {
  Eigen::MatrixXd m(2, 2);
  m << 4, 1, 2, 3;
  const SmallSolve s = solve_small(m, Eigen::Vector2d(1, 2));
  CHECK(s.x[0] == doctest::Approx(0.1));
  CHECK(s.x[1] == doctest::Approx(0.6));
  // 1-norm condition: |m|_1 = 6, |m^-1|_1 = 0.5
  CHECK(s.rcond == doctest::Approx(1.0 / 3.0));

  Eigen::MatrixXd sing(2, 2);
  sing << 1, 2, 2, 4;
  try {
    solve_small(sing, Eigen::Vector2d(1, 1));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_system);
  }
}

TEST_CASE("small solve property: residual and adjugate inverse") {
  oracle::Gen gen(34);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd m = gen.matrix(3, 3);
    m.diagonal().array() += 2.0;
    const Eigen::VectorXd b = gen.vector(3);
    const SmallSolve s = solve_small(m, b);
    // adjugate oracle for 3x3
    Eigen::Matrix3d adj;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        adj(i, j) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
      }
    const double det = m.row(0).dot(adj.col(0));
    const Eigen::Vector3d expected = adj * b / det;
    REQUIRE((s.x - expected).norm() <= 1e-12 * (1.0 + expected.norm()));
  }
}
