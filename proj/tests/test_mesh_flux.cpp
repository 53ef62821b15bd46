#include <cmath>
#include <vector>

#include <doctest.h>

#include "freeze/central_flux.hpp"
#include "freeze/error.hpp"
#include "freeze/limiter.hpp"
#include "freeze/mesh.hpp"
#include "oracle.hpp"

using namespace freeze;

TEST_CASE("grid geometry counts boundary cells") {
  const Grid g = build_grid_1d({-5.0, 5.0}, 98);
  CHECK(g.cells(0) == 100);
  CHECK(g.dx(0) == doctest::Approx(0.1));
  CHECK(g.center(0, 0) == doctest::Approx(-4.95));
  CHECK(g.face(0, 100) == doctest::Approx(5.0));
  CHECK(g.face_count(0) == 101);
  CHECK(g.max_abs_coordinate(0) == 5.0);

  const Grid g2 = build_grid_2d({0.0, 6.0}, {-1.0, 1.0}, 4, 8);
  CHECK(g2.size() == 60);
  CHECK(g2.flatten(2, 3) == 20);
  CHECK(g2.unflatten(20) == std::array<int, 2>{2, 3});
  CHECK(g2.cell_volume() == doctest::Approx(1.0 * 0.2));
  const Line col = g2.line(1, 2);
  CHECK(col.start == 2);
  CHECK(col.stride == 6);
  CHECK(col.length == 10);
  CHECK(g2.face_count(1) == 6 * 11);
}

TEST_CASE("grid rejects bad input") {
  CHECK_THROWS_AS(build_grid_1d({1.0, 1.0}, 10), Error);
  try {
    build_grid_1d({0.0, 1.0}, 3);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::too_few_cells);
  }
  const Grid g = build_grid_1d({0.0, 1.0}, 4);
  try {
    cell_average_init(g, [&g](const Point& x) { return 1.0 / (x[0] - g.center(0, 2)); });
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_finite);
  }
  CHECK_THROWS_AS(make_field(g, Eigen::VectorXd::Zero(3)), Error);
}

TEST_CASE("minmod") {
  CHECK(minmod({1.0, 2.0, 3.0}) == 1.0);
  CHECK(minmod({-1.0, -0.5}) == -0.5);
  CHECK(minmod({1.0, -2.0}) == 0.0);
  CHECK(minmod({0.0, 5.0}) == 0.0);
  CHECK(limited_slope(0.0, 1.0, 3.0, 1.5) == doctest::Approx(1.5));
  CHECK(limited_slope(0.0, 1.0, 0.5, 1.5) == 0.0);
  CHECK_THROWS_AS(validate(LimiterConfig{2.5}), Error);
}

TEST_CASE("limited slope agrees with the three-case minmod oracle") {
  oracle::Gen gen(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const double a = gen.uniform(-2, 2), b = gen.uniform(-2, 2), c = gen.uniform(-2, 2);
    const double theta = gen.uniform(1, 2);
    const double expected = oracle::mm3(theta * (b - a), 0.5 * (c - a), theta * (c - b));
    REQUIRE(limited_slope(a, b, c, theta) == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("face limits stay between neighbouring cell values") {
  oracle::Gen gen(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Grid g = build_grid_1d({0.0, 1.0}, gen.integer(4, 40));
    const CellField f = make_field(g, gen.vector(g.size()));
    const FaceLimits lim = face_limits(f, LimiterConfig{gen.uniform(1, 2)});
    for (int face = 1; face < g.cells(0); ++face) {
      const double lo = std::min(f[face - 1], f[face]), hi = std::max(f[face - 1], f[face]);
      REQUIRE(lim.minus[0][face] >= lo - 1e-14);
      REQUIRE(lim.minus[0][face] <= hi + 1e-14);
      REQUIRE(lim.plus[0][face] >= lo - 1e-14);
      REQUIRE(lim.plus[0][face] <= hi + 1e-14);
    }
  }
}

TEST_CASE("face flux hand values") {
  FluxFunction burgers{[](const Point&, double u) { return 0.5 * u * u; }, true};
  CHECK(face_flux(burgers, {0, 0}, 1.0, 2.0, 0.0) == doctest::Approx(1.25));
  CHECK(face_flux(burgers, {0, 0}, 1.0, 2.0, 0.5) == doctest::Approx(0.75));
  FluxFunction plain{[](const Point& x, double u) { return x[0] * u; }, false};
  CHECK(face_flux(plain, {2, 0}, 1.0, 3.0, 10.0) == doctest::Approx(4.0));
  CHECK(face_flux(FluxFunction{}, {0, 0}, 1.0, 3.0, 10.0) == 0.0);
  CHECK(face_flux(burgers, {0, 0}, 1.0, 0.0, 1.0) == doctest::Approx(1.25));
  CHECK(face_flux(burgers, {0, 0}, 1.0, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK(face_flux(plain, {2, 0}, 3.0, 3.0, 1.0) == doctest::Approx(6.0));
}

TEST_CASE("diffusive face flux by hand") {
  const Grid g = build_grid_1d({0.0, 3.0}, 4);
  const CellField f = make_field(g, (Eigen::VectorXd(6) << 0, 1, 3, 3, 3, 3).finished());
  const Eigen::VectorXd p = diffusion_face_fluxes(f, 0, 0.4);
  CHECK(p[2] == doctest::Approx(1.6));
  CHECK(p[0] == 0.0);
  CHECK(p[6] == 0.0);
}

TEST_CASE("hyperbolic divergence is linear in dissipation-free fluxes") {
  oracle::Gen gen(14);
  FluxFunction f{[](const Point& x, double u) { return x[0] * u; }, false};
  FluxFunction h{[](const Point&, double u) { return -u; }, false};
  for (int trial = 0; trial < 20; ++trial) {
    const Grid g = build_grid_1d({-2.0, 2.0}, gen.integer(4, 30));
    const CellField v = make_field(g, gen.vector(g.size()));
    const double a = gen.uniform(-2, 2), b = gen.uniform(-2, 2);
    FluxFunction mix{[&](const Point& x, double u) { return a * f.eval(x, u) + b * h.eval(x, u); }, false};
    const LimiterConfig lc;
    const double speed = gen.uniform(0, 3);
    const Eigen::VectorXd lhs = semi_discrete_hyperbolic_rhs(std::vector<FluxFunction>{mix}, v, speed, lc);
    const Eigen::VectorXd rhs = a * semi_discrete_hyperbolic_rhs(std::vector<FluxFunction>{f}, v, speed, lc) +
                                b * semi_discrete_hyperbolic_rhs(std::vector<FluxFunction>{h}, v, speed, lc);
    REQUIRE((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + rhs.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("constant state is steady under a dissipative flux") {
  const Grid g = build_grid_1d({0.0, 1.0}, 10);
  FluxFunction burgers{[](const Point&, double u) { return 0.5 * u * u; }, true};
  const CellField c = make_field(g, Eigen::VectorXd::Constant(12, 0.8));
  const Eigen::VectorXd r = semi_discrete_hyperbolic_rhs(std::vector<FluxFunction>{burgers}, c, 2.0, LimiterConfig{});
  for (int k = 1; k + 1 < 12; ++k) CHECK(r[k] == doctest::Approx(0.0));
}

TEST_CASE("six-cell hyperbolic divergence by hand") {
  const Grid g = build_grid_1d({0.0, 6.0}, 4);
  const CellField f = make_field(g, (Eigen::VectorXd(6) << 0, 1, 2, 3, 4, 0).finished());
  FluxFunction id{[](const Point&, double u) { return u; }, true};
  const FaceLimits lim = face_limits(f, LimiterConfig{1.5});
  const Eigen::VectorXd h = hyperbolic_face_fluxes(g, lim, 0, id, 0.0);
  // cells 1..3 have slope 1, the rest slope 0
  const std::vector<double> expected{0.0, 0.25, 1.5, 2.5, 3.75, 2.0, 0.0};
  for (int i = 0; i < 7; ++i) CHECK(h[i] == doctest::Approx(expected[i]));
  const std::vector<FluxFunction> fl{id};
  const Eigen::VectorXd r = semi_discrete_hyperbolic_rhs(fl, f, 0.0, LimiterConfig{1.5});
  const std::vector<double> dr{-0.25, -1.25, -1.0, -1.25, 1.75, 2.0};
  for (int i = 0; i < 6; ++i) CHECK(r[i] == doctest::Approx(dr[i]));
}

TEST_CASE("no-flux divergence conserves the total") {
  oracle::Gen gen(13);
  FluxFunction burgers{[](const Point&, double u) { return 0.5 * u * u; }, true};
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = gen.integer(1, 2);
    const Grid g = build_grid(dim, {{{-1.0, gen.uniform(0.0, 2.0)}, {0.0, 1.0}}}, {gen.integer(4, 20), gen.integer(4, 20)});
    const CellField f = make_field(g, gen.vector(g.size()));
    const std::vector<FluxFunction> fl(dim, burgers);
    const Eigen::VectorXd r = semi_discrete_hyperbolic_rhs(fl, f, gen.uniform(0, 2), LimiterConfig{});
    REQUIRE(std::abs(r.sum()) <= 1e-12 * (1.0 + r.cwiseAbs().sum()));
    const Eigen::VectorXd d = diffusion_rhs(f, gen.uniform(0, 1));
    REQUIRE(std::abs(d.sum()) <= 1e-12 * (1.0 + d.cwiseAbs().sum()));
  }
}

TEST_CASE("diffusion of a quadratic is exact in the interior") {
  const Grid g = build_grid_1d({0.0, 1.0}, 18);
  const CellField f = cell_average_init(g, [](const Point& x) { return x[0] * x[0]; });
  const Eigen::VectorXd d = diffusion_rhs(f, 0.5);
  for (int k = 1; k + 1 < g.cells(0); ++k) CHECK(d[k] == doctest::Approx(1.0));
}

TEST_CASE("boundary faces are zeroed") {
  const Grid g = build_grid_2d({0.0, 1.0}, {0.0, 1.0}, 4, 5);
  FaceFluxSet set;
  for (int axis = 0; axis < 2; ++axis) {
    set.hyperbolic[axis] = Eigen::VectorXd::Ones(g.face_count(axis));
    set.diffusive[axis] = Eigen::VectorXd::Ones(g.face_count(axis));
  }
  enforce_noflux(set, g);
  for (int axis = 0; axis < 2; ++axis) {
    const int nf = g.cells(axis) + 1;
    for (int l = 0; l < g.line_count(axis); ++l) {
      CHECK(set.hyperbolic[axis][l * nf] == 0.0);
      CHECK(set.diffusive[axis][l * nf + nf - 1] == 0.0);
      CHECK(set.hyperbolic[axis][l * nf + 1] == 1.0);
    }
  }
}
