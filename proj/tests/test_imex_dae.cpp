#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include <Eigen/Dense>

#include "freeze/dae_verification.hpp"
#include "freeze/error.hpp"
#include "freeze/imex_dae.hpp"
#include "oracle.hpp"

using namespace freeze;

namespace {

// V' = lambda V driven through H0 = -lambda V; P = 0, so the pair runs Heun.
class ExplicitGrowth : public SemiExplicitDae {
 public:
  explicit ExplicitGrowth(double lambda) : lambda_(lambda), p_(1, 1) {}
  DaeIndex index() const override { return DaeIndex::one; }
  Eigen::Index state_size() const override { return 1; }
  Eigen::Index multiplier_size() const override { return 0; }
  Linearization linearize(const Eigen::VectorXd& v) const override {
    return {-lambda_ * v, Eigen::MatrixXd::Zero(1, 0)};
  }
  const SparseMatrix& implicit_operator() const override { return p_; }

 private:
  double lambda_;
  SparseMatrix p_;
};

}  // namespace

TEST_CASE("Heun / Crank-Nicolson tableau") {
  const ButcherPair pair = heun_crank_nicolson();
  CHECK(pair.stages() == 2);
  CHECK_NOTHROW(validate(pair));
  CHECK(pair.a(1, 0) == 1.0);
  CHECK(pair.a(2, 0) == 0.5);
  CHECK(pair.a(2, 1) == 0.5);
  CHECK(pair.a_hat(1, 0) == 0.5);
  CHECK(pair.a_hat(1, 1) == 0.5);
  CHECK(pair.a_hat(2, 2) == 0.5);
  ButcherPair bad = pair;
  bad.a(0, 0) = 0.3;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("stepper reduces to Crank-Nicolson") {
  for (double lambda : {-1.0, -10.0, -0.3}) {
    const LinearDecayExample dae(lambda);
    ImexStepper st(dae);
    DaeState s = dae.initial_state();
    const double h = 0.1;
    st.step(s, h);
    const double amp = (1 + h * lambda / 2) / (1 - h * lambda / 2);
    CHECK(std::abs(s.v[0] - amp) <= 1e-14);
  }
  const LinearDecayExample dae(-1.0);
  ImexStepper st(dae);
  DaeState s = dae.initial_state();
  st.step(s, 0.1);
  CHECK(s.v[0] == doctest::Approx(0.9047619047619048).epsilon(1e-15));
}

TEST_CASE("stepper reduces to Heun") {
  const ExplicitGrowth dae(1.0);
  ImexStepper st(dae);
  DaeState s;
  s.v = Eigen::VectorXd::Ones(1);
  s.mu = Eigen::VectorXd(0);
  s.g = Eigen::VectorXd(0);
  st.step(s, 0.1);
  CHECK(s.v[0] == doctest::Approx(1.105).epsilon(1e-15));
  CHECK(s.tau == doctest::Approx(0.1));
}

TEST_CASE("group update with constant multiplier") {
  const Index1Example dae;
  const std::vector<Eigen::VectorXd> mu(2, Eigen::VectorXd::Ones(1));
  const GroupUpdate u = group_time_step(dae, Eigen::VectorXd::Ones(1), 0.0, mu, 0.1, heun_crank_nicolson());
  CHECK(u.g[0] == doctest::Approx(1.105).epsilon(1e-15));
  // t' = g^2 with the explicit Euler stage g = 1.1
  CHECK(u.t == doctest::Approx(0.1105).epsilon(1e-15));
}

TEST_CASE("factorization cache is keyed by the step size") {
  const Index2Example dae;
  ImexStepper st(dae);
  DaeState s = dae.initial_state();
  s.mu = st.consistent_multipliers(s.v);
  st.step(s, 0.1);
  const auto after_first = st.factorizations();
  CHECK(after_first >= 1);
  st.step(s, 0.1);
  st.step(s, 0.1);
  CHECK(st.factorizations() == after_first);
  st.step(s, 0.05);
  CHECK(st.factorizations() == 2 * after_first);
  st.invalidate();
  st.step(s, 0.05);
  CHECK(st.factorizations() == 3 * after_first);
}

TEST_CASE("index-2 stepping keeps the constraint exactly") {
  const Index2Example dae;
  ImexStepper st(dae);
  DaeState s = dae.initial_state();
  s.mu = st.consistent_multipliers(s.v);
  CHECK(s.mu[0] == doctest::Approx(2.0));
  for (int n = 0; n < 20; ++n) {
    st.step(s, 0.05);
    REQUIRE(std::abs(s.v[0] - 1.0) <= 1e-14);
  }
}

TEST_CASE("stage solves equal a dense monolithic solve") {
  oracle::Gen gen(41);
  const Grid g = build_grid_1d({0.0, 1.0}, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const SparseMatrix p = diffusion_operator(g, gen.uniform(0.01, 1.0));
    const double h = gen.uniform(0.01, 0.5), coeff = 0.5;
    const ImplicitFactor f = factor_implicit(p, h, coeff);
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(8, 8) - h * coeff * Eigen::MatrixXd(p);
    const int q = gen.integer(1, 3);
    const Eigen::MatrixXd h1 = gen.matrix(8, q);
    const Eigen::VectorXd r1 = gen.vector(8);
    const double c = gen.uniform(0.01, 0.5);

    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(8 + q, 8 + q);
    block.topLeftCorner(8, 8) = m;
    block.topRightCorner(8, q) = c * h1;
    Eigen::VectorXd rhs(8 + q);
    rhs.head(8) = r1;

    MultiplierSystem sys{gen.matrix(q, q), gen.vector(q)};
    sys.lhs.diagonal().array() += 3.0;
    block.bottomRightCorner(q, q) = sys.lhs;
    rhs.tail(q) = sys.rhs;
    Eigen::VectorXd x = block.fullPivLu().solve(rhs);
    const StageSolution s1 = stage_solve_index1(f, r1, c, h1, sys);
    REQUIRE((s1.v - x.head(8)).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + x.lpNorm<Eigen::Infinity>()));
    REQUIRE((s1.mu - x.tail(q)).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + x.lpNorm<Eigen::Infinity>()));

    Eigen::MatrixXd psi = h1 + 0.3 * gen.matrix(8, q);
    const Eigen::VectorXd target = gen.vector(q);
    block.bottomRightCorner(q, q).setZero();
    block.bottomLeftCorner(q, 8) = psi.transpose();
    rhs.tail(q) = target;
    x = block.fullPivLu().solve(rhs);
    const StageSolution s2 = stage_solve_index2(f, r1, c, h1, psi, target);
    const double scale = 1.0 + x.lpNorm<Eigen::Infinity>();
    REQUIRE((s2.v - x.head(8)).lpNorm<Eigen::Infinity>() <= 1e-12 * scale);
    REQUIRE((s2.mu - x.tail(q)).lpNorm<Eigen::Infinity>() <= 1e-12 * scale);
  }
}

TEST_CASE("timestep control") {
  CHECK(cfl_target(1.0 / 3.0, 0.1, 5.5) == doctest::Approx(6.0606060606e-3));
  CHECK(cfl_target(0.5, 0.1, 0.0) == doctest::Approx(0.05e14));
  CHECK(adapt_timestep(0.0, 0.2) == 0.2);
  CHECK(adapt_timestep(0.1, 0.15) == 0.1);
  CHECK(adapt_timestep(0.1, 0.05) == 0.05);
  CHECK(adapt_timestep(0.1, 0.2) == 0.2);
  CHECK(adapt_timestep(0.1, 0.5) == 0.2);
}

TEST_CASE("fitted slope") {
  const std::vector<double> h{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * x * x);
  CHECK(fitted_slope(h, e) == doctest::Approx(2.0));
  CHECK(fitted_slope(h, e) == doctest::Approx(oracle::slope(h, e)));
  e[2] = 0.0;
  CHECK(std::isnan(fitted_slope(h, e)));
}

TEST_CASE("manufactured order studies") {
  const std::vector<double> hs{0.1, 0.05, 0.025, 0.0125};
  const Index1Example e1;
  const OrderStudy o1 = order_study(e1, e1.initial_state(), 1.0, hs);
  for (double s : {o1.slope_v, o1.slope_mu, o1.slope_g, o1.slope_t}) {
    CHECK(s >= 1.8);
    CHECK(s <= 2.2);
  }
  const Index2Example e2;
  const OrderStudy o2 = order_study(e2, e2.initial_state(), 1.0, hs);
  for (double s : {o2.slope_v, o2.slope_g, o2.slope_t}) {
    CHECK(s >= 1.8);
    CHECK(s <= 2.2);
  }
  CHECK(o2.slope_mu >= 0.8);
  CHECK(o2.slope_mu <= 1.5);

  CHECK_THROWS_AS(order_study(e1, e1.initial_state(), 1.0, std::vector<double>{0.1, 0.05}), Error);
}

TEST_CASE("index-1 example against its closed form") {
  // mu = V^2, V' = -V + V^2: V = 1 / (1 + e^tau (1/V0 - 1))
  const Index1Example e;
  const DaeState s = integrate_fixed(e, e.initial_state(0.5), 1.0, 1e-3);
  CHECK(s.v[0] == doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-6));
  CHECK(s.mu[0] == doctest::Approx(std::pow(1.0 / (1.0 + std::exp(1.0)), 2)).epsilon(1e-6));
}
