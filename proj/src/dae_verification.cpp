#include "freeze/dae_verification.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "freeze/error.hpp"

namespace freeze {

namespace {

SparseMatrix dense_to_sparse(const Eigen::MatrixXd& m) { return m.sparseView(); }

double max_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == 0 ? 0.0 : (a - b).lpNorm<Eigen::Infinity>();
}

}  // namespace

Index1Example::Index1Example() : p_(dense_to_sparse(Eigen::MatrixXd::Constant(1, 1, -1.0))) {}

Linearization Index1Example::linearize(const Eigen::VectorXd&) const {
  return {Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Constant(1, 1, -1.0)};
}

MultiplierSystem Index1Example::multiplier_system(const Eigen::VectorXd& v, const Linearization&,
                                                  const Eigen::VectorXd&) const {
  return {Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Constant(1, v[0] * v[0])};
}

Eigen::VectorXd Index1Example::group_rate(const Eigen::VectorXd& g, const Eigen::VectorXd& mu) const {
  return g.cwiseProduct(mu);
}

double Index1Example::time_rate(const Eigen::VectorXd& g) const { return g[0] * g[0]; }

DaeState Index1Example::initial_state(double v0) const {
  DaeState s;
  s.v = Eigen::VectorXd::Constant(1, v0);
  s.mu = Eigen::VectorXd::Constant(1, v0 * v0);
  s.g = Eigen::VectorXd::Ones(1);
  return s;
}

Index2Example::Index2Example() {
  Eigen::MatrixXd p(2, 2);
  p << -2.0, 1.0, 1.0, -2.0;
  p_ = dense_to_sparse(p);
  psi_ = Eigen::MatrixXd::Zero(2, 1);
  psi_(0, 0) = 1.0;
  target_ = Eigen::VectorXd::Ones(1);
}

Linearization Index2Example::linearize(const Eigen::VectorXd&) const {
  return {Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Constant(2, 1, -1.0)};
}

Eigen::VectorXd Index2Example::group_rate(const Eigen::VectorXd& g, const Eigen::VectorXd& mu) const {
  return g.cwiseProduct(mu);
}

double Index2Example::time_rate(const Eigen::VectorXd& g) const { return g[0] * g[0]; }

DaeState Index2Example::initial_state() const {
  DaeState s;
  s.v = Eigen::Vector2d(1.0, 0.0);
  s.mu = Eigen::VectorXd::Constant(1, 2.0);
  s.g = Eigen::VectorXd::Ones(1);
  return s;
}

LinearDecayExample::LinearDecayExample(double lambda)
    : lambda_(lambda), p_(dense_to_sparse(Eigen::MatrixXd::Constant(1, 1, lambda))) {}

Linearization LinearDecayExample::linearize(const Eigen::VectorXd&) const {
  return {Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Zero(1, 0)};
}

DaeState LinearDecayExample::initial_state() const {
  DaeState s;
  s.v = Eigen::VectorXd::Ones(1);
  s.mu = Eigen::VectorXd::Zero(0);
  s.g = Eigen::VectorXd::Zero(0);
  return s;
}

double fitted_slope(std::span<const double> h, std::span<const double> err) {
  if (h.size() != err.size() || h.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "slope fit needs at least two matching samples");
  }
  const double n = static_cast<double>(h.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(err[i] > 0.0) || !(h[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

DaeState integrate_fixed(const SemiExplicitDae& dae, DaeState state, double horizon, double h) {
  const long steps = std::lround(horizon / h);
  if (steps < 1 || std::abs(steps * h - horizon) > 1e-9 * horizon) {
    std::ostringstream msg;
    msg << "step size " << h << " does not divide the horizon " << horizon;
    throw Error(ErrorCode::invalid_argument, msg.str());
  }
  ImexStepper stepper(dae);
  for (long n = 0; n < steps; ++n) stepper.step(state, h);
  return state;
}

OrderStudy order_study(const SemiExplicitDae& dae, const DaeState& initial, double horizon,
                       std::span<const double> h_list, const std::optional<DaeState>& reference) {
  if (h_list.size() < 4) throw Error(ErrorCode::invalid_argument, "order study needs at least 4 step sizes");
  for (std::size_t i = 1; i < h_list.size(); ++i) {
    if (!(h_list[i] < h_list[i - 1])) throw Error(ErrorCode::invalid_argument, "step sizes must decrease");
  }
  DaeState start = initial;
  start.mu = ImexStepper(dae).consistent_multipliers(start.v);

  DaeState ref;
  if (reference) {
    ref = *reference;
  } else {
    ref = integrate_fixed(dae, start, horizon, h_list.back() / 64.0);
  }

  OrderStudy study;
  std::vector<double> hs, ev, em, eg, et;
  for (double h : h_list) {
    const DaeState end = integrate_fixed(dae, start, horizon, h);
    OrderRow row;
    row.h = h;
    row.err_v = max_diff(end.v, ref.v);
    row.err_mu = max_diff(end.mu, ref.mu);
    row.err_g = max_diff(end.g, ref.g);
    row.err_t = std::abs(end.t - ref.t);
    study.rows.push_back(row);
    hs.push_back(h);
    ev.push_back(row.err_v);
    em.push_back(row.err_mu);
    eg.push_back(row.err_g);
    et.push_back(row.err_t);
  }
  study.slope_v = fitted_slope(hs, ev);
  if (std::isnan(study.slope_v)) {
    throw Error(ErrorCode::invalid_argument, "state error does not decay; slope undefined");
  }
  study.slope_mu = fitted_slope(hs, em);
  study.slope_g = fitted_slope(hs, eg);
  study.slope_t = fitted_slope(hs, et);
  return study;
}

void write_order_table(std::ostream& out, const OrderStudy& study) {
  out << "h,err_V,err_mu,err_g,err_t\n";
  out << std::setprecision(17);
  for (const auto& r : study.rows) {
    out << r.h << ',' << r.err_v << ',' << r.err_mu << ',' << r.err_g << ',' << r.err_t << '\n';
  }
}

}  // namespace freeze
