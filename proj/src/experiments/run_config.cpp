#include "freeze/experiments/run_config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "freeze/error.hpp"
#include "freeze/experiments/expression.hpp"

namespace freeze {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(value.substr(used)).size() > 0) {
    throw Error(ErrorCode::config, key + ": expected a number, got '" + value + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw Error(ErrorCode::config, key + ": expected an integer");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error(ErrorCode::config, key + ": expected true or false, got '" + value + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw Error(ErrorCode::config, key + ": empty list");
  return out;
}

Interval to_interval(const std::string& key, const std::string& value) {
  const auto v = to_list(key, value);
  if (v.size() != 2) throw Error(ErrorCode::config, key + ": expected lower,upper");
  return {v[0], v[1]};
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "dim") {
    c.dim = to_int(key, value);
  } else if (key == "nu") {
    c.nu = to_double(key, value);
  } else if (key == "p") {
    c.p = to_double(key, value);
  } else if (key == "direction") {
    c.direction = to_list(key, value);
  } else if (key == "domain") {
    c.domain[0] = to_interval(key, value);
    c.domain[1] = c.domain[0];
  } else if (key == "domain_x") {
    c.domain[0] = to_interval(key, value);
  } else if (key == "domain_y") {
    c.domain[1] = to_interval(key, value);
  } else if (key == "cells") {
    const auto v = to_list(key, value);
    if (v.size() > 2) throw Error(ErrorCode::config, "cells: at most two entries");
    for (double n : v) {
      if (n != std::floor(n) || n < 0 || n > 1e8) throw Error(ErrorCode::config, "cells: expected integers");
    }
    c.cells[0] = static_cast<int>(v[0]);
    c.cells[1] = static_cast<int>(v.back());
  } else if (key == "phase") {
    if (value == "orth" || value == "orthogonal") {
      c.phase = PhaseCondition::orthogonal;
    } else if (value == "fixed") {
      c.phase = PhaseCondition::fixed;
    } else if (value == "none") {
      c.phase = PhaseCondition::none;
    } else {
      throw Error(ErrorCode::config, "phase: expected orth, fixed or none");
    }
  } else if (key == "initial") {
    if (value == "bump-1d") {
      c.initial = InitialCondition::bump_1d;
    } else if (value == "bump-2d") {
      c.initial = InitialCondition::bump_2d;
    } else if (value == "expression") {
      c.initial = InitialCondition::expression;
    } else {
      throw Error(ErrorCode::config, "initial: expected bump-1d, bump-2d or expression");
    }
  } else if (key == "expression") {
    c.expression = value;
    Expression::parse(value);
  } else if (key == "tau_end") {
    c.tau_end = to_double(key, value);
  } else if (key == "cfl") {
    c.cfl = to_double(key, value);
  } else if (key == "theta") {
    c.theta = to_double(key, value);
  } else if (key == "output") {
    c.output = value;
  } else if (key == "snapshots") {
    c.snapshots = to_int(key, value);
  } else if (key == "stop_on_stationary") {
    c.stop_on_stationary = to_bool(key, value);
  } else if (key == "grids") {
    c.grids = to_list(key, value);
  } else if (key == "reference_refinement") {
    c.reference_refinement = to_int(key, value);
  } else if (key == "v_error") {
    if (value == "squared") {
      c.squared_v_error = true;
    } else if (value == "l2") {
      c.squared_v_error = false;
    } else {
      throw Error(ErrorCode::config, "v_error: expected squared or l2");
    }
  } else {
    throw Error(ErrorCode::config, "unknown key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    try {
      if (eq == std::string::npos) throw Error(ErrorCode::config, "expected key=value");
      apply_setting(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << source << ":" << number << ": " << e.what();
      throw Error(ErrorCode::config, msg.str());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open config file " + path);
  return parse_config(in, path);
}

void validate(const RunConfig& c) {
  if (c.dim != 1 && c.dim != 2) throw Error(ErrorCode::config, "dim must be 1 or 2");
  if (!c.direction.empty() && static_cast<int>(c.direction.size()) != c.dim) {
    throw Error(ErrorCode::config, "direction needs one entry per axis");
  }
  if (c.initial == InitialCondition::expression && c.expression.empty()) {
    throw Error(ErrorCode::config, "initial=expression needs an expression");
  }
  if (c.initial == InitialCondition::bump_2d && c.dim != 2) {
    throw Error(ErrorCode::config, "bump-2d initial data needs dim=2");
  }
  if (!(c.tau_end >= 0.0)) throw Error(ErrorCode::config, "tau_end must be >= 0");
  if (!(c.nu >= 0.0)) throw Error(ErrorCode::config, "nu must be >= 0");
  if (!(c.theta >= 1.0 && c.theta <= 2.0)) throw Error(ErrorCode::config, "theta must lie in [1, 2]");
  if (c.p && !(*c.p > 1.0)) throw Error(ErrorCode::config, "p must be > 1");
  if (c.cfl && !(*c.cfl > 0.0)) throw Error(ErrorCode::config, "cfl must be > 0");
  if (c.snapshots < 1) throw Error(ErrorCode::config, "snapshots must be >= 1");
  if (c.reference_refinement < 2) throw Error(ErrorCode::config, "reference_refinement must be >= 2");
  for (int j = 0; j < c.dim; ++j) {
    if (c.cells[j] < 6) throw Error(ErrorCode::config, "need at least 6 cells per axis");
  }
}

FreezingProblem make_problem(const RunConfig& c) {
  validate(c);
  FreezingProblem pr;
  pr.grid = build_grid(c.dim, c.domain, {c.cells[0] - 2, c.dim == 2 ? c.cells[1] - 2 : 0});
  pr.nu = c.nu;
  pr.p = c.resolved_p();
  pr.direction = c.direction.empty() ? std::vector<double>(c.dim, 1.0) : c.direction;
  pr.limiter.theta = c.theta;
  pr.phase = c.phase;
  pr.cfl = c.resolved_cfl();
  return pr;
}

double bump_profile_1d(double x) {
  constexpr double pi = std::numbers::pi;
  if (x >= -pi / 2 && x < 0.0) return std::sin(2.0 * x);
  if (x >= 0.0 && x <= pi) return std::sin(x);
  return 0.0;
}

double bump_profile_2d(double x, double y) {
  constexpr double pi = std::numbers::pi;
  if (!(y > -pi / 2 && y < pi / 2)) return 0.0;
  return std::cos(y) * bump_profile_1d(x);
}

CellField initial_field(const RunConfig& c, const Grid& grid) {
  switch (c.initial) {
    case InitialCondition::bump_1d:
      return cell_average_init(grid, [](const Point& xi) { return bump_profile_1d(xi[0]); });
    case InitialCondition::bump_2d:
      return cell_average_init(grid, [](const Point& xi) { return bump_profile_2d(xi[0], xi[1]); });
    case InitialCondition::expression: {
      const Expression e = Expression::parse(c.expression);
      return cell_average_init(grid, [&e](const Point& xi) { return e(xi); });
    }
  }
  throw Error(ErrorCode::config, "unknown initial condition");
}

}  // namespace freeze
