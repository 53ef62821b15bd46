// Command-line driver for the freezing experiments.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "freeze/error.hpp"
#include "freeze/experiments/experiments.hpp"

namespace fs = std::filesystem;
using namespace freeze;

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> out;
  std::optional<double> nu, cfl, theta, tau_end, p;
  std::optional<int> dim;
  std::vector<int> nx;
  std::optional<std::string> phase;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "key=value configuration file")->check(CLI::ExistingFile);
  app->add_option("--out", o.out, "output directory");
  app->add_option("--nu", o.nu, "viscosity");
  app->add_option("--dim", o.dim, "space dimension (1 or 2)");
  app->add_option("--nx", o.nx, "cells per axis, boundary cells included")->expected(1, 2);
  app->add_option("--cfl", o.cfl, "CFL number");
  app->add_option("--theta", o.theta, "minmod parameter in [1, 2]");
  app->add_option("--phase", o.phase, "phase condition")->check(CLI::IsMember({"orth", "fixed", "none"}));
  app->add_option("--tau-end", o.tau_end, "final frozen time");
  app->add_option("--p", o.p, "flux exponent");
}

RunConfig resolve(const Overrides& o, double default_tau_end) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.config.empty()) c.tau_end = default_tau_end;
  if (o.dim) {
    c.dim = *o.dim;
    if (o.config.empty() && c.dim == 2) c.initial = InitialCondition::bump_2d;
  }
  if (o.out) c.output = *o.out;
  if (o.nu) c.nu = *o.nu;
  if (o.cfl) c.cfl = *o.cfl;
  if (o.theta) c.theta = *o.theta;
  if (o.tau_end) c.tau_end = *o.tau_end;
  if (o.p) c.p = *o.p;
  if (!o.nx.empty()) c.cells = {o.nx.front(), o.nx.back()};
  if (o.phase) apply_setting(c, "phase", *o.phase);
  validate(c);
  return c;
}

void print_study(const std::string& name, const OrderStudy& s) {
  std::cout << name << ": slopes V " << s.slope_v << ", mu " << s.slope_mu << ", g " << s.slope_g << ", t "
            << s.slope_t << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Freezing method for Burgers' equation"};
  app.require_subcommand(1);
  Overrides run_o, conv_o, cfl_o, dae_o;

  auto* run = app.add_subcommand("run", "long-time freezing run with series and snapshots");
  add_common(run, run_o);
  auto* conv = app.add_subcommand("converge", "spatial convergence study against a refined reference");
  add_common(conv, conv_o);
  auto* cfl = app.add_subcommand("cfl-demo", "oscillation history for a given CFL number");
  add_common(cfl, cfl_o);
  auto* dae = app.add_subcommand("dae-order", "temporal order on manufactured DAEs");
  dae->add_option("--out", dae_o.out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const RunConfig c = resolve(run_o, 10.0);
      const RunSummary s = run_experiment(c);
      const auto& st = s.result.state;
      std::cout << "steps " << s.result.steps << (s.result.stationary ? " (stationary)" : "") << "\ntau "
                << st.tau << "\nt " << st.t << "\nalpha " << st.alpha << "\nb " << st.b.transpose() << "\nmu "
                << st.mu.transpose() << "\nsnapshots " << s.snapshots.size() << " in " << c.output << '\n';
    } else if (*conv) {
      RunConfig c = resolve(conv_o, 1.0);
      if (c.grids.empty()) c.grids = {0.2, 0.1, 0.05, 0.025};
      const ConvergenceStudy s = convergence_study(c);
      fs::create_directories(c.output);
      std::ofstream out = open_output(fs::path(c.output) / "convergence.csv");
      write_convergence_table(out, s);
      write_convergence_table(std::cout, s);
      if (!s.failure.empty()) std::cout << "failed: " << s.failure << '\n';
      std::cout << "slopes v " << s.slope_v << ", mu " << s.slope_mu << ", t " << s.slope_t << ", alpha/b "
                << s.slope_group << '\n';
    } else if (*cfl) {
      const RunConfig c = resolve(cfl_o, 1.0);
      const CflReport r = cfl_violation_demo(c);
      fs::create_directories(c.output);
      std::ofstream out = open_output(fs::path(c.output) / "cfl.csv");
      out << "tau,oscillations,max_norm,physical_max_norm\n";
      for (std::size_t i = 0; i < r.tau.size(); ++i) {
        out << format_double(r.tau[i]) << ',' << r.oscillations[i] << ',' << format_double(r.max_norm[i]) << ','
            << format_double(r.physical_max_norm[i]) << '\n';
      }
      std::cout << "steps " << r.tau.size() - 1 << "\ninitial oscillations " << r.initial_oscillations
                << "\nfinal oscillations " << r.oscillations.back() << "\nfinal max-norm " << r.max_norm.back()
                << "\nfinal physical max-norm " << r.physical_max_norm.back()
                << '\n';
      if (r.aborted) std::cout << "aborted: " << r.abort_reason << '\n';
    } else if (*dae) {
      const DaeOrderReport r = dae_order_studies();
      const fs::path dir(dae_o.out.value_or("out"));
      fs::create_directories(dir);
      std::ofstream o1 = open_output(dir / "dae_order_index1.csv");
      write_order_table(o1, r.index1);
      std::ofstream o2 = open_output(dir / "dae_order_index2.csv");
      write_order_table(o2, r.index2);
      std::ofstream o3 = open_output(dir / "dae_order_linear.csv");
      write_order_table(o3, r.linear);
      print_study("index 1", r.index1);
      print_study("index 2", r.index2);
      std::cout << "linear: slope V " << r.linear.slope_v << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
