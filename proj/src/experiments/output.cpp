#include "freeze/experiments/output.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "freeze/error.hpp"

namespace freeze {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_series_header(std::ostream& out, int dim) {
  out << "step,tau,dtau,t,alpha";
  for (int j = 1; j <= dim; ++j) out << ",b" << j;
  for (int j = 1; j <= dim + 1; ++j) out << ",mu" << j;
  out << ",res_phase,mass,rhs_norm,wave_speed\n";
}

void write_series_row(std::ostream& out, const StepRecord& r) {
  out << r.step << ',' << format_double(r.tau) << ',' << format_double(r.dtau) << ',' << format_double(r.t) << ','
      << format_double(r.alpha);
  for (Eigen::Index j = 0; j < r.b.size(); ++j) out << ',' << format_double(r.b[j]);
  for (Eigen::Index j = 0; j < r.mu.size(); ++j) out << ',' << format_double(r.mu[j]);
  out << ',' << format_double(r.phase_residual) << ',' << format_double(r.mass) << ','
      << format_double(r.rhs_norm) << ',' << format_double(r.wave_speed) << '\n';
}

void write_snapshot(std::ostream& out, const CellField& field) {
  const Grid& g = field.grid;
  out << (g.dim() == 1 ? "xi,v\n" : "xi1,xi2,v\n");
  for (std::ptrdiff_t k = 0; k < g.size(); ++k) {
    const Point x = g.center_point(k);
    out << format_double(x[0]) << ',';
    if (g.dim() == 2) out << format_double(x[1]) << ',';
    out << format_double(field.values[k]) << '\n';
  }
}

void write_manifest(std::ostream& out, const std::vector<SnapshotEntry>& entries) {
  out << "index,step,tau,t,file\n";
  for (const auto& e : entries) {
    out << e.index << ',' << e.step << ',' << format_double(e.tau) << ',' << format_double(e.t) << ',' << e.file
        << '\n';
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  return out;
}

}  // namespace freeze
