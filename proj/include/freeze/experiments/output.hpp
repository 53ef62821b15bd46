#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "freeze/freezing_integrator.hpp"
#include "freeze/mesh.hpp"

namespace freeze {

/// Writes doubles with 17 significant digits so a parse round-trips bitwise.
std::string format_double(double v);

/// Header: step,tau,dtau,t,alpha,b1[,b2],mu1,mu2[,mu3],res_phase,mass,rhs_norm,wave_speed
void write_series_header(std::ostream& out, int dim);
void write_series_row(std::ostream& out, const StepRecord& record);

/// 1D rows "xi,v"; 2D rows "xi1,xi2,v".
void write_snapshot(std::ostream& out, const CellField& field);

struct SnapshotEntry {
  int index = 0;
  long step = 0;
  double tau = 0.0;
  double t = 0.0;
  std::string file;
};

/// index,step,tau,t,file
void write_manifest(std::ostream& out, const std::vector<SnapshotEntry>& entries);

/// Opens `path` for writing or throws io naming the path.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace freeze
