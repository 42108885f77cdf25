#pragma once

// Persistence of runs: time series CSV, field snapshots (CSV and legacy VTK), reports,
// hysteresis data, and reading a run directory back into a trajectory.

#include <stdexcept>
#include <string>

#include "plateslip/config.hpp"

namespace plateslip {

/// A run directory lacks the per-step snapshots needed for verification.
class MissingSnapshots : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// printf("%.17g"), so that values round-trip exactly.
std::string format_double(double v);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

std::string timeseries_csv(const Problem& problem, const Trajectory& trajectory);
std::string field_csv(const Problem& problem, const SystemState& state);
std::string field_vtk(const Problem& problem, const SystemState& state);

/// Node used to sample the slip-traction curve: the configured one or the node of largest final slip.
int hysteresis_probe(const RunConfig& config, const Trajectory& trajectory);
/// step, t, s(t), slip, gamma, traction, envelope psi'(slip), unloading slope psi'(gamma)/gamma.
std::string hysteresis_csv(const Problem& problem, const Trajectory& trajectory, double eps, int node);

/// Writes timeseries.csv, fields/, report.json, config_resolved.json, plots/ into `dir`.
/// gnuplot scripts are added when `gnuplot` is true.
void write_run(const std::string& dir, const RunConfig& config, const Problem& problem, const Trajectory& trajectory,
               const CertificationReport* report, bool gnuplot);

/// Rebuilds a trajectory from a run directory written by write_run. Energies are recomputed
/// from the stored fields; work columns are read from timeseries.csv.
Trajectory read_run(const std::string& dir, const RunConfig& config, const Problem& problem);

}  // namespace plateslip
