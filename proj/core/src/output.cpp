#include "plateslip/output.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "plateslip/errors.hpp"

namespace plateslip {

namespace fs = std::filesystem;

namespace {

std::string snapshot_name(int step, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "step_%04d.%s", step, ext);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

// Parses a CSV with a header row into columns keyed by name.
std::map<std::string, std::vector<double>> read_columns(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty CSV file");
  const std::vector<std::string> header = split_csv_line(line);
  std::map<std::string, std::vector<double>> cols;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw ConfigError("malformed CSV row: " + line);
    for (std::size_t i = 0; i < cells.size(); ++i) cols[header[i]].push_back(std::stod(cells[i]));
  }
  return cols;
}

const std::vector<double>& column(const std::map<std::string, std::vector<double>>& cols, const std::string& name) {
  auto it = cols.find(name);
  if (it == cols.end()) throw ConfigError("CSV column missing: " + name);
  return it->second;
}

const char* axis(int c) { return c == 0 ? "x" : "y"; }

std::string gnuplot_hysteresis() {
  return "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set xlabel 'slip |u1 - u2|'\n"
         "set ylabel 'traction'\n"
         "plot 'hysteresis.csv' using 4:6 with linespoints title 'computed', \\\n"
         "     'hysteresis.csv' using 4:7 with lines title 'envelope psi''(slip)'\n";
}

std::string gnuplot_energy() {
  return "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set xlabel 't'\n"
         "plot '../timeseries.csv' using 2:9 with lines title 'F_eps', \\\n"
         "     '../timeseries.csv' using 2:11 with lines title 'work', \\\n"
         "     '../timeseries.csv' using 2:13 with lines title 'drift'\n";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string timeseries_csv(const Problem& problem, const Trajectory& trajectory) {
  std::ostringstream os;
  os << "step,t,schedule,elastic_1,elastic_2,cohesive,damage_internal,damage_gradient,energy_eps,energy,work,"
        "work_left,drift,drift_left,gamma_max,slip_max,newton_iterations,sweeps,critical_only\n";
  if (trajectory.states.empty()) return os.str();
  const double f0 = trajectory.states.front().energy_eps;
  for (const auto& s : trajectory.states) {
    const auto& e = s.energies;
    const double fields[] = {s.t,
                             problem.loading.schedule(s.t),
                             e.elastic[0],
                             e.elastic[1],
                             e.cohesive,
                             e.damage_internal[0] + e.damage_internal[1],
                             e.damage_gradient[0] + e.damage_gradient[1],
                             s.energy_eps,
                             s.energy,
                             s.work,
                             s.work_left,
                             s.energy_eps - f0 - s.work,
                             s.energy_eps - f0 - s.work_left,
                             max_norm(s.gamma),
                             max_norm(slip_magnitude(s.u))};
    os << s.step;
    for (double v : fields) os << ',' << format_double(v);
    os << ',' << s.newton_iterations << ',' << s.sweeps << ',' << (s.critical_only ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string field_csv(const Problem& problem, const SystemState& s) {
  const FESpace& space = *problem.space;
  const int n = space.dim();
  std::ostringstream os;
  os << "node,x,y";
  for (int i = 0; i < 2; ++i) {
    for (int c = 0; c < n; ++c) os << ",u" << i + 1 << '_' << axis(c);
  }
  os << ",gamma,slip";
  if (s.alpha) os << ",alpha_1,alpha_2";
  os << '\n';
  const FEField slip = slip_magnitude(s.u);
  for (int a = 0; a < space.num_nodes(); ++a) {
    os << a << ',' << format_double(space.vertex(a)[0]) << ',' << format_double(space.vertex(a)[1]);
    for (int i = 0; i < 2; ++i) {
      for (int c = 0; c < n; ++c) os << ',' << format_double(s.u[i].at(a, c));
    }
    os << ',' << format_double(s.gamma.at(a)) << ',' << format_double(slip.at(a));
    if (s.alpha) os << ',' << format_double((*s.alpha)[0].at(a)) << ',' << format_double((*s.alpha)[1].at(a));
    os << '\n';
  }
  return os.str();
}

std::string field_vtk(const Problem& problem, const SystemState& s) {
  const FESpace& space = *problem.space;
  const int n = space.dim();
  std::ostringstream os;
  os << "# vtk DataFile Version 3.0\n"
     << "plateslip step " << s.step << " t=" << format_double(s.t) << "\n"
     << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << space.num_nodes() << " double\n";
  for (int a = 0; a < space.num_nodes(); ++a) {
    os << format_double(space.vertex(a)[0]) << ' ' << format_double(space.vertex(a)[1]) << " 0\n";
  }
  const int per_cell = n + 1;
  os << "CELLS " << space.num_cells() << ' ' << space.num_cells() * (per_cell + 1) << '\n';
  for (int c = 0; c < space.num_cells(); ++c) {
    os << per_cell;
    for (int v : space.cell_nodes(c)) os << ' ' << v;
    os << '\n';
  }
  os << "CELL_TYPES " << space.num_cells() << '\n';
  for (int c = 0; c < space.num_cells(); ++c) os << (n == 2 ? 5 : 3) << '\n';
  os << "POINT_DATA " << space.num_nodes() << '\n';
  for (int i = 0; i < 2; ++i) {
    os << "VECTORS u" << i + 1 << " double\n";
    for (int a = 0; a < space.num_nodes(); ++a) {
      os << format_double(s.u[i].at(a, 0)) << ' ' << format_double(n == 2 ? s.u[i].at(a, 1) : 0.0) << " 0\n";
    }
  }
  auto scalars = [&](const char* name, const FEField& f) {
    os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int a = 0; a < space.num_nodes(); ++a) os << format_double(f.at(a)) << '\n';
  };
  scalars("gamma", s.gamma);
  scalars("slip", slip_magnitude(s.u));
  if (s.alpha) {
    scalars("alpha_1", (*s.alpha)[0]);
    scalars("alpha_2", (*s.alpha)[1]);
  }
  return os.str();
}

int hysteresis_probe(const RunConfig& config, const Trajectory& trajectory) {
  if (config.output.probe_node) return *config.output.probe_node;
  if (trajectory.states.empty()) return 0;
  const FEField& gamma = trajectory.states.back().gamma;
  int best = 0;
  for (int a = 1; a < gamma.num_nodes(); ++a) {
    if (gamma.at(a) > gamma.at(best)) best = a;
  }
  return best;
}

std::string hysteresis_csv(const Problem& problem, const Trajectory& trajectory, double eps, int node) {
  const CohesiveDensity density(problem.law, eps);
  std::ostringstream os;
  os << "step,t,schedule,slip,gamma,traction,envelope,unloading_slope\n";
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    const SystemState& s = trajectory.states[k];
    const double slip = (s.u[0].node_value(node) - s.u[1].node_value(node)).norm();
    const double gamma = s.gamma.at(node);
    const double traction = density.dy(slip, gamma);
    const double envelope = density.dy(slip, slip);
    const double slope = gamma > 0.0 ? density.dy(gamma, gamma) / gamma : 0.0;
    os << s.step << ',' << format_double(s.t) << ',' << format_double(problem.loading.schedule(s.t)) << ','
       << format_double(slip) << ',' << format_double(gamma) << ',' << format_double(traction) << ','
       << format_double(envelope) << ',' << format_double(slope) << '\n';
  }
  return os.str();
}

void write_run(const std::string& dir, const RunConfig& config, const Problem& problem, const Trajectory& trajectory,
               const CertificationReport* report, bool gnuplot) {
  fs::create_directories(fs::path(dir) / "fields");
  fs::create_directories(fs::path(dir) / "plots");
  write_text((fs::path(dir) / "timeseries.csv").string(), timeseries_csv(problem, trajectory));
  write_text((fs::path(dir) / "config_resolved.json").string(),
             resolved_config_json(config, trajectory.diagnostics));
  for (const auto& s : trajectory.states) {
    if (s.step % config.output.every_k != 0) continue;
    if (config.output.csv) {
      write_text((fs::path(dir) / "fields" / snapshot_name(s.step, "csv")).string(), field_csv(problem, s));
    }
    if (config.output.vtk) {
      write_text((fs::path(dir) / "fields" / snapshot_name(s.step, "vtk")).string(), field_vtk(problem, s));
    }
  }
  const int probe = hysteresis_probe(config, trajectory);
  write_text((fs::path(dir) / "plots" / "hysteresis.csv").string(),
             hysteresis_csv(problem, trajectory, config.solver.eps, probe));
  if (gnuplot) {
    write_text((fs::path(dir) / "plots" / "hysteresis.gp").string(), gnuplot_hysteresis());
    write_text((fs::path(dir) / "plots" / "energy.gp").string(), gnuplot_energy());
  }
  if (report) write_text((fs::path(dir) / "report.json").string(), report->to_json());
}

Trajectory read_run(const std::string& dir, const RunConfig& config, const Problem& problem) {
  const fs::path root(dir);
  if (!fs::exists(root / "timeseries.csv")) throw MissingSnapshots("no timeseries.csv in " + dir);
  const auto ts = read_columns(read_text((root / "timeseries.csv").string()));
  const auto& steps = column(ts, "step");
  const auto& times = column(ts, "t");
  const auto& work = column(ts, "work");
  const auto& work_left = column(ts, "work_left");
  const auto& newton = column(ts, "newton_iterations");
  const auto& sweeps = column(ts, "sweeps");
  const auto& critical = column(ts, "critical_only");

  Trajectory tr;
  tr.eps = config.solver.eps;
  tr.tau = config.solver.tau;
  tr.diagnostics = compute_diagnostics(problem, config.solver);
  const SpacePtr& space = problem.space;
  const int n = problem.dim();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const int step = static_cast<int>(steps[k]);
    const fs::path file = root / "fields" / snapshot_name(step, "csv");
    if (!fs::exists(file)) {
      throw MissingSnapshots("missing field snapshot " + file.string() +
                             " (history-slip verification needs a snapshot at every step, output.every_k = 1)");
    }
    const auto cols = read_columns(read_text(file.string()));
    if (column(cols, "node").size() != static_cast<std::size_t>(space->num_nodes())) {
      throw ConfigError("snapshot " + file.string() + " does not match the configured mesh");
    }
    SystemState s;
    s.step = step;
    s.t = times[k];
    s.work = work[k];
    s.work_left = work_left[k];
    s.newton_iterations = static_cast<int>(newton[k]);
    s.sweeps = static_cast<int>(sweeps[k]);
    s.critical_only = critical[k] != 0.0;
    s.u = zero_pair(space, n);
    for (int i = 0; i < 2; ++i) {
      for (int c = 0; c < n; ++c) {
        const auto& v = column(cols, "u" + std::to_string(i + 1) + "_" + axis(c));
        for (int a = 0; a < space->num_nodes(); ++a) s.u[i].at(a, c) = v[static_cast<std::size_t>(a)];
      }
    }
    s.gamma = FEField(space, 1);
    const auto& g = column(cols, "gamma");
    for (int a = 0; a < space->num_nodes(); ++a) s.gamma.at(a) = g[static_cast<std::size_t>(a)];
    if (cols.count("alpha_1")) {
      FieldPair alpha = zero_pair(space, 1);
      for (int i = 0; i < 2; ++i) {
        const auto& v = column(cols, "alpha_" + std::to_string(i + 1));
        for (int a = 0; a < space->num_nodes(); ++a) alpha[i].at(a) = v[static_cast<std::size_t>(a)];
      }
      s.alpha = alpha;
    }
    record_state_energies(problem, tr.eps, s);
    tr.states.push_back(std::move(s));
  }
  tr.complete = !tr.states.empty() && tr.states.back().step == config.solver.steps(problem.loading.horizon());
  return tr;
}

}  // namespace plateslip
