#include "plateslip_cli/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "plateslip/config.hpp"
#include "plateslip/errors.hpp"
#include "plateslip/output.hpp"

namespace plateslip::cli {

namespace fs = std::filesystem;

namespace {

bool plots_requested() {
  const char* v = std::getenv("PLOTS");
  return v != nullptr && std::string(v) == "1";
}

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Trajectory run(const RunConfig& config, const Problem& problem) {
  const FieldPair u0 = initial_displacement(config, problem);
  if (config.damage.enabled) return evolve_damage(problem, config.solver, initial_damage(config, problem), u0);
  return evolve(problem, config.solver, u0);
}

void print_warnings(const Trajectory& tr) {
  for (const auto& w : tr.warnings) std::cerr << "warning: " << w << "\n";
}

struct SimulateArgs {
  std::string config;
  std::string out;
  std::optional<double> tau;
  std::optional<double> eps;
  bool damage = false;
};

int simulate(const SimulateArgs& a) {
  RunConfig config = load_config(a.config);
  if (a.tau) config.solver.tau = *a.tau;
  if (a.eps) {
    config.solver.eps = *a.eps;
    config.eps_from_default = false;
  }
  if (a.damage) {
    config.damage.enabled = true;
    config.solver.damage = true;
  }
  validate_config(config);
  const Problem problem = build_problem(config);
  const Trajectory tr = run(config, problem);
  print_warnings(tr);
  if (!tr.complete) {
    write_run(a.out, config, problem, tr, nullptr, plots_requested());
    std::cerr << "step " << tr.failed_step << " failed: " << tr.failure << "\n";
    return kStepFailure;
  }
  const CertificationReport report = certify(problem, tr, config.verify);
  write_run(a.out, config, problem, tr, &report, plots_requested());
  std::cout << "wrote " << tr.states.size() << " states to " << a.out << "\n" << report.summary();
  return kOk;
}

struct VerifyArgs {
  std::string dir;
  std::string out;
  std::optional<int> competitors;
  std::optional<std::uint64_t> seed;
};

int verify(const VerifyArgs& a) {
  const fs::path dir(a.dir);
  const fs::path resolved = dir / "config_resolved.json";
  if (!fs::exists(resolved)) throw MissingSnapshots("no config_resolved.json in " + a.dir);
  RunConfig config = load_config(resolved.string());
  if (config.output.every_k != 1) {
    throw MissingSnapshots("run was written with output.every_k = " + std::to_string(config.output.every_k) +
                           "; history-slip verification needs a snapshot at every step");
  }
  if (a.competitors) config.verify.competitors = *a.competitors;
  if (a.seed) config.verify.seed = *a.seed;
  const Problem problem = build_problem(config);
  const Trajectory tr = read_run(a.dir, config, problem);
  const CertificationReport report = certify(problem, tr, config.verify);
  const std::string out = a.out.empty() ? (dir / "report_verify.json").string() : a.out;
  write_text(out, report.to_json());
  std::cout << report.summary();
  return report.pass() ? kOk : kCertificationFailed;
}

struct StudyArgs {
  std::string config;
  std::string ladder;
  std::string out;
};

double holder_max(const Trajectory& tr) {
  double h = 0.0;
  for (const auto& s : tr.states) {
    h = std::max(h, holder_seminorm(s.gamma, 0.5, s.gamma.space().interior_subdomain()));
  }
  return h;
}

int study(const StudyArgs& a) {
  RunConfig config = load_config(a.config);
  const Problem problem = build_problem(config);
  fs::create_directories(a.out);
  std::ostringstream table;
  std::ostringstream summary;
  if (a.ladder == "tau") {
    const double tau0 = config.solver.tau;
    std::vector<double> taus{2.0 * tau0, tau0, 0.5 * tau0};
    std::vector<double> drifts;
    table << "rung,tau,max_abs_drift,relative_drift,max_upper_drift,max_abs_drift_left,gamma_holder\n";
    for (std::size_t r = 0; r < taus.size(); ++r) {
      RunConfig c = config;
      c.solver.tau = taus[r];
      validate_config(c);
      const Trajectory tr = run(c, problem);
      if (!tr.complete) {
        std::cerr << "tau = " << taus[r] << ": step " << tr.failed_step << " failed: " << tr.failure << "\n";
        return kStepFailure;
      }
      const EnergyBalance eb = check_energy_balance(tr);
      drifts.push_back(eb.max_abs);
      table << r << ',' << format_double(taus[r]) << ',' << format_double(eb.max_abs) << ','
            << format_double(eb.scale > 0.0 ? eb.max_abs / eb.scale : 0.0) << ',' << format_double(eb.max_upper)
            << ',' << format_double(eb.max_abs_left) << ',' << format_double(holder_max(tr)) << '\n';
    }
    const bool flat = drifts.front() == 0.0 || drifts.back() == 0.0;
    const double slope = flat ? 0.0 : loglog_slope(taus, drifts);
    summary << "{\n  \"ladder\": \"tau\",\n  \"slope\": " << (flat ? "null" : format_double(slope))
            << ",\n  \"slope_at_least_0.9\": " << (!flat && slope >= 0.9 ? "true" : "false") << "\n}\n";
    std::cout << "tau ladder drift slope " << (flat ? std::string("n/a (zero drift)") : format_double(slope))
              << "\n";
  } else if (a.ladder == "eps") {
    const double e0 = config.solver.eps;
    const EpsLadder ladder = eps_continuation(problem, config.solver, {e0, e0 / 3.0, e0 / 9.0});
    table << "rung,eps,max_gap,gap_bound,max_h1_diff_to_next\n";
    bool decreasing = true;
    for (std::size_t r = 0; r < ladder.eps.size(); ++r) {
      double gap = 0.0;
      for (double g : ladder.gaps[r]) gap = std::max(gap, g);
      double diff = 0.0;
      if (r < ladder.diffs.size()) {
        for (double d : ladder.diffs[r]) diff = std::max(diff, d);
      }
      table << r << ',' << format_double(ladder.eps[r]) << ',' << format_double(gap) << ','
            << format_double(ladder.bounds[r]) << ',' << (r < ladder.diffs.size() ? format_double(diff) : "")
            << '\n';
    }
    for (std::size_t k = 0; k < ladder.diffs[0].size(); ++k) {
      if (ladder.diffs[0][k] > 0.0 && !(ladder.diffs[1][k] < ladder.diffs[0][k])) decreasing = false;
    }
    summary << "{\n  \"ladder\": \"eps\",\n  \"diffs_strictly_decreasing\": " << (decreasing ? "true" : "false")
            << "\n}\n";
    std::cout << "eps ladder differences " << (decreasing ? "decrease" : "do not decrease") << " down the ladder\n";
  } else {
    throw ConfigError("--ladder must be tau or eps");
  }
  write_text((fs::path(a.out) / "rates.csv").string(), table.str());
  write_text((fs::path(a.out) / "study.json").string(), summary.str());
  std::cout << table.str();
  return kOk;
}

struct LawArgs {
  std::string config;
  std::string out;
  int grid = 100;
  std::optional<double> eps;
};

int law_dump(const LawArgs& a) {
  const RunConfig config = load_config(a.config);
  if (a.grid < 2) throw ConfigError("--grid must be at least 2");
  const CohesiveLaw law = make_law(config.law);
  const double eps = a.eps.value_or(config.solver.eps);
  const CohesiveDensity plain(law);
  const CohesiveDensity reg(law, eps);
  const double ymax = 4.0 * law.slip_scale();
  std::ostringstream os;
  os << "y,z,phi,phi_eps,dphi_dy,dphi_eps_dy\n";
  for (int i = 0; i < a.grid; ++i) {
    const double z = ymax * i / (a.grid - 1);
    for (int j = 0; j < a.grid; ++j) {
      const double y = ymax * j / (a.grid - 1);
      os << format_double(y) << ',' << format_double(z) << ',' << format_double(plain.value(y, z)) << ','
         << format_double(reg.value(y, z)) << ',' << format_double(plain.dy(y, z)) << ','
         << format_double(reg.dy(y, z)) << '\n';
    }
  }
  if (a.out.empty()) {
    std::cout << os.str();
  } else {
    write_text(a.out, os.str());
  }
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"plateslip: cohesive two-plate evolution and certification"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* cmd_sim = app.add_subcommand("simulate", "Run the minimizing-movements scheme");
  cmd_sim->add_option("--config", sim.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd_sim->add_option("--out", sim.out, "Output directory")->required();
  cmd_sim->add_option("--tau", sim.tau, "Time step override");
  cmd_sim->add_option("--eps", sim.eps, "Regularization override");
  cmd_sim->add_flag("--damage", sim.damage, "Enable the gradient-damage model");

  VerifyArgs ver;
  auto* cmd_ver = app.add_subcommand("verify", "Regenerate the certification report of a run directory");
  cmd_ver->add_option("--trajectory", ver.dir, "Run directory written by simulate")->required();
  cmd_ver->add_option("--competitors", ver.competitors, "Random competitors per step");
  cmd_ver->add_option("--seed", ver.seed, "Sampler seed");
  cmd_ver->add_option("--out", ver.out, "Report path (default: DIR/report_verify.json)");

  StudyArgs stu;
  auto* cmd_stu = app.add_subcommand("study", "Refinement study over a tau or eps ladder");
  cmd_stu->add_option("--config", stu.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd_stu->add_option("--ladder", stu.ladder, "tau or eps")->required()->check(CLI::IsMember({"tau", "eps"}));
  cmd_stu->add_option("--out", stu.out, "Output directory")->required();

  LawArgs law;
  auto* cmd_law = app.add_subcommand("law", "Cohesive law utilities");
  cmd_law->require_subcommand(1);
  auto* cmd_dump = cmd_law->add_subcommand("dump", "Tabulate Phi, Phi_eps and d/dy on a grid");
  cmd_dump->add_option("--config", law.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd_dump->add_option("--grid", law.grid, "Grid points per axis");
  cmd_dump->add_option("--eps", law.eps, "Regularization (default: the configured eps)");
  cmd_dump->add_option("--out", law.out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (cmd_sim->parsed()) return simulate(sim);
    if (cmd_ver->parsed()) return verify(ver);
    if (cmd_stu->parsed()) return study(stu);
    if (cmd_dump->parsed()) return law_dump(law);
  } catch (const MissingSnapshots& e) {
    std::cerr << "missing snapshots: " << e.what() << "\n";
    return kMissingSnapshots;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const StateCorruption& e) {
    std::cerr << e.what() << "\n";
    return kCertificationFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kStepFailure;
  }
  return kOk;
}

}  // namespace plateslip::cli
