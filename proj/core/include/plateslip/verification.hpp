#pragma once

// Post-hoc certification of computed trajectories: energy balance, sampled global
// stability, history-slip bookkeeping, Euler-Lagrange residuals, uniform convexity,
// and a brute-force global search used as ground truth on tiny problems.

#include <cstdint>
#include <string>
#include <vector>

#include "plateslip/mm_solver.hpp"

namespace plateslip {

struct EnergyBalance {
  std::vector<double> drift;       // F_eps(t^k) - F_eps(0) - W(t^k), competitor-path work
  std::vector<double> drift_left;  // same with the left-endpoint work
  double max_abs = 0.0;
  double max_upper = 0.0;          // largest signed drift (must stay below the tolerance)
  double max_abs_left = 0.0;
  double scale = 0.0;              // |F_eps(T)|
};

EnergyBalance check_energy_balance(const Trajectory& trajectory);

struct StabilityCheck {
  std::vector<double> margins;     // per step: min over competitors of F(v) - F(u)
  double min_margin = 0.0;
  int worst_step = -1;
  std::string worst_competitor;
  int competitors_per_step = 0;
};

/// Samples `count` random competitors per step (sums of nodal bumps with zero trace) plus
/// the structured ones: the trivial lift (w, w) and time-shifted states u^j + w(t^k) - w(t^j).
StabilityCheck check_global_stability(const Problem& problem, const Trajectory& trajectory, std::uint64_t seed,
                                      int count);

struct HistorySlipCheck {
  std::vector<double> gap;         // sup_x (gamma^k - running max of |u1 - u2|)
  bool monotone = true;            // gamma nondecreasing nodewise
  double max_gap = 0.0;
};

/// Throws StateCorruption if gamma is below the running max or decreases anywhere.
HistorySlipCheck check_history_slip(const Trajectory& trajectory);

/// Weak-form residual of the Euler-Lagrange system on interior dofs (Euclidean norm),
/// assembled independently of the solver's functional.
double check_el_residual(const Problem& problem, const FieldPair& u, const FEField& gamma_prev,
                         const CohesiveDensity& density, const FieldPair* alpha = nullptr);

/// Minimum of shifted_energy_gap over `count` random admissible pairs at time t.
double sample_convexity_gap(const Problem& problem, const CohesiveDensity& density, double t, const FEField& gamma,
                            double mu, int count, std::uint64_t seed);

struct OracleResult {
  Eigen::VectorXd x;               // best stacked state found
  double energy = 0.0;
  double spread = 0.0;             // max - min of converged restart energies
  int restarts = 0;
  int converged = 0;
};

/// Multi-restart damped Newton over interior dofs (<= 8) with finite-difference Hessians.
OracleResult brute_force_oracle(const Problem& problem, const CohesiveDensity& density, double t,
                                const FEField& gamma_prev, int restarts, std::uint64_t seed);

/// Joint (u, alpha) version with alpha in [alpha_prev, 1]. x = [u1; u2; alpha1; alpha2].
OracleResult brute_force_damage_oracle(const Problem& problem, const CohesiveDensity& density, double t,
                                       const FEField& gamma_prev, const FieldPair& alpha_prev, int restarts,
                                       std::uint64_t seed);

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  int competitors = 100;
  int convexity_samples = 100;
  double eb_tol = 1e-9;            // one-sided energy inequality
  double gs_tol = 1e-8;
  double el_tol = 1e-8;
  double convexity_tol = 1e-10;
};

struct StepRecord {
  int step = 0;
  double t = 0.0;
  double energy = 0.0;
  double work = 0.0;
  double drift = 0.0;
  double drift_left = 0.0;
  double gs_margin = 0.0;
  double el_residual = 0.0;
  double gamma_gap = 0.0;
};

struct CertificationReport {
  VerifyOptions options;
  double eps = 0.0;
  double tau = 0.0;
  bool hypothesis = false;         // lambda below the convexity threshold
  double korn = 0.0;
  double mu = 0.0;
  std::vector<StepRecord> steps;
  EnergyBalance balance;
  double min_gs_margin = 0.0;
  int worst_gs_step = -1;
  std::string worst_competitor;
  double max_el_residual = 0.0;
  double max_gamma_gap = 0.0;
  bool gamma_monotone = true;
  double convexity_gap = 0.0;
  bool pass_eb = false;
  bool pass_gs = false;
  bool pass_el = false;
  bool pass_gamma = false;
  bool pass_convexity = false;
  [[nodiscard]] bool pass() const { return pass_eb && pass_gs && pass_el && pass_gamma && pass_convexity; }

  /// Deterministic JSON (fixed key order, 17 significant digits).
  [[nodiscard]] std::string to_json() const;
  /// Short human-readable summary.
  [[nodiscard]] std::string summary() const;
};

CertificationReport certify(const Problem& problem, const Trajectory& trajectory, const VerifyOptions& options);

}  // namespace plateslip
