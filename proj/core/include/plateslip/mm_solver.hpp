#pragma once

// Minimizing-movements evolution: at every time step minimize F_eps(t^k, ., gamma^{k-1})
// over displacement pairs with the Dirichlet trace w(t^k), then update the history slip
// gamma^k = max(gamma^{k-1}, |u1^k - u2^k|) node by node.

#include <optional>
#include <string>
#include <vector>

#include "plateslip/energies.hpp"

namespace plateslip {

struct SolverConfig {
  double tau = 1.0 / 64.0;
  double eps = 0.05;
  double inner_tol = 1e-10;       // gradient norm on interior dofs
  int max_newton = 100;
  int max_gradient_steps = 20000;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
  int max_sweeps = 200;           // alternate minimization (damage)
  double sweep_tol = 1e-13;       // combined energy decrease per sweep, relative
  double initial_tol = 1e-9;      // admissible energy improvement of the initial datum
  bool adopt_initial = true;      // replace a non-minimizing u0 by the minimizer
  bool damage = false;

  void validate(double horizon) const;
  [[nodiscard]] int steps(double horizon) const;
};

struct SystemState {
  int step = 0;
  double t = 0.0;
  FieldPair u;
  FEField gamma;
  std::optional<FieldPair> alpha;
  EnergyBreakdown energies;        // regularized density, gamma^k
  double energy_eps = 0.0;         // F_eps(t^k, u^k, gamma^k)
  double energy = 0.0;             // unregularized F(t^k, u^k, gamma^k)
  double work = 0.0;               // accumulated along the competitor path
  double work_left = 0.0;          // accumulated with the left-endpoint rule
  int newton_iterations = 0;
  int sweeps = 0;
  bool critical_only = false;      // damage sweep limit hit
};

struct InnerResult {
  Eigen::VectorXd x;
  double energy = 0.0;
  double grad_norm = 0.0;
  int newton_iterations = 0;
  int gradient_steps = 0;
  bool converged = false;
};

/// Problem-level constants computed once per run.
struct RunDiagnostics {
  double korn = 0.0;
  double mu = 0.0;                 // convexity modulus (c1 ^ c2)/K^2 - 2 lambda
  std::array<double, 2> coercivity{0.0, 0.0};
  double lambda_threshold = 0.0;   // (c1 ^ c2) / (2 K^2)
  bool certified = false;          // lambda below the threshold
  AprioriBound apriori;
};

struct Trajectory {
  std::vector<SystemState> states;
  RunDiagnostics diagnostics;
  double eps = 0.0;
  double tau = 0.0;
  bool initial_adopted = false;
  double initial_improvement = 0.0;
  bool complete = false;
  int failed_step = -1;
  std::string failure;
  std::vector<std::string> warnings;
};

/// Minimizer of `functional` over vectors agreeing with `start` on the Dirichlet dofs.
/// Damped Newton with Armijo backtracking, falling back to gradient descent.
InnerResult inner_minimize(const DisplacementFunctional& functional, const Eigen::VectorXd& start,
                           const std::vector<int>& free_dofs, const SolverConfig& config);

/// Interior dofs of a stacked pair (both layers).
std::vector<int> free_pair_dofs(const FESpace& space, int components);

/// One step of the scheme at time t: lift `warm` to the trace w(t) and minimize.
InnerResult solve_step(const Problem& problem, const CohesiveDensity& density, double t, const FEField& gamma_prev,
                       const FieldPair* alpha, const FieldPair& warm, const SolverConfig& config);

/// Nodewise max(gamma_prev, |u1 - u2|).
FEField update_history_slip(const FEField& gamma_prev, const FieldPair& u);

RunDiagnostics compute_diagnostics(const Problem& problem, const SolverConfig& config);

/// Fills the energy fields of a state (regularized with `eps`, and unregularized) from u, gamma, alpha.
void record_state_energies(const Problem& problem, double eps, SystemState& state);

/// Runs the scheme from u0 (zero when absent). Throws nothing on step failure: the
/// partial trajectory is returned with `complete == false`.
Trajectory evolve(const Problem& problem, const SolverConfig& config, const std::optional<FieldPair>& u0 = {},
                  const std::optional<RunDiagnostics>& diagnostics = {});

/// Damage variant: alternate minimization in u and alpha with alpha >= alpha^{k-1}.
Trajectory evolve_damage(const Problem& problem, const SolverConfig& config, const FieldPair& alpha0,
                         const std::optional<FieldPair>& u0 = {},
                         const std::optional<RunDiagnostics>& diagnostics = {});

struct AlphaResult {
  Eigen::VectorXd a;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes the damage functional over the box [lower, 1] by projected Newton.
AlphaResult minimize_damage(const DamageFunctional& functional, const Eigen::VectorXd& start,
                            const Eigen::VectorXd& lower, const SolverConfig& config);

/// Joint energy G_eps(t, u, alpha, gamma) used by the damage scheme.
double joint_energy(const Problem& problem, const CohesiveDensity& density, const FieldPair& u,
                    const FieldPair& alpha, const FEField& gamma);

struct EpsLadder {
  std::vector<double> eps;
  std::vector<Trajectory> runs;
  // diffs[l][k] = ||u_{eps_l}(t^k) - u_{eps_{l+1}}(t^k)||_{H1}
  std::vector<std::vector<double>> diffs;
  // gaps[l][k] = |F - F_eps| at step k of run l
  std::vector<std::vector<double>> gaps;
  std::vector<double> bounds;  // |Omega| * analytic Phi_eps - Phi bound per rung
};

/// Runs the scheme for every eps of the ladder; each run is warm-started from the previous rung.
EpsLadder eps_continuation(const Problem& problem, const SolverConfig& config, const std::vector<double>& ladder);

}  // namespace plateslip
