#include "plateslip/mm_solver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "plateslip/errors.hpp"

namespace plateslip {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

Eigen::VectorXd restrict_to(const Eigen::VectorXd& full, const std::vector<int>& dofs) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i) out[static_cast<Eigen::Index>(i)] = full[dofs[i]];
  return out;
}

void add_on(Eigen::VectorXd& full, const std::vector<int>& dofs, const Eigen::VectorXd& reduced, double scale) {
  for (std::size_t i = 0; i < dofs.size(); ++i) full[dofs[i]] += scale * reduced[static_cast<Eigen::Index>(i)];
}

Eigen::SparseMatrix<double> restrict_matrix(const Eigen::SparseMatrix<double>& H, const std::vector<int>& dofs) {
  std::vector<int> index(static_cast<std::size_t>(H.rows()), -1);
  for (std::size_t i = 0; i < dofs.size(); ++i) index[static_cast<std::size_t>(dofs[i])] = static_cast<int>(i);
  Triplets t;
  t.reserve(static_cast<std::size_t>(H.nonZeros()));
  for (int k = 0; k < H.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(H, k); it; ++it) {
      const int r = index[static_cast<std::size_t>(it.row())];
      const int c = index[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
    }
  }
  const auto m = static_cast<Eigen::Index>(dofs.size());
  Eigen::SparseMatrix<double> out(m, m);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// Energy comparisons below this level are treated as roundoff.
double roundoff(double f) { return 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(f)); }

FieldPair shifted_competitor(const Problem& problem, const FieldPair& u_prev, double t_prev, double t) {
  const double ds = problem.loading.schedule(t) - problem.loading.schedule(t_prev);
  FieldPair out = u_prev;
  if (ds != 0.0) {
    for (auto& ui : out) ui += ds * problem.loading.shape();
  }
  // Re-impose the trace exactly so that roundoff in the shift never leaks into the constraint.
  for (auto& ui : out) ui = lift_dirichlet(ui, problem.loading, t);
  return out;
}

void record_energies(const Problem& problem, const CohesiveDensity& reg, const CohesiveDensity& plain,
                     SystemState& s) {
  const FieldPair* alpha = s.alpha ? &*s.alpha : nullptr;
  s.energies = evaluate_energy(problem, s.u, s.gamma, alpha, reg);
  s.energies.work_accumulated = s.work;
  s.energy_eps = s.energies.total;
  const EnergyBreakdown raw = evaluate_energy(problem, s.u, s.gamma, alpha, plain);
  s.energy = raw.total;
}

void check_initial_trace(const Problem& problem, const FieldPair& u0) {
  const FEField w0 = problem.loading.w(0.0);
  for (int a : problem.space->dirichlet_nodes()) {
    for (const auto& ui : u0) {
      if ((ui.node_value(a) - w0.node_value(a)).norm() > 1e-12 * (1.0 + w0.node_value(a).norm())) {
        throw ConfigError("initial displacement does not match the boundary datum w(0)");
      }
    }
  }
}

struct EvolveOptions {
  const std::vector<FieldPair>* warm = nullptr;  // per-step warm starts (eps ladder)
};

}  // namespace

void SolverConfig::validate(double horizon) const {
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(inner_tol > 0.0) || !(sweep_tol > 0.0) || !(initial_tol > 0.0)) {
    throw ConfigError("solver tolerances must be positive");
  }
  if (max_newton < 0 || max_gradient_steps < 0 || max_sweeps < 1) throw ConfigError("iteration limits invalid");
  if (!(armijo > 0.0 && armijo < 0.5) || !(backtrack > 0.0 && backtrack < 1.0)) {
    throw ConfigError("line-search parameters out of range");
  }
  const double ratio = horizon / tau;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0) {
    throw ConfigError("T / tau must be a positive integer");
  }
}

void record_state_energies(const Problem& problem, double eps, SystemState& state) {
  record_energies(problem, CohesiveDensity(problem.law, eps), CohesiveDensity(problem.law), state);
}

int SolverConfig::steps(double horizon) const { return static_cast<int>(std::lround(horizon / tau)); }

std::vector<int> free_pair_dofs(const FESpace& space, int components) {
  std::vector<int> dofs;
  const int per_layer = space.num_nodes() * components;
  for (int i = 0; i < 2; ++i) {
    for (int a : space.free_nodes()) {
      for (int c = 0; c < components; ++c) dofs.push_back(i * per_layer + a * components + c);
    }
  }
  std::sort(dofs.begin(), dofs.end());
  return dofs;
}

InnerResult inner_minimize(const DisplacementFunctional& functional, const Eigen::VectorXd& start,
                           const std::vector<int>& free_dofs, const SolverConfig& config) {
  InnerResult res;
  res.x = start;
  double f = functional.value(res.x);
  Eigen::VectorXd g = restrict_to(functional.gradient(res.x), free_dofs);
  double gn = g.norm();

  auto line_search = [&](const Eigen::VectorXd& p, double step) -> bool {
    const double slope = g.dot(p);
    for (int bt = 0; bt < config.max_backtracks; ++bt, step *= config.backtrack) {
      Eigen::VectorXd trial = res.x;
      add_on(trial, free_dofs, p, step);
      const double ft = functional.value(trial);
      bool accept = ft <= f + config.armijo * step * slope;
      Eigen::VectorXd gt;
      if (!accept && std::abs(ft - f) <= roundoff(f)) {
        // The energy difference is below resolution: fall back on the gradient norm.
        gt = restrict_to(functional.gradient(trial), free_dofs);
        accept = gt.norm() < gn;
      }
      if (accept) {
        res.x = std::move(trial);
        f = ft;
        g = gt.size() ? gt : restrict_to(functional.gradient(res.x), free_dofs);
        gn = g.norm();
        return true;
      }
    }
    return false;
  };

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool pattern_ready = false;
  while (gn > config.inner_tol && res.newton_iterations < config.max_newton) {
    ++res.newton_iterations;
    const Eigen::SparseMatrix<double> H = restrict_matrix(functional.hessian(res.x), free_dofs);
    if (!pattern_ready) {
      ldlt.analyzePattern(H);
      pattern_ready = true;
    }
    ldlt.factorize(H);
    Eigen::VectorXd p;
    if (ldlt.info() == Eigen::Success) p = -ldlt.solve(g);
    if (p.size() == 0 || !p.allFinite() || g.dot(p) >= 0.0) p = -g;
    if (!line_search(p, 1.0)) break;
  }

  // Gradient descent with Barzilai-Borwein trial steps and Armijo safeguard.
  double step = 1.0;
  while (gn > config.inner_tol && res.gradient_steps < config.max_gradient_steps) {
    ++res.gradient_steps;
    const Eigen::VectorXd x_old = restrict_to(res.x, free_dofs);
    const Eigen::VectorXd g_old = g;
    if (!line_search(-g, step)) break;
    const Eigen::VectorXd sk = restrict_to(res.x, free_dofs) - x_old;
    const Eigen::VectorXd yk = g - g_old;
    const double sy = sk.dot(yk);
    step = sy > 0.0 ? sk.squaredNorm() / sy : 1.0;
  }

  res.energy = f;
  res.grad_norm = gn;
  res.converged = gn <= config.inner_tol;
  return res;
}

InnerResult solve_step(const Problem& problem, const CohesiveDensity& density, double t, const FEField& gamma_prev,
                       const FieldPair* alpha, const FieldPair& warm, const SolverConfig& config) {
  const FieldPair start{lift_dirichlet(warm[0], problem.loading, t), lift_dirichlet(warm[1], problem.loading, t)};
  const DisplacementFunctional functional(problem, density, gamma_prev, alpha);
  return inner_minimize(functional, stack(start), free_pair_dofs(*problem.space, problem.dim()), config);
}

FEField update_history_slip(const FEField& gamma_prev, const FieldPair& u) {
  FEField gamma = gamma_prev;
  const FEField slip = slip_magnitude(u);
  for (int a = 0; a < gamma.num_nodes(); ++a) {
    if (!(gamma_prev.at(a) >= 0.0)) throw StateCorruption("state corruption: history slip is negative at node " + std::to_string(a));
    gamma.at(a) = std::max(gamma_prev.at(a), slip.at(a));
  }
  return gamma;
}

RunDiagnostics compute_diagnostics(const Problem& problem, const SolverConfig& config) {
  RunDiagnostics d;
  d.korn = estimate_korn_constant(*problem.space).constant;
  d.coercivity = {coercivity_constant(problem.tensors[0]), coercivity_constant(problem.tensors[1])};
  d.lambda_threshold = convexity_threshold(d.coercivity[0], d.coercivity[1], d.korn);
  d.mu = convexity_modulus(problem, d.korn);
  d.certified = problem.law.lambda() < d.lambda_threshold;
  d.apriori = apriori_bound(problem, d.korn, config.steps(problem.loading.horizon()));
  return d;
}

double joint_energy(const Problem& problem, const CohesiveDensity& density, const FieldPair& u,
                    const FieldPair& alpha, const FEField& gamma) {
  return evaluate_energy(problem, u, gamma, &alpha, density).total;
}

AlphaResult minimize_damage(const DamageFunctional& functional, const Eigen::VectorXd& start,
                            const Eigen::VectorXd& lower, const SolverConfig& config) {
  constexpr double kBoundTol = 1e-12;
  AlphaResult res;
  res.a = start.cwiseMax(lower).cwiseMin(1.0);
  double f = functional.value(res.a);
  const Eigen::Index m = res.a.size();

  auto project = [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(v.cwiseMax(lower).cwiseMin(1.0)); };
  auto projected_gradient = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& g) {
    Eigen::VectorXd pg = g;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (a[i] <= lower[i] + kBoundTol && g[i] > 0.0) pg[i] = 0.0;
      if (a[i] >= 1.0 - kBoundTol && g[i] < 0.0) pg[i] = 0.0;
    }
    return pg;
  };
  auto search = [&](const Eigen::VectorXd& g, const Eigen::VectorXd& p) -> bool {
    double step = 1.0;
    for (int bt = 0; bt < config.max_backtracks; ++bt, step *= config.backtrack) {
      Eigen::VectorXd trial = project(res.a + step * p);
      const double ft = functional.value(trial);
      const double decrease = g.dot(trial - res.a);
      bool accept = decrease < 0.0 && ft <= f + config.armijo * decrease;
      if (!accept && decrease < 0.0 && std::abs(ft - f) <= roundoff(f)) {
        // The energy difference is below resolution: fall back on the projected gradient norm.
        accept = projected_gradient(trial, functional.gradient(trial)).norm() < projected_gradient(res.a, g).norm();
      }
      if (accept) {
        res.a = std::move(trial);
        f = ft;
        return true;
      }
    }
    return false;
  };

  const int max_iterations = config.max_newton + config.max_gradient_steps;
  for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
    const Eigen::VectorXd g = functional.gradient(res.a);
    const Eigen::VectorXd pg = projected_gradient(res.a, g);
    if (pg.norm() <= config.inner_tol) {
      res.converged = true;
      break;
    }
    bool moved = false;
    if (res.iterations < config.max_newton) {
      // Newton on the dofs that are not held at a bound.
      std::vector<int> active_free;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (pg[i] != 0.0 || (res.a[i] > lower[i] + kBoundTol && res.a[i] < 1.0 - kBoundTol)) {
          active_free.push_back(static_cast<int>(i));
        }
      }
      if (!active_free.empty()) {
        const Eigen::SparseMatrix<double> H = restrict_matrix(functional.hessian(res.a), active_free);
        const Eigen::VectorXd gf = restrict_to(g, active_free);
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(H);
        Eigen::VectorXd pf;
        if (ldlt.info() == Eigen::Success) pf = -ldlt.solve(gf);
        if (pf.size() && pf.allFinite() && gf.dot(pf) < 0.0) {
          Eigen::VectorXd p = Eigen::VectorXd::Zero(m);
          add_on(p, active_free, pf, 1.0);
          moved = search(g, p);
        }
      }
    }
    if (!moved) moved = search(g, -pg);
    if (!moved) break;
  }
  res.energy = f;
  return res;
}

namespace {

Trajectory run_scheme(const Problem& problem, const SolverConfig& config, const std::optional<FieldPair>& u0,
                      const std::optional<FieldPair>& alpha0, const std::optional<RunDiagnostics>& diagnostics,
                      const EvolveOptions& options) {
  const double T = problem.loading.horizon();
  config.validate(T);
  const bool damage = alpha0.has_value();
  if (damage && !problem.damage) throw ConfigError("damage run requested without a damage model");
  if (damage && (!problem.tensors[0].damage_enabled() || !problem.tensors[1].damage_enabled())) {
    throw ConfigError("damage run needs degradable tensors (eta)");
  }
  if (damage && !(problem.damage->r > problem.dim())) throw ConfigError("damage exponent r must exceed n");

  const int steps = config.steps(T);
  const CohesiveDensity reg(problem.law, config.eps);
  const CohesiveDensity plain(problem.law);
  const SpacePtr& space = problem.space;
  const int n = problem.dim();
  const std::vector<int> free_dofs = free_pair_dofs(*space, n);

  Trajectory traj;
  traj.eps = config.eps;
  traj.tau = config.tau;
  traj.diagnostics = diagnostics ? *diagnostics : compute_diagnostics(problem, config);
  if (!traj.diagnostics.certified) {
    traj.warnings.push_back("non-certified: cohesive curvature bound lambda violates the convexity hypothesis");
  }

  SystemState s0;
  s0.u = u0 ? *u0 : FieldPair{lift_dirichlet(FEField(space, n), problem.loading, 0.0),
                              lift_dirichlet(FEField(space, n), problem.loading, 0.0)};
  check_initial_trace(problem, s0.u);
  if (damage) {
    for (const auto& ai : *alpha0) {
      for (Eigen::Index k = 0; k < ai.coeffs().size(); ++k) {
        if (!(ai.coeffs()[k] >= 0.0 && ai.coeffs()[k] <= 1.0)) throw ConfigError("initial damage outside [0,1]");
      }
    }
    s0.alpha = *alpha0;
  }
  s0.gamma = slip_magnitude(s0.u);

  // The initial datum must minimize F(0, ., |u1^0 - u2^0|); verify, and adopt the minimizer if allowed.
  for (int round = 0; round < 20; ++round) {
    const FieldPair* alpha = s0.alpha ? &*s0.alpha : nullptr;
    const DisplacementFunctional functional(problem, reg, s0.gamma, alpha);
    const Eigen::VectorXd x0 = stack(s0.u);
    const double f0 = functional.value(x0);
    const InnerResult r = inner_minimize(functional, x0, free_dofs, config);
    const double improvement = f0 - r.energy;
    if (improvement <= config.initial_tol * (1.0 + std::abs(f0))) break;
    traj.initial_improvement = std::max(traj.initial_improvement, improvement);
    if (!config.adopt_initial) {
      traj.failed_step = 0;
      traj.failure = "initial datum is not a minimizer (energy improvable by " + std::to_string(improvement) + ")";
      return traj;
    }
    s0.u = unstack(space, n, r.x);
    s0.gamma = slip_magnitude(s0.u);
    traj.initial_adopted = true;
  }
  record_energies(problem, reg, plain, s0);
  traj.states.push_back(s0);

  for (int k = 1; k <= steps; ++k) {
    const SystemState& prev = traj.states.back();
    const double t_prev = prev.t;
    const double t = T * k / steps;
    SystemState s;
    s.step = k;
    s.t = t;
    const FieldPair* alpha_prev = prev.alpha ? &*prev.alpha : nullptr;
    s.work = prev.work + competitor_work_increment(problem, prev.u, alpha_prev, t_prev, t);
    s.work_left = prev.work_left + left_endpoint_work_increment(problem, prev.u, alpha_prev, t_prev, t);

    const FieldPair competitor = shifted_competitor(problem, prev.u, t_prev, t);
    FieldPair warm = competitor;
    if (options.warm && static_cast<std::size_t>(k) < options.warm->size()) warm = (*options.warm)[k];

    if (!damage) {
      const InnerResult r = solve_step(problem, reg, t, prev.gamma, nullptr, warm, config);
      s.newton_iterations = r.newton_iterations;
      if (!r.converged) {
        traj.failed_step = k;
        traj.failure = "inner minimization did not converge at step " + std::to_string(k) +
                       " (gradient norm " + std::to_string(r.grad_norm) + ")";
        return traj;
      }
      s.u = unstack(space, n, r.x);
    } else {
      // Alternate minimization from the competitor (u^{k-1} + dw, alpha^{k-1}); each sweep
      // updates alpha first so that the returned u is exactly stationary at the final alpha.
      FieldPair u = warm;
      FieldPair alpha = *prev.alpha;
      const Eigen::VectorXd lower = stack(*prev.alpha);
      double g_prev = joint_energy(problem, reg, competitor, alpha, prev.gamma);
      bool settled = false;
      for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
        s.sweeps = sweep;
        const DamageFunctional dfun(problem, u);
        const AlphaResult ar = minimize_damage(dfun, stack(alpha), lower, config);
        alpha = unstack(space, 1, ar.a);
        const InnerResult r = solve_step(problem, reg, t, prev.gamma, &alpha, u, config);
        s.newton_iterations += r.newton_iterations;
        if (!r.converged) {
          traj.failed_step = k;
          traj.failure = "displacement sub-problem did not converge at step " + std::to_string(k);
          return traj;
        }
        u = unstack(space, n, r.x);
        const double g_now = joint_energy(problem, reg, u, alpha, prev.gamma);
        const double decrease = g_prev - g_now;
        g_prev = g_now;
        if (decrease <= config.sweep_tol * (1.0 + std::abs(g_now))) {
          settled = true;
          break;
        }
      }
      s.critical_only = !settled;
      if (!settled) traj.warnings.push_back("step " + std::to_string(k) + ": sweep limit reached, critical point only");
      s.u = u;
      s.alpha = alpha;
    }
    s.gamma = update_history_slip(prev.gamma, s.u);
    record_energies(problem, reg, plain, s);
    traj.states.push_back(std::move(s));
  }
  traj.complete = true;
  return traj;
}

}  // namespace

Trajectory evolve(const Problem& problem, const SolverConfig& config, const std::optional<FieldPair>& u0,
                  const std::optional<RunDiagnostics>& diagnostics) {
  return run_scheme(problem, config, u0, std::nullopt, diagnostics, {});
}

Trajectory evolve_damage(const Problem& problem, const SolverConfig& config, const FieldPair& alpha0,
                         const std::optional<FieldPair>& u0, const std::optional<RunDiagnostics>& diagnostics) {
  return run_scheme(problem, config, u0, alpha0, diagnostics, {});
}

EpsLadder eps_continuation(const Problem& problem, const SolverConfig& config, const std::vector<double>& ladder) {
  if (ladder.size() < 2) throw ConfigError("eps ladder needs at least two rungs");
  EpsLadder out;
  out.eps = ladder;
  const RunDiagnostics diag = compute_diagnostics(problem, config);
  std::vector<FieldPair> warm;
  for (double eps : ladder) {
    SolverConfig c = config;
    c.eps = eps;
    EvolveOptions options;
    if (!warm.empty()) options.warm = &warm;
    Trajectory tr = run_scheme(problem, c, std::nullopt, std::nullopt, diag, options);
    if (!tr.complete) throw NumericalError("eps ladder run failed at eps = " + std::to_string(eps) + ": " + tr.failure);
    warm.clear();
    for (const auto& s : tr.states) warm.push_back(s.u);
    std::vector<double> gaps;
    for (const auto& s : tr.states) gaps.push_back(std::abs(s.energy - s.energy_eps));
    out.gaps.push_back(std::move(gaps));
    out.bounds.push_back(problem.space->domain_measure() * RegularizedLaw(problem.law, eps).phi_gap_bound());
    out.runs.push_back(std::move(tr));
  }
  for (std::size_t l = 0; l + 1 < out.runs.size(); ++l) {
    std::vector<double> d;
    const auto& a = out.runs[l].states;
    const auto& b = out.runs[l + 1].states;
    for (std::size_t k = 0; k < a.size(); ++k) {
      d.push_back(pair_h1_norm({a[k].u[0] - b[k].u[0], a[k].u[1] - b[k].u[1]}));
    }
    out.diffs.push_back(std::move(d));
  }
  return out;
}

}  // namespace plateslip
