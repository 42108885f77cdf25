#include "plateslip/verification.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "plateslip/errors.hpp"

namespace plateslip {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double regularized_energy(const Problem& problem, const CohesiveDensity& density, const FieldPair& u,
                          const FEField& gamma, const FieldPair* alpha) {
  return evaluate_energy(problem, u, gamma, alpha, density).total;
}

FieldPair time_shift(const Problem& problem, const FieldPair& v, double from, double to) {
  const double ds = problem.loading.schedule(to) - problem.loading.schedule(from);
  FieldPair out = v;
  for (auto& vi : out) {
    if (ds != 0.0) vi += ds * problem.loading.shape();
    vi = lift_dirichlet(vi, problem.loading, to);
  }
  return out;
}

// Random field with zero trace: sum of 1..5 hat functions at free nodes with random vector weights.
FieldPair random_bumps(const Problem& problem, std::mt19937_64& rng) {
  const auto& free = problem.space->free_nodes();
  const int n = problem.dim();
  FieldPair v = zero_pair(problem.space, n);
  if (free.empty()) return v;
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_int_distribution<std::size_t> node(0, free.size() - 1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int bumps = count(rng);
  for (int b = 0; b < bumps; ++b) {
    const int a = free[node(rng)];
    for (int i = 0; i < 2; ++i) {
      for (int c = 0; c < n; ++c) v[i].at(a, c) += unit(rng);
    }
  }
  return v;
}

// Dense minimization of f over the box [lo, hi] (entries may be infinite) by damped Newton
// with finite-difference Hessians of the supplied gradient, projected for bound constraints.
struct BoxResult {
  Eigen::VectorXd x;
  double f = 0.0;
  bool converged = false;
};

BoxResult box_newton(const std::function<double(const Eigen::VectorXd&)>& f,
                     const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad, Eigen::VectorXd x,
                     const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, double tol, int max_iterations) {
  const Eigen::Index m = x.size();
  auto project = [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(v.cwiseMax(lo).cwiseMin(hi)); };
  auto pgrad = [&](const Eigen::VectorXd& p, const Eigen::VectorXd& g) {
    Eigen::VectorXd out = g;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (p[i] <= lo[i] && g[i] > 0.0) out[i] = 0.0;
      if (p[i] >= hi[i] && g[i] < 0.0) out[i] = 0.0;
    }
    return out;
  };
  BoxResult res;
  x = project(x);
  double fx = f(x);
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd g = grad(x);
    const Eigen::VectorXd pg = pgrad(x, g);
    if (pg.norm() <= tol) {
      res.converged = true;
      break;
    }
    // Finite-difference Hessian, symmetrized, with eigenvalues pushed away from zero.
    Eigen::MatrixXd H(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
      Eigen::VectorXd xp = x;
      Eigen::VectorXd xm = x;
      xp[i] += h;
      xm[i] -= h;
      H.col(i) = (grad(xp) - grad(xm)) / (2.0 * h);
    }
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::VectorXd p = -pg;
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (pg[i] != 0.0 || (x[i] > lo[i] && x[i] < hi[i])) free.push_back(i);
    }
    if (!free.empty()) {
      const auto k = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd Hf(k, k);
      Eigen::VectorXd gf(k);
      for (Eigen::Index r = 0; r < k; ++r) {
        gf[r] = g[free[r]];
        for (Eigen::Index c = 0; c < k; ++c) Hf(r, c) = H(free[r], free[c]);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Hf);
      Eigen::VectorXd lam = eig.eigenvalues().cwiseAbs();
      const double floor = 1e-10 * std::max(1.0, lam.maxCoeff());
      lam = lam.cwiseMax(floor);
      const Eigen::VectorXd pf =
          -eig.eigenvectors() * (eig.eigenvectors().transpose() * gf).cwiseQuotient(lam);
      Eigen::VectorXd candidate = Eigen::VectorXd::Zero(m);
      for (Eigen::Index r = 0; r < k; ++r) candidate[free[r]] = pf[r];
      if (candidate.allFinite() && g.dot(candidate) < 0.0) p = candidate;
    }
    bool moved = false;
    for (int attempt = 0; attempt < 2 && !moved; ++attempt) {
      double step = 1.0;
      for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
        const Eigen::VectorXd trial = project(x + step * p);
        const double ft = f(trial);
        const double dec = g.dot(trial - x);
        const bool armijo = dec < 0.0 && ft <= fx + 1e-4 * dec;
        const bool flat = std::abs(ft - fx) <= 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(fx)) &&
                          pgrad(trial, grad(trial)).norm() < pg.norm();
        if (armijo || flat) {
          x = trial;
          fx = ft;
          moved = true;
          break;
        }
      }
      p = -pg;
    }
    if (!moved) break;
  }
  res.x = x;
  res.f = fx;
  return res;
}

// Independent weak-form residual on the full stacked vector (no restriction).
Eigen::VectorXd assemble_residual(const Problem& problem, const FieldPair& u, const FEField& gamma_prev,
                                  const CohesiveDensity& density, const FieldPair* alpha) {
  const FESpace& space = *problem.space;
  const int n = space.dim();
  const int per_layer = space.num_nodes() * n;
  Eigen::VectorXd r = Eigen::VectorXd::Zero(2 * per_layer);
  const auto rule = quadrature_rule(n);
  for (int c = 0; c < space.num_cells(); ++c) {
    const CellGeometry& geo = space.geometry(c);
    auto nodes = space.cell_nodes(c);
    for (int i = 0; i < 2; ++i) {
      const SmallMat grad_u = u[i].cell_gradient(c);
      for (const QuadraturePoint& q : rule) {
        std::optional<double> a;
        if (alpha) a = std::clamp((*alpha)[i].value_at(c, q.bary)[0], 0.0, 1.0);
        const SmallMat sigma = problem.tensors[i].apply(space.map_to_cell(c, q.bary), a, grad_u);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
          for (int p = 0; p < n; ++p) {
            double s = 0.0;
            for (int d = 0; d < n; ++d) s += sigma(p, d) * geo.grad[k][d];
            r[i * per_layer + nodes[k] * n + p] += q.weight * geo.measure * s;
          }
        }
      }
    }
  }
  const auto& mass = space.lumped_mass();
  for (int a = 0; a < space.num_nodes(); ++a) {
    const SmallVec d = u[0].node_value(a) - u[1].node_value(a);
    const double y = d.norm();
    if (y == 0.0) continue;
    for (int p = 0; p < n; ++p) {
      const double f = mass[a] * density.dy(y, gamma_prev.at(a)) * d[p] / y;
      r[a * n + p] += f;
      r[per_layer + a * n + p] -= f;
    }
  }
  return r;
}

void check_tiny(const Problem& problem, std::size_t limit) {
  const std::size_t dofs = free_pair_dofs(*problem.space, problem.dim()).size();
  if (dofs > limit) {
    throw ConfigError("brute-force oracle is limited to " + std::to_string(limit) + " interior dofs, got " +
                      std::to_string(dofs));
  }
}

}  // namespace

EnergyBalance check_energy_balance(const Trajectory& trajectory) {
  EnergyBalance eb;
  if (trajectory.states.empty()) return eb;
  const double f0 = trajectory.states.front().energy_eps;
  for (const auto& s : trajectory.states) {
    const double d = s.energy_eps - f0 - s.work;
    const double dl = s.energy_eps - f0 - s.work_left;
    eb.drift.push_back(d);
    eb.drift_left.push_back(dl);
    eb.max_abs = std::max(eb.max_abs, std::abs(d));
    eb.max_upper = std::max(eb.max_upper, d);
    eb.max_abs_left = std::max(eb.max_abs_left, std::abs(dl));
  }
  eb.scale = std::abs(trajectory.states.back().energy_eps);
  return eb;
}

StabilityCheck check_global_stability(const Problem& problem, const Trajectory& trajectory, std::uint64_t seed,
                                      int count) {
  StabilityCheck out;
  out.competitors_per_step = count;
  out.min_margin = kInf;
  const CohesiveDensity density(problem.law, trajectory.eps);
  const auto& states = trajectory.states;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const SystemState& s = states[k];
    const FieldPair* alpha = s.alpha ? &*s.alpha : nullptr;
    const double fu = regularized_energy(problem, density, s.u, s.gamma, alpha);
    double margin = kInf;
    std::string worst;
    auto consider = [&](const FieldPair& v, const std::string& label) {
      const double m = regularized_energy(problem, density, v, s.gamma, alpha) - fu;
      if (m < margin) {
        margin = m;
        worst = label;
      }
    };
    consider(s.u, "self");
    const FEField w = problem.loading.w(s.t);
    consider({lift_dirichlet(w, problem.loading, s.t), lift_dirichlet(w, problem.loading, s.t)}, "trivial lift");
    for (std::size_t j : {k - 1, k + 1, std::size_t{0}, states.size() - 1}) {
      if (j >= states.size() || j == k) continue;
      consider(time_shift(problem, states[j].u, states[j].t, s.t), "shifted state " + std::to_string(j));
    }
    auto rng = stream(seed, k);
    std::uniform_real_distribution<double> logscale(std::log(0.01), 0.0);
    const double ref = pair_h1_norm(s.u) > 0.0 ? pair_h1_norm(s.u) : 1.0;
    for (int c = 0; c < count; ++c) {
      FieldPair v = random_bumps(problem, rng);
      const double norm = pair_h1_norm(v);
      if (norm == 0.0) continue;
      const double scale = std::exp(logscale(rng)) * ref / norm;
      consider({s.u[0] + scale * v[0], s.u[1] + scale * v[1]}, "random " + std::to_string(c));
    }
    out.margins.push_back(margin);
    if (margin < out.min_margin) {
      out.min_margin = margin;
      out.worst_step = static_cast<int>(k);
      out.worst_competitor = worst;
    }
  }
  if (states.empty()) out.min_margin = 0.0;
  return out;
}

HistorySlipCheck check_history_slip(const Trajectory& trajectory) {
  HistorySlipCheck out;
  if (trajectory.states.empty()) return out;
  FEField running = slip_magnitude(trajectory.states.front().u);
  const FEField* previous = nullptr;
  for (const auto& s : trajectory.states) {
    const FEField slip = slip_magnitude(s.u);
    double gap = 0.0;
    for (int a = 0; a < s.gamma.num_nodes(); ++a) {
      running.at(a) = std::max(running.at(a), slip.at(a));
      const double excess = s.gamma.at(a) - running.at(a);
      if (!(excess >= 0.0)) {
        throw StateCorruption("state corruption: history slip below the running max at step " +
                              std::to_string(s.step) + ", node " + std::to_string(a));
      }
      if (previous && s.gamma.at(a) < previous->at(a)) {
        out.monotone = false;
        throw StateCorruption("state corruption: history slip decreases at step " + std::to_string(s.step) +
                              ", node " + std::to_string(a));
      }
      gap = std::max(gap, excess);
    }
    out.gap.push_back(gap);
    out.max_gap = std::max(out.max_gap, gap);
    previous = &s.gamma;
  }
  return out;
}

double check_el_residual(const Problem& problem, const FieldPair& u, const FEField& gamma_prev,
                         const CohesiveDensity& density, const FieldPair* alpha) {
  const Eigen::VectorXd r = assemble_residual(problem, u, gamma_prev, density, alpha);
  double sq = 0.0;
  for (int dof : free_pair_dofs(*problem.space, problem.dim())) sq += r[dof] * r[dof];
  return std::sqrt(sq);
}

double sample_convexity_gap(const Problem& problem, const CohesiveDensity& density, double t, const FEField& gamma,
                            double mu, int count, std::uint64_t seed) {
  auto rng = stream(seed, 0xC0C0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = problem.dim();
  const FEField w = problem.loading.w(t);
  const double amp = std::max(1.0, max_norm(w));
  double worst = kInf;
  for (int c = 0; c < count; ++c) {
    std::array<FieldPair, 2> pairs;
    for (auto& pair : pairs) {
      const double scale = amp * std::exp(std::log(1e-3) * unit(rng));
      for (auto& f : pair) {
        f = w;
        for (int a : problem.space->free_nodes()) {
          for (int k = 0; k < n; ++k) f.at(a, k) += scale * normal(rng);
        }
      }
    }
    const double theta = unit(rng);
    worst = std::min(worst, shifted_energy_gap(problem, density, t, pairs[0], pairs[1], gamma, theta, mu));
  }
  return worst;
}

OracleResult brute_force_oracle(const Problem& problem, const CohesiveDensity& density, double t,
                                const FEField& gamma_prev, int restarts, std::uint64_t seed) {
  check_tiny(problem, 8);
  const int n = problem.dim();
  const std::vector<int> dofs = free_pair_dofs(*problem.space, n);
  const auto m = static_cast<Eigen::Index>(dofs.size());
  const FEField w = problem.loading.w(t);
  const Eigen::VectorXd base = stack({w, w});
  const DisplacementFunctional functional(problem, density, gamma_prev);
  auto expand = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd x = base;
    for (Eigen::Index i = 0; i < m; ++i) x[dofs[static_cast<std::size_t>(i)]] = z[i];
    return x;
  };
  auto f = [&](const Eigen::VectorXd& z) { return functional.value(expand(z)); };
  auto g = [&](const Eigen::VectorXd& z) {
    const Eigen::VectorXd full = functional.gradient(expand(z));
    Eigen::VectorXd out(m);
    for (Eigen::Index i = 0; i < m; ++i) out[i] = full[dofs[static_cast<std::size_t>(i)]];
    return out;
  };
  const double radius = 2.0 * std::max({max_norm(w), problem.law.slip_scale(), 1e-3});
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(m, -kInf);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(m, kInf);

  OracleResult out;
  out.restarts = restarts;
  out.energy = kInf;
  double worst = -kInf;
  auto rng = stream(seed, 0x0AC1E);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd z(m);
    for (Eigen::Index i = 0; i < m; ++i) z[i] = base[dofs[static_cast<std::size_t>(i)]] + radius * unit(rng);
    const BoxResult br = box_newton(f, g, z, lo, hi, 1e-11, 500);
    if (!br.converged) continue;
    ++out.converged;
    worst = std::max(worst, br.f);
    if (br.f < out.energy) {
      out.energy = br.f;
      out.x = expand(br.x);
    }
  }
  out.spread = out.converged ? worst - out.energy : kInf;
  return out;
}

OracleResult brute_force_damage_oracle(const Problem& problem, const CohesiveDensity& density, double t,
                                       const FEField& gamma_prev, const FieldPair& alpha_prev, int restarts,
                                       std::uint64_t seed) {
  check_tiny(problem, 8);
  if (!problem.damage) throw ConfigError("damage oracle needs a damage model");
  const SpacePtr& space = problem.space;
  const int n = problem.dim();
  const std::vector<int> dofs = free_pair_dofs(*space, n);
  const auto mu_dofs = static_cast<Eigen::Index>(dofs.size());
  const auto nodes = static_cast<Eigen::Index>(space->num_nodes());
  const Eigen::Index m = mu_dofs + 2 * nodes;
  const FEField w = problem.loading.w(t);
  const Eigen::VectorXd base = stack({w, w});

  auto split = [&](const Eigen::VectorXd& z) {
    Eigen::VectorXd x = base;
    for (Eigen::Index i = 0; i < mu_dofs; ++i) x[dofs[static_cast<std::size_t>(i)]] = z[i];
    Eigen::VectorXd a = z.tail(2 * nodes).cwiseMax(0.0).cwiseMin(1.0);
    return std::make_pair(unstack(space, n, x), unstack(space, 1, a));
  };
  auto f = [&](const Eigen::VectorXd& z) {
    const auto [u, a] = split(z);
    return joint_energy(problem, density, u, a, gamma_prev);
  };
  auto g = [&](const Eigen::VectorXd& z) {
    const auto [u, a] = split(z);
    const Eigen::VectorXd gu = assemble_residual(problem, u, gamma_prev, density, &a);
    const Eigen::VectorXd ga = DamageFunctional(problem, u).gradient(stack(a));
    Eigen::VectorXd out(m);
    for (Eigen::Index i = 0; i < mu_dofs; ++i) out[i] = gu[dofs[static_cast<std::size_t>(i)]];
    out.tail(2 * nodes) = ga;
    return out;
  };
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(m, -kInf);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(m, kInf);
  lo.tail(2 * nodes) = stack(alpha_prev);
  hi.tail(2 * nodes).setOnes();
  const double radius = 2.0 * std::max({max_norm(w), problem.law.slip_scale(), 1e-3});

  OracleResult out;
  out.restarts = restarts;
  out.energy = kInf;
  double worst = -kInf;
  auto rng = stream(seed, 0xDA4A6E);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd z(m);
    for (Eigen::Index i = 0; i < mu_dofs; ++i) z[i] = base[dofs[static_cast<std::size_t>(i)]] + radius * unit(rng);
    for (Eigen::Index i = 0; i < 2 * nodes; ++i) z[mu_dofs + i] = lo[mu_dofs + i] + (1.0 - lo[mu_dofs + i]) * frac(rng);
    const BoxResult br = box_newton(f, g, z, lo, hi, 1e-10, 500);
    if (!br.converged) continue;
    ++out.converged;
    worst = std::max(worst, br.f);
    if (br.f < out.energy) {
      out.energy = br.f;
      const auto [u, a] = split(br.x);
      out.x = Eigen::VectorXd(base.size() + 2 * nodes);
      out.x << stack(u), stack(a);
    }
  }
  out.spread = out.converged ? worst - out.energy : kInf;
  return out;
}

CertificationReport certify(const Problem& problem, const Trajectory& trajectory, const VerifyOptions& options) {
  CertificationReport rep;
  rep.options = options;
  rep.eps = trajectory.eps;
  rep.tau = trajectory.tau;
  rep.hypothesis = trajectory.diagnostics.certified;
  rep.korn = trajectory.diagnostics.korn;
  rep.mu = trajectory.diagnostics.mu;

  rep.balance = check_energy_balance(trajectory);
  const StabilityCheck gs = check_global_stability(problem, trajectory, options.seed, options.competitors);
  const HistorySlipCheck hs = check_history_slip(trajectory);
  const CohesiveDensity density(problem.law, trajectory.eps);

  const auto& states = trajectory.states;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const SystemState& s = states[k];
    StepRecord r;
    r.step = s.step;
    r.t = s.t;
    r.energy = s.energy_eps;
    r.work = s.work;
    r.drift = rep.balance.drift[k];
    r.drift_left = rep.balance.drift_left[k];
    r.gs_margin = gs.margins[k];
    const FEField& gamma_prev = k == 0 ? s.gamma : states[k - 1].gamma;
    r.el_residual = check_el_residual(problem, s.u, gamma_prev, density, s.alpha ? &*s.alpha : nullptr);
    r.gamma_gap = hs.gap[k];
    rep.max_el_residual = std::max(rep.max_el_residual, r.el_residual);
    rep.steps.push_back(r);
  }
  rep.min_gs_margin = gs.min_margin;
  rep.worst_gs_step = gs.worst_step;
  rep.worst_competitor = gs.worst_competitor;
  rep.max_gamma_gap = hs.max_gap;
  rep.gamma_monotone = hs.monotone;

  if (rep.hypothesis && !states.empty()) {
    const SystemState& last = states.back();
    rep.convexity_gap = sample_convexity_gap(problem, density, last.t, last.gamma, rep.mu,
                                             options.convexity_samples, options.seed);
    rep.pass_convexity = rep.convexity_gap >= -options.convexity_tol;
  } else {
    rep.convexity_gap = std::numeric_limits<double>::quiet_NaN();
    rep.pass_convexity = true;  // nothing to certify without the hypothesis
  }
  rep.pass_eb = rep.balance.max_upper <= options.eb_tol;
  rep.pass_gs = rep.min_gs_margin >= -options.gs_tol;
  rep.pass_el = rep.max_el_residual <= options.el_tol;
  rep.pass_gamma = hs.monotone && hs.max_gap == 0.0;
  return rep;
}

std::string CertificationReport::to_json() const {
  using nlohmann::ordered_json;
  auto num = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  ordered_json j;
  j["schema"] = "plateslip.certification/1";
  j["seed"] = options.seed;
  j["competitors"] = options.competitors;
  j["tolerances"] = {{"energy_balance_upper", options.eb_tol},
                     {"global_stability", options.gs_tol},
                     {"euler_lagrange", options.el_tol},
                     {"convexity", options.convexity_tol}};
  j["eps"] = eps;
  j["tau"] = tau;
  j["hypothesis"] = hypothesis;
  j["korn"] = korn;
  j["mu"] = mu;
  j["energy_balance"] = {{"max_abs_drift", balance.max_abs},
                         {"max_upper_drift", balance.max_upper},
                         {"max_abs_drift_left_endpoint", balance.max_abs_left},
                         {"energy_scale", balance.scale}};
  j["global_stability"] = {{"min_margin", num(min_gs_margin)},
                           {"worst_step", worst_gs_step},
                           {"worst_competitor", worst_competitor}};
  j["euler_lagrange"] = {{"max_residual", max_el_residual}};
  j["history_slip"] = {{"max_gap", max_gamma_gap}, {"monotone", gamma_monotone}};
  j["convexity_gap"] = num(convexity_gap);
  j["pass"] = {{"energy_balance", pass_eb},
               {"global_stability", pass_gs},
               {"euler_lagrange", pass_el},
               {"history_slip", pass_gamma},
               {"convexity", pass_convexity},
               {"all", pass()}};
  ordered_json rows = ordered_json::array();
  for (const auto& r : steps) {
    rows.push_back({{"step", r.step},
                    {"t", r.t},
                    {"energy", r.energy},
                    {"work", r.work},
                    {"drift", r.drift},
                    {"drift_left", r.drift_left},
                    {"gs_margin", num(r.gs_margin)},
                    {"el_residual", r.el_residual},
                    {"gamma_gap", r.gamma_gap}});
  }
  j["steps"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string CertificationReport::summary() const {
  char buf[512];
  std::ostringstream os;
  auto line = [&](const char* name, bool ok, const char* fmt, double v) {
    std::snprintf(buf, sizeof buf, "%-18s %s  ", name, ok ? "pass" : "FAIL");
    os << buf;
    std::snprintf(buf, sizeof buf, fmt, v);
    os << buf << "\n";
  };
  line("energy balance", pass_eb, "max upper drift %.3e", balance.max_upper);
  line("global stability", pass_gs, "min margin %.3e", min_gs_margin);
  line("euler-lagrange", pass_el, "max residual %.3e", max_el_residual);
  line("history slip", pass_gamma, "max gap %.3e", max_gamma_gap);
  line("convexity", pass_convexity, "min gap %.3e", convexity_gap);
  os << (hypothesis ? "convexity hypothesis holds\n" : "non-certified: convexity hypothesis violated\n");
  return os.str();
}

}  // namespace plateslip
