// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "plateslip/output.hpp"
#include "plateslip_cli/cli.hpp"

using namespace plateslip;
using plateslip::testing::config_path;
using plateslip::testing::scratch_dir;
using plateslip::testing::tiny_bar_config;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += std::log(x[i]);
    sy += std::log(y[i]);
    sxx += std::log(x[i]) * std::log(x[i]);
    sxy += std::log(x[i]) * std::log(y[i]);
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double frob(const SmallMat& A, const SmallMat& B) { return (A.array() * B.array()).sum(); }

Trajectory run(const RunConfig& c, const Problem& p) {
  const FieldPair u0 = initial_displacement(c, p);
  if (c.damage.enabled) return evolve_damage(p, c.solver, initial_damage(c, p), u0);
  return evolve(p, c.solver, u0);
}

// Cohesive law: structural properties on a 200 x 200 grid, reference values, regularization.
Outcome criterion1() {
  Outcome o;
  const auto e = CohesiveLaw::exponential(1.0, 1.0);
  o.require(std::abs(phi(e, 0.5, 1.0) - 0.494165768389266808) <= 1e-15, "Phi(0.5,1)");
  o.require(std::abs(dphi_dy(e, 0.5, 1.0) - 0.183939720585721161) <= 1e-15, "dPhi/dy(0.5,1)");
  o.require(std::abs(dphi_dz(e, 0.5, 1.0) - 0.275909580878581741) <= 1e-15, "dPhi/dz(0.5,1)");
  o.require(std::abs(fixed_point_z_eps(e, 0.1) - 0.0912765271608622643) <= 1e-15, "z_eps(0.1)");
  o.require(std::abs(CohesiveLaw::cubic_capped(1.0, 1.0).psi(0.5) - 0.875) <= 1e-15, "cubic psi(0.5)");

  double worst_convexity = std::numeric_limits<double>::infinity();
  double worst_fd = 0.0;
  int violations = 0;
  for (const auto& law : {CohesiveLaw::exponential(0.02, 1.5), CohesiveLaw::exponential(1.0, 1.0),
                          CohesiveLaw::cubic_capped(0.05, 1.0), CohesiveLaw::cubic_capped(1.0, 0.4)}) {
    constexpr int kGrid = 200;
    const double top = 4.0 * law.slip_scale();
    const double h = top / (kGrid - 1);
    for (int i = 0; i < kGrid; ++i) {
      const double z = h * i;
      for (int j = 0; j < kGrid; ++j) {
        const double y = h * j;
        const double v = phi(law, y, z);
        const double dy = dphi_dy(law, y, z);
        bool ok = v >= 0.0 && v <= law.sup_psi() && v == phi(law, y, std::max(y, z)) && dy >= 0.0 &&
                  dy <= law.dpsi0() && dy <= law.dpsi(std::max(y, z)) + 1e-15;
        if (j > 0) ok = ok && v >= phi(law, y - h, z);
        if (i > 0) ok = ok && v >= phi(law, y, z - h);
        if (j > 0 && j + 1 < kGrid) {
          const double mid = phi(law, y, z);
          const double ends = 0.5 * phi(law, y - h, z) + 0.5 * phi(law, y + h, z) + law.lambda() / 2.0 * h * h;
          worst_convexity = std::min(worst_convexity, ends - mid);
          ok = ok && mid <= ends + 1e-15;
        }
        if (!ok) ++violations;
      }
    }
    // Central differences away from the seams y = z and (cubic law) y, z = delta.
    constexpr double kStep = 1e-6;
    for (int i = 1; i < kGrid; i += 7) {
      for (int j = 1; j < kGrid; j += 7) {
        const double z = h * i;
        const double y = h * j + 0.37 * h;
        const double s = law.slip_scale();
        if (std::abs(y - z) < 100 * kStep) continue;
        if (law.kind() == LawKind::CubicCapped && (std::abs(y - s) < 100 * kStep || std::abs(z - s) < 100 * kStep)) continue;
        const double fy = (phi(law, y + kStep, z) - phi(law, y - kStep, z)) / (2 * kStep);
        const double fz = (phi(law, y, z + kStep) - phi(law, y, z - kStep)) / (2 * kStep);
        const double scale = law.dpsi0();
        worst_fd = std::max({worst_fd, std::abs(fy - dphi_dy(law, y, z)) / std::max(std::abs(dphi_dy(law, y, z)), scale),
                             std::abs(fz - dphi_dz(law, y, z)) / std::max(std::abs(dphi_dz(law, y, z)), scale)});
      }
    }
    double last = std::numeric_limits<double>::infinity();
    for (double eps : {1.0, 0.3, 0.1, 0.03, 0.01}) {
      const RegularizedLaw reg(law, eps);
      o.require(std::abs(reg.z_eps() - eps * law.dpsi(reg.z_eps())) <= 1e-14 * (1.0 + reg.z_eps()), "z_eps fixed point");
      double gap = 0.0;
      for (int i = 0; i < kGrid; ++i) {
        for (int j = 0; j < kGrid; ++j) gap = std::max(gap, std::abs(phi_eps(reg, h * j, h * i) - phi(law, h * j, h * i)));
      }
      o.require(gap <= reg.phi_gap_bound(), "Phi_eps gap above its bound");
      o.require(gap < last, "Phi_eps gap not decreasing in eps");
      last = gap;
    }
  }
  o.require(violations == 0, std::to_string(violations) + " grid violations");
  o.require(worst_fd <= 1e-6, "finite-difference mismatch " + fmt(worst_fd));
  o.note("grid violations " + std::to_string(violations) + ", smallest midpoint slack " + fmt(worst_convexity) +
         ", max finite-difference mismatch " + fmt(worst_fd));
  return o;
}

// Materials: symmetries, coercivity, Legendre-Hadamard on random matrices; Korn constant.
Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const Box box{2, {0.0, 0.0}, {1.0, 1.0}};
  const std::vector<ElasticTensor> tensors{ElasticTensor::isotropic(2, 0.0, 1.0), ElasticTensor::isotropic(2, 5.0, 1.0),
                                           ElasticTensor::isotropic_field(2, LameAffine{-0.2, 1.0, {0.1, 0.0}, {0.5, -0.3}}, box),
                                           ElasticTensor::isotropic(2, 1.0, 1.0).with_degradation(1e-3)};
  int bad = 0;
  for (const auto& C : tensors) {
    const double c = coercivity_constant(C);
    for (int trial = 0; trial < 1000; ++trial) {
      const Point x{u01(rng), u01(rng)};
      SmallMat A(2, 2), B(2, 2);
      A << g(rng), g(rng), g(rng), g(rng);
      B << g(rng), g(rng), g(rng), g(rng);
      SmallVec a(2), b(2);
      a << g(rng), g(rng);
      b << g(rng), g(rng);
      const std::optional<double> alpha = C.damage_enabled() ? std::optional<double>(u01(rng)) : std::nullopt;
      const SmallMat CA = C.apply(x, alpha, A);
      const SmallMat As = 0.5 * (A + A.transpose());
      const double s = 1.0 + CA.norm() * B.norm();
      const SmallMat ab = a * b.transpose();
      const bool ok = std::abs(frob(CA, B) - frob(C.apply(x, alpha, B), A)) <= 1e-12 * s &&
                      (CA - CA.transpose()).norm() <= 1e-12 * s && (CA - C.apply(x, alpha, As)).norm() <= 1e-12 * s &&
                      frob(CA, A) >= c * As.squaredNorm() - 1e-12 * s &&
                      frob(C.apply(x, alpha, ab), ab) >= 0.5 * c * ab.squaredNorm() - 1e-12 * (1.0 + ab.squaredNorm());
      if (!ok) ++bad;
    }
  }
  o.require(bad == 0, std::to_string(bad) + " tensor checks failed");

  auto s16 = std::make_shared<const FESpace>(build_box_mesh(2, {16, 16}, {Side::Left}));
  const double k16 = estimate_korn_constant(*s16).constant;
  int korn_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    FEField v(s16, 2);
    for (int a : s16->free_nodes()) {
      v.at(a, 0) = g(rng);
      v.at(a, 1) = g(rng);
    }
    if (h1_norm(v) > k16 * sym_grad_l2(v) * (1.0 + 1e-10)) ++korn_bad;
  }
  o.require(korn_bad == 0, std::to_string(korn_bad) + " fields violate the Korn bound");
  const double k32 = estimate_korn_constant(FESpace(build_box_mesh(2, {32, 32}, {Side::Left}))).constant;
  const double change = std::abs(k32 - k16) / k16;
  o.require(change <= 0.05, "Korn constant moved by " + fmt(change) + " from 16 to 32");
  o.note("K16 " + fmt(k16) + ", K32 " + fmt(k32) + ", relative change " + fmt(change));
  return o;
}

// Tiny problems: every computed step agrees with the multi-restart global search.
Outcome criterion3() {
  Outcome o;
  double worst_e = 0.0, worst_h1 = 0.0, worst_el = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const RunConfig c = tiny_bar_config(seed);
    const Problem p = build_problem(c);
    const Trajectory tr = run(c, p);
    if (!tr.complete) {
      o.require(false, "seed " + std::to_string(seed) + " did not complete");
      continue;
    }
    o.require(tr.diagnostics.certified, "seed " + std::to_string(seed) + " violates the convexity hypothesis");
    const CohesiveDensity density(p.law, c.solver.eps);
    for (std::size_t k = 1; k < tr.states.size(); ++k) {
      const SystemState& s = tr.states[k];
      const FEField& gp = tr.states[k - 1].gamma;
      const OracleResult oracle = brute_force_oracle(p, density, s.t, gp, 200, seed * 100 + k);
      const DisplacementFunctional f(p, density, gp);
      const double es = f.value(stack(s.u));
      const FieldPair ou = unstack(p.space, 1, oracle.x);
      FieldPair d = s.u;
      d[0] -= ou[0];
      d[1] -= ou[1];
      worst_e = std::max(worst_e, std::abs(es - oracle.energy));
      worst_h1 = std::max(worst_h1, pair_h1_norm(d));
      worst_el = std::max(worst_el, check_el_residual(p, s.u, gp, density));
    }
  }
  o.require(worst_e <= 1e-8, "energy gap " + fmt(worst_e));
  o.require(worst_h1 <= 1e-6, "H1 distance " + fmt(worst_h1));
  o.require(worst_el <= 1e-8, "EL residual " + fmt(worst_el));
  o.note("max energy gap " + fmt(worst_e) + ", max H1 distance " + fmt(worst_h1) + ", max EL residual " + fmt(worst_el));
  return o;
}

// Discrete energy balance on the 2D ramp: size at T/64, first-order rate, one-sided sign.
Outcome criterion4() {
  Outcome o;
  const RunConfig base = load_config(config_path("ramp_2d.json"));
  const Problem p = build_problem(base);
  const double T = base.loading.horizon;
  std::vector<double> taus{T / 32, T / 64, T / 128}, drifts;
  for (double tau : taus) {
    RunConfig c = base;
    c.solver.tau = tau;
    const Trajectory tr = run(c, p);
    if (!tr.complete) {
      o.require(false, "tau " + fmt(tau) + " failed: " + tr.failure);
      return o;
    }
    const EnergyBalance eb = check_energy_balance(tr);
    drifts.push_back(eb.max_abs);
    o.require(eb.max_upper <= 10 * c.solver.inner_tol, "upper drift " + fmt(eb.max_upper) + " at tau " + fmt(tau));
    if (tau == T / 64) {
      const double rel = eb.max_abs / eb.scale;
      o.require(rel <= 5e-3, "relative drift " + fmt(rel) + " at T/64");
      o.note("relative drift at T/64 " + fmt(rel));
    }
  }
  const double s = slope(taus, drifts);
  o.require(s >= 0.9, "drift slope " + fmt(s));
  o.note("drift slope " + fmt(s));
  return o;
}

// Sampled global stability of the 2D ramp trajectory.
Outcome criterion5() {
  Outcome o;
  const RunConfig c = load_config(config_path("ramp_2d.json"));
  const Problem p = build_problem(c);
  const Trajectory tr = run(c, p);
  if (!tr.complete) {
    o.require(false, "run failed: " + tr.failure);
    return o;
  }
  const StabilityCheck gs = check_global_stability(p, tr, c.verify.seed, 100);
  o.require(gs.min_margin >= -1e-8, "margin " + fmt(gs.min_margin) + " at step " + std::to_string(gs.worst_step));
  o.note("min margin " + fmt(gs.min_margin) + " over " + std::to_string(gs.competitors_per_step) + " competitors/step");
  return o;
}

// Cyclic loading: history-slip bookkeeping and the unloading/reloading branches at a probe node.
Outcome criterion6() {
  Outcome o;
  const RunConfig c = load_config(config_path("cyclic_2d.json"));
  const Problem p = build_problem(c);
  const Trajectory tr = run(c, p);
  if (!tr.complete) {
    o.require(false, "run failed: " + tr.failure);
    return o;
  }
  try {
    const HistorySlipCheck hs = check_history_slip(tr);
    o.require(hs.monotone && hs.max_gap == 0.0, "gamma gap " + fmt(hs.max_gap));
  } catch (const std::exception& e) {
    o.require(false, e.what());
  }

  // Probe: the free node with the largest final history slip. The traction is read off the
  // equilibrium of plate 1 at that node, K1 u1 + m_a t = 0.
  const FESpace& space = *p.space;
  int probe = -1;
  for (int a : space.free_nodes()) {
    if (probe < 0 || tr.states.back().gamma.at(a) > tr.states.back().gamma.at(probe)) probe = a;
  }
  const Eigen::SparseMatrix<double> K1 = assemble_stiffness(space, p.tensors[0]);
  const double m = space.lumped_mass()[probe];
  const RegularizedLaw reg(p.law, c.solver.eps);
  double worst_unload = 0.0, worst_envelope = 0.0, worst_reload = 0.0;
  int unload = 0, envelope = 0, reload = 0;
  bool unloaded = false;
  for (std::size_t k = 1; k < tr.states.size(); ++k) {
    const SystemState& s = tr.states[k];
    const double gprev = tr.states[k - 1].gamma.at(probe);
    const double slip = (s.u[0].node_value(probe) - s.u[1].node_value(probe)).norm();
    if (slip < 1e-8 || gprev < 1e-8) continue;
    const Eigen::VectorXd f = K1 * s.u[0].coeffs();
    const double traction = std::hypot(f[2 * probe], f[2 * probe + 1]) / m;
    if (slip < gprev * (1.0 - 1e-9)) {
      const double expected = p.law.dpsi(gprev) / gprev;
      worst_unload = std::max(worst_unload, std::abs(traction / slip - expected) / expected);
      ++unload;
      unloaded = true;
    } else {
      // Below z_eps the scheme follows the quadratic start slip / eps of the regularized envelope.
      const double expected = reg.dpsi(slip);
      worst_envelope = std::max(worst_envelope, std::abs(traction - expected) / expected);
      ++envelope;
      if (unloaded) {
        worst_reload = std::max(worst_reload, std::abs(traction - p.law.dpsi(slip)) / p.law.dpsi(slip));
        ++reload;
      }
    }
  }
  o.require(unload > 0 && reload > 0, "probe saw no unloading or no reload steps");
  o.require(worst_unload <= 0.05, "unloading slope off by " + fmt(worst_unload));
  o.require(worst_envelope <= 0.05, "envelope traction off by " + fmt(worst_envelope));
  o.require(worst_reload <= 0.05, "reload traction off the psi' envelope by " + fmt(worst_reload));
  o.note("probe node " + std::to_string(probe) + ": " + std::to_string(unload) + " unloading steps (max rel err " +
         fmt(worst_unload) + "), " + std::to_string(envelope) + " envelope steps (max rel err " + fmt(worst_envelope) +
         "), " + std::to_string(reload) + " of them on reload against psi' (max rel err " + fmt(worst_reload) + ")");
  return o;
}

// Uniform convexity: sampled gap when the hypothesis holds, warning when it does not.
Outcome criterion7() {
  Outcome o;
  const RunConfig c = load_config(config_path("ramp_2d.json"));
  const Problem p = build_problem(c);
  const RunDiagnostics d = compute_diagnostics(p, c.solver);
  o.require(d.certified, "ramp fixture should satisfy the convexity hypothesis");
  const CohesiveDensity density(p.law, c.solver.eps);
  double worst = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (double t : {0.25, 0.5, 1.0}) {
    FEField gamma(p.space, 1);
    for (int a = 0; a < p.space->num_nodes(); ++a) gamma.at(a) = u(rng);
    worst = std::min(worst, sample_convexity_gap(p, density, t, gamma, d.mu, 100, 11));
  }
  o.require(worst >= -1e-10, "convexity gap " + fmt(worst));

  RunConfig bad = load_config(config_path("zero_load.json"));
  bad.law.kappa = 5.0;
  bad.law.rho = 10.0;
  const Problem q = build_problem(bad);
  const Trajectory tr = run(bad, q);
  bool warned = false;
  for (const auto& w : tr.warnings) warned = warned || w.find("non-certified") != std::string::npos;
  o.require(!tr.diagnostics.certified && warned, "violating configuration was not flagged");
  o.note("mu " + fmt(d.mu) + ", min gap " + fmt(worst) + ", violating config flagged: " + (warned ? "yes" : "no"));
  return o;
}

// eps ladder: successive differences shrink, F - F_eps within the analytic bound.
Outcome criterion8() {
  Outcome o;
  const RunConfig c = load_config(config_path("ramp_2d.json"));
  const Problem p = build_problem(c);
  const double e = c.solver.eps;
  const EpsLadder ladder = eps_continuation(p, c.solver, {e, e / 3.0, e / 9.0});
  for (const auto& r : ladder.runs) o.require(r.complete, "rung failed: " + r.failure);
  if (!o.pass) return o;
  int compared = 0, skipped = 0;
  for (std::size_t k = 0; k < ladder.diffs[0].size(); ++k) {
    if (ladder.diffs[0][k] == 0.0) {
      ++skipped;
      continue;
    }
    ++compared;
    o.require(ladder.diffs[1][k] < ladder.diffs[0][k], "difference grew at step " + std::to_string(k));
  }
  double ratio = 0.0;
  for (std::size_t l = 0; l < ladder.gaps.size(); ++l) {
    for (double g : ladder.gaps[l]) ratio = std::max(ratio, g / ladder.bounds[l]);
  }
  o.require(ratio <= 1.0, "|F - F_eps| exceeds the bound");
  double d0 = 0.0, d1 = 0.0;
  for (double v : ladder.diffs[0]) d0 = std::max(d0, v);
  for (double v : ladder.diffs[1]) d1 = std::max(d1, v);
  o.note(std::to_string(compared) + " steps compared (" + std::to_string(skipped) + " with zero difference), max H1 diffs " +
         fmt(d0) + " -> " + fmt(d1) + ", max gap/bound " + fmt(ratio));
  return o;
}

// Gradient damage: irreversibility, the expensive-damage limit, tiny global search, energy rate.
Outcome criterion9() {
  Outcome o;
  const RunConfig c = load_config(config_path("damage_2d.json"));
  const Problem p = build_problem(c);
  const Trajectory tr = run(c, p);
  if (!tr.complete) {
    o.require(false, "damage run failed: " + tr.failure);
    return o;
  }
  double amax = 0.0;
  bool monotone = true;
  for (std::size_t k = 1; k < tr.states.size(); ++k) {
    for (int l = 0; l < 2; ++l) {
      const auto& now = (*tr.states[k].alpha)[l].coeffs();
      const auto& before = (*tr.states[k - 1].alpha)[l].coeffs();
      monotone = monotone && (now - before).minCoeff() >= 0.0 && now.maxCoeff() <= 1.0 && now.minCoeff() >= 0.0;
      amax = std::max(amax, now.maxCoeff());
    }
  }
  o.require(monotone, "damage not monotone in [0,1]");

  // Expensive damage keeps alpha frozen at alpha0 and reduces to the sound problem with C (eta + 1).
  RunConfig ex = c;
  ex.damage.sigma1 = {1e6, 1e6};
  ex.mesh.divisions = {4, 4};
  ex.solver.tau = 0.125;
  const Problem pe = build_problem(ex);
  const Trajectory te = run(ex, pe);
  RunConfig sound = ex;
  sound.damage.enabled = false;
  sound.solver.damage = false;
  for (auto& mat : sound.materials) {
    mat.lambda *= 1.0 + ex.damage.eta;
    mat.mu *= 1.0 + ex.damage.eta;
  }
  const Problem ps = build_problem(sound);
  const Trajectory ts = run(sound, ps);
  double frozen = 0.0, match = 0.0;
  if (te.complete && ts.complete && te.states.size() == ts.states.size()) {
    for (std::size_t k = 0; k < te.states.size(); ++k) {
      for (int l = 0; l < 2; ++l) {
        frozen = std::max(frozen, ((*te.states[k].alpha)[l].coeffs().array() - ex.damage.alpha0).abs().maxCoeff());
        match = std::max(match, (te.states[k].u[l].coeffs() - ts.states[k].u[l].coeffs()).lpNorm<Eigen::Infinity>());
      }
    }
  } else {
    o.require(false, "expensive-damage comparison runs failed");
  }
  o.require(frozen <= 1e-8 && match <= 1e-8, "expensive damage: alpha moved " + fmt(frozen) + ", u off by " + fmt(match));

  // Tiny 1D instance against the joint global search.
  RunConfig tiny = tiny_bar_config(21);
  tiny.mesh.divisions = {4, 1};
  tiny.damage.enabled = true;
  tiny.solver.damage = true;
  tiny.damage.eta = 1e-3;
  tiny.damage.sigma1 = {0.02, 0.05};
  tiny.damage.sigma2 = {0.01, 0.01};
  tiny.damage.r = 2.0;
  tiny.loading.amplitude = 1.0;
  const Problem pt = build_problem(tiny);
  const Trajectory tt = run(tiny, pt);
  double worst = 0.0, tiny_alpha = 0.0;
  if (!tt.complete) {
    o.require(false, "tiny damage run failed: " + tt.failure);
  } else {
    const CohesiveDensity density(pt.law, tiny.solver.eps);
    for (std::size_t k = 1; k < tt.states.size(); ++k) {
      const SystemState& s = tt.states[k];
      const SystemState& prev = tt.states[k - 1];
      const OracleResult oracle = brute_force_damage_oracle(pt, density, s.t, prev.gamma, *prev.alpha, 200, 31 + k);
      const double mine = joint_energy(pt, density, s.u, *s.alpha, prev.gamma);
      worst = std::max(worst, std::abs(mine - oracle.energy));
      tiny_alpha = std::max(tiny_alpha, std::max((*s.alpha)[0].coeffs().maxCoeff(), (*s.alpha)[1].coeffs().maxCoeff()));
    }
  }
  o.require(worst <= 1e-6, "tiny damage energy gap " + fmt(worst));

  std::vector<double> taus{1.0 / 32, 1.0 / 64, 1.0 / 128}, drifts;
  for (double tau : taus) {
    RunConfig r = c;
    r.solver.tau = tau;
    const Trajectory t = run(r, p);
    if (!t.complete) {
      o.require(false, "damage tau " + fmt(tau) + " failed");
      return o;
    }
    drifts.push_back(check_energy_balance(t).max_abs);
  }
  const double s = slope(taus, drifts);
  o.require(s >= 0.9, "damage drift slope " + fmt(s));
  o.note("max alpha " + fmt(amax) + ", expensive limit alpha drift " + fmt(frozen) + " u diff " + fmt(match) +
         ", tiny energy gap " + fmt(worst) + " (max alpha " + fmt(tiny_alpha) + "), drift slope " + fmt(s));
  return o;
}

// Reproducibility: verify regenerates the simulate report byte for byte, twice.
Outcome criterion10() {
  Outcome o;
  const auto dir = scratch_dir("acceptance_repro");
  auto call = [](std::vector<std::string> args) {
    args.insert(args.begin(), "plateslip");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::run_cli(static_cast<int>(argv.size()), argv.data());
  };
  const std::string run_dir = (dir / "run").string();
  o.require(call({"simulate", "--config", config_path("ramp_2d.json"), "--out", run_dir}) == cli::kOk, "simulate failed");
  if (!o.pass) return o;
  const std::string first = (dir / "first.json").string();
  const std::string second = (dir / "second.json").string();
  o.require(call({"verify", "--trajectory", run_dir, "--out", first}) == cli::kOk, "first verify failed");
  o.require(call({"verify", "--trajectory", run_dir, "--out", second}) == cli::kOk, "second verify failed");
  if (!o.pass) return o;
  const std::string original = read_text(run_dir + "/report.json");
  o.require(read_text(first) == original, "first verify differs from the simulate report");
  o.require(read_text(second) == original, "second verify differs from the simulate report");
  o.note("report.json " + std::to_string(original.size()) + " bytes reproduced twice");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s (%s) [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
