#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "plateslip/errors.hpp"
#include "plateslip/verification.hpp"

using namespace plateslip;
using plateslip::testing::config_path;
using plateslip::testing::tiny_bar_config;

namespace {

struct Run {
  RunConfig config;
  Problem problem;
  Trajectory trajectory;
};

Run run(RunConfig c) {
  Problem p = build_problem(c);
  Trajectory t = evolve(p, c.solver, initial_displacement(c, p));
  return {std::move(c), std::move(p), std::move(t)};
}

}  // namespace

TEST_CASE("energy balance of the zero trajectory") {
  const Run r = run(load_config(config_path("zero_load.json")));
  const EnergyBalance eb = check_energy_balance(r.trajectory);
  CHECK(eb.max_abs == 0.0);
  CHECK(eb.max_abs_left == 0.0);
  CHECK(eb.drift.size() == r.trajectory.states.size());
}

TEST_CASE("energy balance on the bar: competitor drift is one-sided") {
  const Run r = run(load_config(config_path("bar_1d.json")));
  const EnergyBalance eb = check_energy_balance(r.trajectory);
  CHECK(eb.max_upper <= 10 * r.config.solver.inner_tol);
  CHECK(eb.max_abs > 0.0);
  CHECK(eb.drift.front() == 0.0);
}

TEST_CASE("global stability margins") {
  const Run r = run(tiny_bar_config(8));
  const StabilityCheck gs = check_global_stability(r.problem, r.trajectory, 7, 30);
  CHECK(gs.min_margin >= -1e-8);
  CHECK(gs.margins.size() == r.trajectory.states.size());
  CHECK(gs.competitors_per_step >= 30);
  const StabilityCheck again = check_global_stability(r.problem, r.trajectory, 7, 30);
  CHECK(again.margins == gs.margins);
}

TEST_CASE("history slip bookkeeping") {
  Run r = run(load_config(config_path("bar_1d.json")));
  const HistorySlipCheck ok = check_history_slip(r.trajectory);
  CHECK(ok.monotone);
  CHECK(ok.max_gap == 0.0);

  Trajectory shrunk = r.trajectory;
  const int node = r.problem.space->num_nodes() / 2;
  shrunk.states[10].gamma.at(node) *= 0.5;
  CHECK_THROWS_AS((void)check_history_slip(shrunk), StateCorruption);

  Trajectory negative = r.trajectory;
  negative.states[3].gamma.at(node) = -1.0;
  CHECK_THROWS_AS((void)check_history_slip(negative), StateCorruption);
}

TEST_CASE("Euler-Lagrange residual") {
  const Run r = run(tiny_bar_config(9));
  const CohesiveDensity density(r.problem.law, r.config.solver.eps);
  FEField gamma0(r.problem.space, 1);
  const FieldPair zero = zero_pair(r.problem.space, 1);
  CHECK(check_el_residual(r.problem, zero, gamma0, density) == 0.0);

  const auto& states = r.trajectory.states;
  for (std::size_t k = 1; k < states.size(); ++k) {
    CHECK(check_el_residual(r.problem, states[k].u, states[k - 1].gamma, density) <= 1e-8);
  }
  // Perturbing an interior dof moves the residual linearly for small amplitudes.
  const SystemState& s = states.back();
  const FEField& gp = states[states.size() - 2].gamma;
  double prev = 0.0;
  for (double h : {1e-6, 2e-6}) {
    FieldPair v = s.u;
    v[0].at(2) += h;
    const double res = check_el_residual(r.problem, v, gp, density);
    if (prev > 0.0) CHECK(res / prev == doctest::Approx(2.0).epsilon(1e-2));
    prev = res;
  }
}

TEST_CASE("brute-force oracle") {
  const RunConfig c = tiny_bar_config(10);
  const Problem p = build_problem(c);
  const CohesiveDensity density(p.law, c.solver.eps);
  FEField gamma(p.space, 1);
  const OracleResult o = brute_force_oracle(p, density, 1.0, gamma, 40, 3);
  CHECK(o.restarts == 40);
  CHECK(o.converged > 0);
  CHECK(o.spread <= 1e-10);

  RunConfig still = c;
  still.loading.amplitude = 0.0;
  const Problem q = build_problem(still);
  const OracleResult z = brute_force_oracle(q, density, 1.0, gamma, 10, 3);
  CHECK(std::abs(z.energy) <= 1e-14);
  CHECK(z.x.lpNorm<Eigen::Infinity>() <= 1e-8);

  const Problem big = build_problem(load_config(config_path("bar_1d.json")));
  FEField gb(big.space, 1);
  CHECK_THROWS_AS((void)brute_force_oracle(big, density, 1.0, gb, 2, 3), ConfigError);
}

TEST_CASE("convexity gap sampling") {
  const Run r = run(tiny_bar_config(11));
  const RunDiagnostics& d = r.trajectory.diagnostics;
  REQUIRE(d.certified);
  const CohesiveDensity density(r.problem.law, r.config.solver.eps);
  const double gap = sample_convexity_gap(r.problem, density, 0.5, r.trajectory.states[2].gamma, d.mu, 50, 1);
  CHECK(gap >= -1e-10);
}

TEST_CASE("certification report is deterministic") {
  const Run r = run(tiny_bar_config(12));
  VerifyOptions opt;
  opt.competitors = 20;
  opt.convexity_samples = 20;
  const CertificationReport a = certify(r.problem, r.trajectory, opt);
  const CertificationReport b = certify(r.problem, r.trajectory, opt);
  CHECK(a.pass());
  CHECK(a.to_json() == b.to_json());
  CHECK(a.steps.size() == r.trajectory.states.size());
  CHECK(a.to_json().find("\"pass\"") != std::string::npos);
  CHECK_FALSE(a.summary().empty());
}
