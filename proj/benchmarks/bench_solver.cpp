#include <benchmark/benchmark.h>

#include "plateslip/mm_solver.hpp"

using namespace plateslip;

namespace {

Problem ramp_problem(int n) {
  const auto space = std::make_shared<const FESpace>(build_box_mesh(2, {n, n}, {Side::Left}));
  const TensorPair tensors{ElasticTensor::isotropic(2, 0.0, 1.0), ElasticTensor::isotropic(2, 5.0, 1.0)};
  const FieldFunction trace = [](const Point& p) { return std::array<double, 2>{0.0, p[1]}; };
  return {space, tensors, CohesiveLaw::exponential(0.02, 1.5),
          LoadingProgram(Profile::Ramp, 6.0, 1.0, minimal_energy_lift(space, tensors, trace)), std::nullopt};
}

// One time step from rest at t = 1/2.
void BM_SolveStep(benchmark::State& state) {
  const Problem problem = ramp_problem(static_cast<int>(state.range(0)));
  const CohesiveDensity density(problem.law, 0.05);
  const FEField gamma(problem.space, 1);
  const FieldPair warm = zero_pair(problem.space, 2);
  const SolverConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(solve_step(problem, density, 0.5, gamma, nullptr, warm, config));
}
BENCHMARK(BM_SolveStep)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Evolve(benchmark::State& state) {
  const Problem problem = ramp_problem(16);
  SolverConfig config;
  config.tau = 1.0 / static_cast<double>(state.range(0));
  const RunDiagnostics diagnostics = compute_diagnostics(problem, config);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(problem, config, std::nullopt, diagnostics));
}
BENCHMARK(BM_Evolve)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
