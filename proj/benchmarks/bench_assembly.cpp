#include <benchmark/benchmark.h>

#include "plateslip/energies.hpp"

using namespace plateslip;

namespace {

SpacePtr square(int n) { return std::make_shared<const FESpace>(build_box_mesh(2, {n, n}, {Side::Left})); }

void BM_AssembleStiffness(benchmark::State& state) {
  const auto space = square(static_cast<int>(state.range(0)));
  const ElasticTensor C = ElasticTensor::isotropic(2, 5.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(*space, C));
  state.SetItemsProcessed(state.iterations() * space->num_cells());
}
BENCHMARK(BM_AssembleStiffness)->Arg(16)->Arg(32)->Arg(64);

void BM_FunctionalGradient(benchmark::State& state) {
  const auto space = square(static_cast<int>(state.range(0)));
  const FieldFunction trace = [](const Point& p) { return std::array<double, 2>{0.0, p[1]}; };
  const TensorPair tensors{ElasticTensor::isotropic(2, 0.0, 1.0), ElasticTensor::isotropic(2, 5.0, 1.0)};
  const Problem problem{space, tensors, CohesiveLaw::exponential(0.02, 1.5),
                        LoadingProgram(Profile::Ramp, 6.0, 1.0, analytic_lift(space, trace)), std::nullopt};
  FEField gamma(space, 1);
  const DisplacementFunctional f(problem, CohesiveDensity(problem.law, 0.05), gamma);
  const Eigen::VectorXd x = Eigen::VectorXd::Random(f.size());
  for (auto _ : state) benchmark::DoNotOptimize(f.gradient(x));
}
BENCHMARK(BM_FunctionalGradient)->Arg(16)->Arg(32);

void BM_KornConstant(benchmark::State& state) {
  const auto space = square(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_korn_constant(*space));
}
BENCHMARK(BM_KornConstant)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
