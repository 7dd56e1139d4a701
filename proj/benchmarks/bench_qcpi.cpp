#include <benchmark/benchmark.h>

#include <qdyn/qcpi.hpp>

using namespace qdyn;

namespace {

HarmonicBathSolvent solvent() {
  HarmonicBathSolvent s;
  s.beta = 5.0;
  s.modes = discretize(ExponentialCutoffSD{0.1, 7.5, 1.0, 2.0}, 100);
  s.svals = {1.0, -1.0};
  s.n_points = 1;
  s.seed = 1;
  return s;
}

Operator biased() {
  Operator h(2, 2);
  h << 1.0, -1.0, -1.0, -1.0;
  return h;
}

DensityMatrix ground() {
  DensityMatrix r = DensityMatrix::Zero(2, 2);
  r(0, 0) = 1.0;
  return r;
}

}  // namespace

// One trajectory with its 100 step propagators, dt / 100 classical sub-steps.
static void BM_ReferenceTrajectory(benchmark::State& state) {
  const auto s = solvent();
  const auto pt = sample_point(s, 1.0, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(calculate_reference_propagators(biased(), s, pt, ground(), 0.0025, 0.25, 100));
}
BENCHMARK(BM_ReferenceTrajectory)->Unit(benchmark::kMillisecond);

// Full per-sample QCPI work: trajectory plus residual path sum.
static void BM_QcpiSample(benchmark::State& state) {
  QcpiArgs args;
  args.kmax = static_cast<std::size_t>(state.range(0));
  const QcpiRunner runner(biased(), SpectralDensity(ExponentialCutoffSD{0.1, 7.5, 1.0, 2.0}), solvent(),
                          ground(), 0.0025, 0.25, 100, args);
  for (auto _ : state) benchmark::DoNotOptimize(runner.run_sample(0));
}
BENCHMARK(BM_QcpiSample)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Sampling(benchmark::State& state) {
  const auto s = solvent();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_point(s, 1.0, i++));
}
BENCHMARK(BM_Sampling);

BENCHMARK_MAIN();
