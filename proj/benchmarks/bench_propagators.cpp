#include <benchmark/benchmark.h>

#include <qdyn/bath.hpp>
#include <qdyn/empirical.hpp>
#include <qdyn/eta.hpp>

using namespace qdyn;

static void BM_BarePropagators(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> sites(n, 0.0);
  const Operator h = create_nn_hamiltonian(sites, -1.0, n >= 3);
  for (auto _ : state) benchmark::DoNotOptimize(time_step_propagator(h, 0.25));
}
BENCHMARK(BM_BarePropagators)->Arg(2)->Arg(7)->Arg(16);

static void BM_LindbladDephasing(benchmark::State& state) {
  BarePropagateRequest req;
  req.hamiltonian = create_tls_hamiltonian(0.5, 1.0);
  req.rho0 = DensityMatrix::Constant(2, 2, 0.5);
  req.dt = 0.125;
  req.ntimes = static_cast<std::size_t>(state.range(0));
  req.jump_ops = {sigma_z()};
  for (auto _ : state) benchmark::DoNotOptimize(propagate_bare(req));
}
BENCHMARK(BM_LindbladDephasing)->Arg(100)->Arg(1000);

static void BM_Discretize(benchmark::State& state) {
  const ExponentialCutoffSD sd{0.1, 7.5, 1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(discretize(sd, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Discretize)->Arg(100)->Arg(1000);

static void BM_Eta(benchmark::State& state) {
  const ExponentialCutoffSD sd{0.1, 7.5, 1.0, 2.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(compute_eta(sd, 5.0, 0.25, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Eta)->Arg(10)->Arg(100);

BENCHMARK_MAIN();
