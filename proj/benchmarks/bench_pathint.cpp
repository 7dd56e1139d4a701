#include <benchmark/benchmark.h>

#include <qdyn/pathint.hpp>
#include <qdyn/ttm.hpp>

using namespace qdyn;

namespace {

const std::vector<PathBath> kBath{{ExponentialCutoffSD{0.1, 7.5, 1.0, 2.0}, {1.0, -1.0}}};

DensityMatrix ground() {
  DensityMatrix r = DensityMatrix::Zero(2, 2);
  r(0, 0) = 1.0;
  return r;
}

}  // namespace

// Iterative propagation over 100 steps as a function of memory length.
static void BM_QuapiMemory(benchmark::State& state) {
  const auto L = static_cast<std::size_t>(state.range(0));
  const auto fbU = calculate_bare_propagators(create_tls_hamiltonian(0, 1), 0.25, 100);
  const auto terms = make_influence_terms(kBath, 5.0, 0.25, 100);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_quapi(fbU, terms, ground(), 100, L));
}
BENCHMARK(BM_QuapiMemory)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_Augmented(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  AugmentedArgs args;
  args.method = state.range(1) ? AugmentedMethod::Blip : AugmentedMethod::Quapi;
  const auto fbU = calculate_bare_propagators(create_tls_hamiltonian(0, 1), 0.25, n);
  const auto terms = make_influence_terms(kBath, 5.0, 0.25, n);
  for (auto _ : state) benchmark::DoNotOptimize(build_augmented_propagator(fbU, terms, n, args));
}
BENCHMARK(BM_Augmented)->ArgsProduct({{4, 6, 8}, {0, 1}})->Unit(benchmark::kMillisecond);

static void BM_TtmExtend(benchmark::State& state) {
  const auto fbU = calculate_bare_propagators(create_tls_hamiltonian(0, 1), 0.25, 6);
  const auto e = build_augmented_propagator(fbU, kBath, 5.0, 0.25, 6);
  const auto t = build_transfer_tensors(e, 6);
  for (auto _ : state)
    benchmark::DoNotOptimize(extend_propagators(e, t, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_TtmExtend)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
