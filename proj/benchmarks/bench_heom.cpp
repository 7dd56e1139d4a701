#include <benchmark/benchmark.h>

#include <qdyn/heom.hpp>

using namespace qdyn;

// One right-hand-side evaluation for the spin-boson hierarchy at growing depth.
static void BM_HeomRhs(benchmark::State& state) {
  const std::vector<HeomBathBinding> baths{{DrudeLorentzSD{0.2, 5.0, 2.0}, sigma_z()}};
  HeomArgs args;
  args.num_modes = 2;
  args.lmax = static_cast<std::size_t>(state.range(0));
  const HeomSystem sys(create_tls_hamiltonian(0, 1), baths, 1.0, args);
  DensityMatrix rho = DensityMatrix::Zero(2, 2);
  rho(0, 0) = 1.0;
  const Vector y = sys.initial_state(rho);
  Vector dy(y.size());
  for (auto _ : state) {
    sys.rhs(0.0, y, dy);
    benchmark::DoNotOptimize(dy.data());
  }
  state.counters["ados"] = static_cast<double>(sys.hierarchy().size());
}
BENCHMARK(BM_HeomRhs)->DenseRange(2, 8, 2);

// Seven sites, one bath per site, as in the light-harvesting runs.
static void BM_HeomSevenSiteRhs(benchmark::State& state) {
  Operator h = Operator::Zero(7, 7);
  for (Eigen::Index i = 0; i < 7; ++i) {
    h(i, i) = 0.01 * static_cast<double>(i);
    if (i + 1 < 7) h(i, i + 1) = h(i + 1, i) = 0.005;
  }
  std::vector<HeomBathBinding> baths;
  for (Eigen::Index i = 0; i < 7; ++i) {
    Operator s = Operator::Zero(7, 7);
    s(i, i) = 1.0;
    baths.push_back({DrudeLorentzSD{0.00016, 0.0005, 1.0}, s});
  }
  HeomArgs args;
  args.num_modes = 2;
  args.lmax = static_cast<std::size_t>(state.range(0));
  const HeomSystem sys(h, baths, 1.0 / 0.00095, args);
  DensityMatrix rho = DensityMatrix::Zero(7, 7);
  rho(0, 0) = 1.0;
  const Vector y = sys.initial_state(rho);
  Vector dy(y.size());
  for (auto _ : state) {
    sys.rhs(0.0, y, dy);
    benchmark::DoNotOptimize(dy.data());
  }
  state.counters["ados"] = static_cast<double>(sys.hierarchy().size());
}
BENCHMARK(BM_HeomSevenSiteRhs)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
