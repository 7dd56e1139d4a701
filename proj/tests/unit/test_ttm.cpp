#include <cmath>

#include <gtest/gtest.h>

#include <qdyn/empirical.hpp>
#include <qdyn/ttm.hpp>

#include "oracles/oracles.hpp"

using namespace qdyn;

namespace {

const ExponentialCutoffSD kOhmic{0.1, 7.5, 1.0, 2.0};

DensityMatrix ground() {
  DensityMatrix r = DensityMatrix::Zero(2, 2);
  r(0, 0) = 1.0;
  return r;
}

std::vector<PathBath> spin_boson() { return {{kOhmic, {1.0, -1.0}}}; }

AugmentedPropagatorSeries lindblad_series(std::size_t n, double dt) {
  const Matrix h = create_tls_hamiltonian(0.3, 1.0);
  const Matrix l = lindblad_liouvillian(h, {0.4 * sigma_z(), 0.2 * sigma_x()});
  const Matrix step = expm(l * dt);
  AugmentedPropagatorSeries e;
  e.dt = dt;
  e.maps.push_back(Matrix::Identity(4, 4));
  for (std::size_t k = 1; k <= n; ++k) e.maps.push_back(step * e.maps.back());
  return e;
}

Vector trace_row() {
  Vector t = Vector::Zero(4);
  t(0) = t(3) = 1.0;
  return t;
}

}  // namespace

TEST(TransferTensors, MarkovianInputCollapses) {
  const auto e = lindblad_series(8, 0.2);
  const auto t = build_transfer_tensors(e, 8);
  ASSERT_EQ(t.tensors.size(), 8u);
  EXPECT_EQ(t.tensors[0], e.maps[1]);
  for (std::size_t m = 2; m <= 8; ++m) EXPECT_LT(t.tensors[m - 1].cwiseAbs().maxCoeff(), 1e-12) << m;
}

TEST(TransferTensors, SingleTensorIsFirstMap) {
  const auto fb = calculate_bare_propagators(create_tls_hamiltonian(0, 1), 0.25, 3);
  const auto e = build_augmented_propagator(fb, spin_boson(), 5.0, 0.25, 3);
  const auto t = build_transfer_tensors(e, 1);
  ASSERT_EQ(t.tensors.size(), 1u);
  EXPECT_EQ(t.tensors[0], e.maps[1]);
}

TEST(TransferTensors, RecursionReproducesInput) {
  const auto fb = calculate_bare_propagators(create_tls_hamiltonian(0, 1), 0.25, 5);
  const auto e = build_augmented_propagator(fb, spin_boson(), 5.0, 0.25, 5);
  const auto t = build_transfer_tensors(e, 5);
  for (std::size_t k = 1; k <= 5; ++k) {
    Matrix sum = Matrix::Zero(4, 4);
    for (std::size_t m = 1; m <= k; ++m) sum += t.tensors[m - 1] * e.maps[k - m];
    EXPECT_LT((sum - e.maps[k]).cwiseAbs().maxCoeff(), 1e-13) << k;
  }
}

TEST(TransferTensors, MemoryDecays) {
  const auto fb = calculate_bare_propagators(create_tls_hamiltonian(0, 1), 0.25, 6);
  AugmentedArgs blip;
  blip.method = AugmentedMethod::Blip;
  const auto e = build_augmented_propagator(fb, spin_boson(), 5.0, 0.25, 6, blip);
  const auto t = build_transfer_tensors(e, 6);
  for (std::size_t m = 2; m < 6; ++m)
    EXPECT_LT(t.tensors[m].norm(), t.tensors[m - 1].norm()) << "T_" << m + 1;
}

TEST(Ttm, WithinMemoryIsBitIdentical) {
  const auto fb = calculate_bare_propagators(create_tls_hamiltonian(0, 1), 0.25, 5);
  const auto e = build_augmented_propagator(fb, spin_boson(), 5.0, 0.25, 5);
  const auto t = build_transfer_tensors(e, 5);
  const auto ext = extend_propagators(e, t, 30);
  ASSERT_EQ(ext.size(), 31u);
  for (std::size_t k = 0; k <= 5; ++k) EXPECT_EQ(ext.maps[k], e.maps[k]);
  for (const auto& m : ext.maps)
    EXPECT_LT((trace_row().transpose() * m - trace_row().transpose()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Ttm, ShortRunUsesBackendDirectly) {
  const auto fb = calculate_bare_propagators(create_tls_hamiltonian(0, 1), 0.25, 6);
  const auto ttm = propagate_ttm(fb, spin_boson(), 5.0, ground(), 0.25, 4, 6);
  const auto e = build_augmented_propagator(fb, spin_boson(), 5.0, 0.25, 6);
  const auto direct = apply_propagator(e, ground(), 0.25, 4);
  for (std::size_t k = 0; k <= 4; ++k) EXPECT_EQ(ttm.states[k], direct.states[k]);
}

TEST(Ttm, LindbladSeriesLongTime) {
  const double dt = 0.2;
  const auto e = lindblad_series(3, dt);
  const AugmentedBackend backend = [&](std::size_t n) { return lindblad_series(n, dt); };
  const auto ttm = propagate_ttm(backend, ground(), dt, 200, 3);
  BarePropagateRequest req;
  req.hamiltonian = create_tls_hamiltonian(0.3, 1.0);
  req.jump_ops = {0.4 * sigma_z(), 0.2 * sigma_x()};
  req.rho0 = ground();
  req.dt = dt;
  req.ntimes = 200;
  req.integrator.rtol = req.integrator.atol = 1e-12;
  EXPECT_LT(oracle::max_deviation(ttm, propagate_bare(req)), 1e-8);
}

TEST(Ttm, TracksIterativeQuapi) {
  // Truncating the dynamical map is a different approximation from truncating
  // the path memory; the gap closes as rmax grows.
  const auto fb = calculate_bare_propagators(create_tls_hamiltonian(0, 1), 0.25, 100);
  AugmentedArgs blip;
  blip.method = AugmentedMethod::Blip;
  double previous = INFINITY;
  for (std::size_t r : {6, 8}) {
    const auto q = propagate_quapi(fb, spin_boson(), 5.0, ground(), 0.25, 100, r);
    const auto t = propagate_ttm(fb, spin_boson(), 5.0, ground(), 0.25, 100, r, blip);
    const double gap = oracle::max_population_deviation(q, t);
    EXPECT_LT(gap, r == 6 ? 1e-2 : 5e-3) << "rmax " << r;
    EXPECT_LT(gap, previous);
    previous = gap;
  }
}

TEST(Ttm, BlipAndQuapiBackendsAgree) {
  const auto fb = calculate_bare_propagators(create_tls_hamiltonian(0, 1), 0.25, 60);
  AugmentedArgs blip;
  blip.method = AugmentedMethod::Blip;
  const auto a = propagate_ttm(fb, spin_boson(), 5.0, ground(), 0.25, 60, 5);
  const auto b = propagate_ttm(fb, spin_boson(), 5.0, ground(), 0.25, 60, 5, blip);
  EXPECT_LT(oracle::max_deviation(a, b), 1e-9);
}

TEST(Ttm, EnergyTransferDimerTrends) {
  // Weak reorganization keeps coherent beating, strong reorganization gives
  // incoherent relaxation.
  Matrix h(2, 2);
  h << 50, 100, 100, -50;
  h *= units::invcm2au;
  const double dt = 4.84 / units::au2fs;
  const auto fb = calculate_bare_propagators(h, dt, 200);
  AugmentedArgs args;
  args.memory = 8;
  std::vector<std::size_t> extrema;
  for (double lambda : {20.0, 100.0}) {
    const DrudeLorentzSD sd{lambda * units::invcm2au, 53.08 * units::invcm2au, 1.0};
    const auto dyn = propagate_ttm(fb, {{sd, {1.0, 0.0}}, {sd, {0.0, 1.0}}}, 1052.0, ground(), dt, 200,
                                   75, args);
    std::vector<double> donor;
    for (const auto& s : dyn.states) {
      donor.push_back(s(0, 0).real());
      EXPECT_GE(s(0, 0).real(), -1e-8);
      EXPECT_LE(s(0, 0).real(), 1.0 + 1e-8);
      EXPECT_NEAR(s.trace().real(), 1.0, 1e-8);
    }
    extrema.push_back(oracle::count_extrema(donor, 1e-3));
  }
  EXPECT_GE(extrema[0], 4u);
  EXPECT_LE(extrema[1], 1u);
}
