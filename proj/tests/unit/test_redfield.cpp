#include <cmath>

#include <gtest/gtest.h>

#include <qdyn/empirical.hpp>
#include <qdyn/pathint.hpp>
#include <qdyn/redfield.hpp>

#include "oracles/oracles.hpp"

using namespace qdyn;

namespace {

const ExponentialCutoffSD kOhmic{0.1, 7.5, 1.0, 2.0};

DensityMatrix ground() {
  DensityMatrix r = DensityMatrix::Zero(2, 2);
  r(0, 0) = 1.0;
  return r;
}

std::vector<SystemBathCoupling> spin_boson() { return {{kOhmic, sigma_z()}}; }

// Left eigen-row of the trace functional in the row-major vectorization.
Vector trace_row(Eigen::Index d) {
  Vector t = Vector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) t(i * d + i) = 1.0;
  return t;
}

}  // namespace

TEST(BathSpectrum, DetailedBalance) {
  const double beta = 5.0;
  for (double w : {0.1, 0.5, 2.0, 7.0})
    EXPECT_NEAR(bath_spectrum(kOhmic, beta, -w), std::exp(-beta * w) * bath_spectrum(kOhmic, beta, w),
                1e-14 * bath_spectrum(kOhmic, beta, w));
  // Zero-frequency limit 2 J(w) / (beta w).
  EXPECT_NEAR(bath_spectrum(kOhmic, beta, 0.0), bath_spectrum(kOhmic, beta, 1e-6), 1e-5);
}

TEST(Redfield, ZeroCouplingGivesZeroTensor) {
  const ExponentialCutoffSD off{0.0, 7.5, 1.0, 2.0};
  const auto r = build_redfield_tensor(create_tls_hamiltonian(0.3, 1.0), {{off, sigma_z()}}, 5.0);
  for (const auto& e : r.entries) EXPECT_EQ(e, Complex(0.0));
}

TEST(Redfield, ZeroCouplingMatchesBare) {
  const ExponentialCutoffSD off{0.0, 7.5, 1.0, 2.0};
  const Matrix h = create_tls_hamiltonian(0.3, 1.0);
  const Dynamics brme = propagate_brme(h, {{off, sigma_z()}}, 5.0, ground(), 0.25, 100);
  BarePropagateRequest req;
  req.hamiltonian = h;
  req.rho0 = ground();
  req.dt = 0.25;
  req.ntimes = 100;
  EXPECT_LT(oracle::max_deviation(brme, propagate_bare(req)), 1e-9);
}

TEST(Redfield, PopulationRatesObeyDetailedBalance) {
  const double beta = 5.0;
  const auto r = build_redfield_tensor(create_tls_hamiltonian(0, 1), spin_boson(), beta);
  // Rate b -> a is R_aabb.
  const double up = r(1, 1, 0, 0).real(), down = r(0, 0, 1, 1).real();
  EXPECT_GT(down, 0.0);
  EXPECT_NEAR(up / down, std::exp(-beta * r.omega(1, 0)), 1e-12);
}

TEST(Redfield, RelaxesTowardThermalPopulations) {
  const double beta = 1.0;
  const Matrix h = create_tls_hamiltonian(0, 1);
  const auto r = build_redfield_tensor(h, spin_boson(), beta);
  const Dynamics dyn = propagate_brme(h, spin_boson(), beta, ground(), 0.5, 400);
  const Matrix last = r.eigenvectors.adjoint() * dyn.states.back() * r.eigenvectors;
  const double gap = r.omega(1, 0);
  const double p_excited = 1.0 / (1.0 + std::exp(beta * gap));
  EXPECT_NEAR(last(1, 1).real(), p_excited, 5e-3);
  EXPECT_NEAR(last(1, 1).real() / last(0, 0).real(), std::exp(-beta * gap), 2e-2);
}

TEST(Redfield, CommutingCouplingIsPureDephasing) {
  const Matrix h = create_tls_hamiltonian(1.0, 0.0);
  DensityMatrix rho0 = DensityMatrix::Constant(2, 2, 0.5);
  rho0(0, 0) = 0.3;
  rho0(1, 1) = 0.7;
  const Dynamics dyn = propagate_brme(h, spin_boson(), 5.0, rho0, 0.25, 60);
  for (const auto& s : dyn.states) {
    EXPECT_NEAR(s(0, 0).real(), 0.3, 1e-10);
    EXPECT_NEAR(s(1, 1).real(), 0.7, 1e-10);
  }
  EXPECT_LT(std::abs(dyn.states.back()(0, 1)), 0.5);
}

TEST(Redfield, GeneratorAnnihilatesTrace) {
  const Matrix h = oracle::random_hermitian(3, 5);
  std::vector<SystemBathCoupling> baths{{kOhmic, oracle::random_hermitian(3, 6)},
                                        {DrudeLorentzSD{0.3, 2.0, 1.0}, oracle::random_hermitian(3, 7)}};
  const Matrix g = build_redfield_tensor(h, baths, 2.0).site_generator();
  EXPECT_LT((trace_row(3).transpose() * g).cwiseAbs().maxCoeff(), 1e-12);
  for (unsigned seed = 0; seed < 5; ++seed) {
    const DensityMatrix rho = oracle::random_density(3, 100 + seed);
    const Matrix drho = unvectorize(g * vectorize(rho), 3);
    EXPECT_LT(std::abs(drho.trace()), 1e-12);
    EXPECT_LT((drho - drho.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Redfield, InvariantUnderEigenvectorPhases) {
  const Matrix h = oracle::random_hermitian(3, 8);
  std::vector<SystemBathCoupling> baths{{kOhmic, oracle::random_hermitian(3, 9)}};
  const auto ref = build_redfield_tensor(h, baths, 2.0);
  Matrix rephased = ref.eigenvectors;
  const double phases[] = {0.3, -2.1, 1.4};
  for (Eigen::Index k = 0; k < 3; ++k) rephased.col(k) *= std::polar(1.0, phases[k]);
  const auto other = build_redfield_tensor(h, baths, 2.0, rephased);
  EXPECT_LT((ref.site_generator() - other.site_generator()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Redfield, PhaseConventionIsDeterministic) {
  RealVector e;
  Matrix v;
  phased_eigensystem(oracle::random_hermitian(4, 10), e, v);
  for (Eigen::Index k = 0; k < 4; ++k) {
    Eigen::Index imax;
    v.col(k).cwiseAbs().maxCoeff(&imax);
    EXPECT_EQ(v(imax, k).imag(), 0.0);
    EXPECT_GT(v(imax, k).real(), 0.0);
  }
}

TEST(Redfield, SpinBosonTracePreservedAndTracksEarlyQuapi) {
  const Matrix h = create_tls_hamiltonian(0, 1);
  const auto fb = calculate_bare_propagators(h, 0.25, 100);
  // Early-time population deviation from the exact path integral. The real
  // spectrum carries no frequency renormalization, so the gap is first order in
  // xi and closes as the coupling weakens.
  auto early_gap = [&](double xi) {
    const ExponentialCutoffSD sd{xi, 7.5, 1.0, 2.0};
    const Dynamics brme = propagate_brme(h, {{sd, sigma_z()}}, 5.0, ground(), 0.25, 12);
    for (const auto& s : brme.states) EXPECT_LT(std::abs(s.trace() - Complex(1.0)), 1e-8);
    const Dynamics quapi = propagate_quapi(fb, {{sd, {1.0, -1.0}}}, 5.0, ground(), 0.25, 12, 7);
    return oracle::max_population_deviation(brme, quapi);
  };
  const double strong = early_gap(0.1), weak = early_gap(0.01);
  EXPECT_LT(strong, 0.1);
  EXPECT_GT(strong, 5e-3);
  EXPECT_LT(weak, strong / 5.0);
}
