#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include <qdyn/empirical.hpp>
#include <qdyn/error.hpp>
#include <qdyn/heom.hpp>

#include "oracles/oracles.hpp"

using namespace qdyn;

namespace {

DensityMatrix pure(Eigen::Index d, Eigen::Index k) {
  DensityMatrix r = DensityMatrix::Zero(d, d);
  r(k, k) = 1.0;
  return r;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return static_cast<std::size_t>(std::llround(r));
}

Matrix fmo_hamiltonian() {
  Matrix h(7, 7);
  h << 12410, -87.7, 5.5, -5.9, 6.7, -13.7, -9.9,  //
      -87.7, 12530, 30.8, 8.2, 0.7, 11.8, 4.3,     //
      5.5, 30.8, 12210, -53.5, -2.2, -9.6, 6.0,    //
      -5.9, 8.2, -53.5, 12320, -70.7, -17.0, -63.3,  //
      6.7, 0.7, -2.2, -70.7, 12480, 81.1, -1.3,    //
      -13.7, 11.8, -9.6, -17.0, 81.1, 12630, 39.7,  //
      -9.9, 4.3, 6.0, -63.3, -1.3, 39.7, 12440;
  return h * units::invcm2au;
}

std::vector<HeomBathBinding> fmo_baths() {
  const DrudeLorentzSD sd{35.0 * units::invcm2au, units::au2fs / 50.0, 1.0};
  std::vector<HeomBathBinding> baths;
  for (Eigen::Index s = 0; s < 7; ++s) {
    Matrix p = Matrix::Zero(7, 7);
    p(s, s) = 1.0;
    baths.push_back({sd, p});
  }
  return baths;
}

}  // namespace

TEST(Hierarchy, SmallestCase) {
  const auto h = enumerate_hierarchy(1, 0, 1);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h.indices[0], (std::vector<std::uint16_t>{0}));
  EXPECT_EQ(h.indices[1], (std::vector<std::uint16_t>{1}));
  EXPECT_EQ(h.raised(0, 0), 1);
  EXPECT_EQ(h.raised(1, 0), -1);
  EXPECT_EQ(h.lowered(1, 0), 0);
  EXPECT_EQ(h.lowered(0, 0), -1);
}

TEST(Hierarchy, StarsAndBarsCounts) {
  EXPECT_EQ(enumerate_hierarchy(1, 2, 3).size(), 20u);
  EXPECT_EQ(enumerate_hierarchy(7, 2, 3).size(), 2024u);
  for (std::size_t env : {1, 2, 3})
    for (std::size_t m : {0, 1, 2})
      for (std::size_t l : {0, 1, 4})
        EXPECT_EQ(enumerate_hierarchy(env, m, l).size(), binomial(env * (m + 1) + l, l));
}

TEST(Hierarchy, NeighbourTablesAreConsistent) {
  const auto h = enumerate_hierarchy(2, 2, 3);
  std::set<std::vector<std::uint16_t>> unique(h.indices.begin(), h.indices.end());
  EXPECT_EQ(unique.size(), h.size());
  EXPECT_EQ(h.indices[0], std::vector<std::uint16_t>(h.width(), 0));
  std::size_t depth = 0;
  for (std::size_t a = 0; a < h.size(); ++a) {
    std::size_t l = 0;
    for (auto n : h.indices[a]) l += n;
    EXPECT_LE(l, 3u);
    EXPECT_GE(l, depth);  // ordered by depth
    depth = l;
    for (std::size_t k = 0; k < h.width(); ++k) {
      const auto up = h.raised(a, k);
      if (l == 3) {
        EXPECT_EQ(up, -1);
      } else {
        ASSERT_GE(up, 0);
        auto want = h.indices[a];
        ++want[k];
        EXPECT_EQ(h.indices[static_cast<std::size_t>(up)], want);
        EXPECT_EQ(h.lowered(static_cast<std::size_t>(up), k), static_cast<std::int64_t>(a));
      }
      if (h.indices[a][k] == 0) EXPECT_EQ(h.lowered(a, k), -1);
    }
  }
}

TEST(Heom, ZeroCouplingMatchesBare) {
  const Matrix h = create_tls_hamiltonian(0.5, 1.0);
  const std::vector<HeomBathBinding> baths{{DrudeLorentzSD{0.0, 5.0, 2.0}, sigma_z()}};
  for (bool scaled : {false, true}) {
    HeomArgs args;
    args.scaled = scaled;
    args.integrator.rtol = 1e-12;
    args.integrator.atol = 1e-12;
    const Dynamics heom = propagate_heom(h, baths, 1.0, pure(2, 0), 0.125, 80, args);
    BarePropagateRequest req;
    req.hamiltonian = h;
    req.rho0 = pure(2, 0);
    req.dt = 0.125;
    req.ntimes = 80;
    req.integrator = args.integrator;
    EXPECT_LT(oracle::max_deviation(heom, propagate_bare(req)), 1e-9);
  }
}

TEST(Heom, TraceAndHermiticity) {
  const std::vector<HeomBathBinding> baths{{DrudeLorentzSD{0.4, 2.0, 2.0}, sigma_z()}};
  HeomArgs args;
  args.num_modes = 2;
  args.lmax = 5;
  const Dynamics dyn = propagate_heom(create_tls_hamiltonian(0.3, 1), baths, 1.0,
                                      oracle::random_density(2, 3), 0.1, 100, args);
  for (const auto& r : dyn.states) {
    EXPECT_LT(std::abs(r.trace() - Complex(1.0)), 1e-8);
    EXPECT_LT((r - r.adjoint()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Heom, ScaledAndUnscaledAgree) {
  const std::vector<HeomBathBinding> baths{{DrudeLorentzSD{0.2, 5.0, 2.0}, sigma_z()}};
  HeomArgs args;
  args.num_modes = 2;
  args.lmax = 5;
  args.integrator.rtol = 1e-12;
  args.integrator.atol = 1e-12;
  args.scaled = true;
  const auto a = propagate_heom(create_tls_hamiltonian(0, 1), baths, 1.0, pure(2, 0), 0.125, 100, args);
  args.scaled = false;
  const auto b = propagate_heom(create_tls_hamiltonian(0, 1), baths, 1.0, pure(2, 0), 0.125, 100, args);
  EXPECT_LT(oracle::max_deviation(a, b), 1e-8);
}

TEST(Heom, ZeroFieldAndStaticField) {
  const std::vector<HeomBathBinding> baths{{DrudeLorentzSD{0.2, 5.0, 2.0}, sigma_z()}};
  const auto plain = propagate_heom(create_tls_hamiltonian(0, 1), baths, 1.0, pure(2, 0), 0.125, 40);
  const auto zero = propagate_heom(create_tls_hamiltonian(0, 1), baths, 1.0, pure(2, 0), 0.125, 40, {},
                                   {{[](double) { return 0.0; }, sigma_z()}});
  EXPECT_LT(oracle::max_deviation(plain, zero), 1e-14);
  const auto fielded = propagate_heom(create_tls_hamiltonian(0, 1), baths, 1.0, pure(2, 0), 0.125, 40,
                                      {}, {{[](double) { return 0.4; }, sigma_z()}});
  const auto biased = propagate_heom(create_tls_hamiltonian(0.4, 1), baths, 1.0, pure(2, 0), 0.125, 40);
  EXPECT_LT(oracle::max_deviation(fielded, biased), 1e-8);
}

TEST(Heom, RejectsBadInput) {
  const std::vector<HeomBathBinding> bad{{DrudeLorentzSD{0.2, 5.0, 2.0}, kI * sigma_z()}};
  EXPECT_THROW(propagate_heom(create_tls_hamiltonian(0, 1), bad, 1.0, pure(2, 0), 0.1, 4), InvalidArgument);
  const std::vector<HeomBathBinding> wrong{{DrudeLorentzSD{0.2, 5.0, 2.0}, Matrix::Identity(3, 3)}};
  EXPECT_THROW(propagate_heom(create_tls_hamiltonian(0, 1), wrong, 1.0, pure(2, 0), 0.1, 4), DimensionError);
}

TEST(Heom, DimerEmissionThroughBath) {
  // The emission channel is a bath on sigma_x of each site rather than a
  // Lindblad operator; its weight must still fill the common ground state.
  Matrix h = Matrix::Zero(4, 4);
  h(0, 0) = 20.0;
  h(1, 1) = h(2, 2) = 10.0;
  h(1, 2) = h(2, 1) = -1.0;
  const Matrix id = Matrix::Identity(2, 2);
  auto run = [&](double se) {
    std::vector<HeomBathBinding> baths{{DrudeLorentzSD{0.5, 5.0, 1.0}, kron(sigma_z(), id)},
                                       {DrudeLorentzSD{0.5, 5.0, 1.0}, kron(id, sigma_z())}};
    if (se > 0.0) baths.push_back({DrudeLorentzSD{se, 5.0, 1.0}, kron(sigma_x(), id) + kron(id, sigma_x())});
    HeomArgs args;
    args.num_modes = 1;
    args.lmax = 3;
    return propagate_heom(h, baths, 1.0, pure(4, 1), 0.125, 100, args);
  };
  const auto without = run(0.0);
  for (const auto& r : without.states) EXPECT_NEAR(r(3, 3).real(), 0.0, 1e-10);
  const auto with = run(0.25);
  EXPECT_GT(with.states.back()(3, 3).real(), 1e-3);
  EXPECT_GT(with.states[100](3, 3).real(), with.states[50](3, 3).real());
  EXPECT_GT(with.states[50](3, 3).real(), with.states[10](3, 3).real());
}

TEST(Heom, FmoConvergesWithDepth) {
  const double dt = 2.0 / units::au2fs;
  const double beta = 1.0 / (77.0 * units::kelvin2au);
  std::vector<Dynamics> runs;
  for (std::size_t l : {1, 2, 3}) {
    HeomArgs args;
    args.num_modes = 2;
    args.lmax = l;
    args.integrator.rtol = args.integrator.atol = 1e-8;
    runs.push_back(propagate_heom(fmo_hamiltonian(), fmo_baths(), beta, pure(7, 0), dt, 100, args));
  }
  const double d12 = oracle::max_deviation(runs[0], runs[1]);
  const double d23 = oracle::max_deviation(runs[1], runs[2]);
  EXPECT_LT(d23, d12);
  for (const auto& r : runs[2].states) {
    EXPECT_NEAR(r.trace().real(), 1.0, 1e-6);
    for (Eigen::Index s = 0; s < 7; ++s) {
      EXPECT_GE(r(s, s).real(), -1e-6);
      EXPECT_LE(r(s, s).real(), 1.0 + 1e-6);
    }
  }
}
