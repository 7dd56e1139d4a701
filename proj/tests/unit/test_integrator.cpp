#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <qdyn/error.hpp>
#include <qdyn/integrator.hpp>

using namespace qdyn;

namespace {

Matrix rabi_rhs(double, const Matrix& rho) {
  const Matrix h = create_tls_hamiltonian(0, 1);
  return -kI * (h * rho - rho * h);
}

Matrix ground() {
  Matrix r = Matrix::Zero(2, 2);
  r(0, 0) = 1.0;
  return r;
}

double rabi_error(const IntegratorConfig& cfg, double t_end) {
  const std::vector<double> grid{0.0, t_end};
  const auto out = integrate(rabi_rhs, ground(), grid, cfg);
  return std::abs(out.back()(0, 0).real() - std::pow(std::cos(t_end), 2));
}

}  // namespace

TEST(Integrator, ExponentialDecay) {
  Matrix y0(1, 1);
  y0(0, 0) = 1.0;
  const std::vector<double> grid{0.0, 0.5, 1.0};
  const auto out = integrate([](double, const Matrix& y) -> Matrix { return -y; }, y0, grid);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0](0, 0), Complex(1.0));
  EXPECT_NEAR(out[2](0, 0).real(), std::exp(-1.0), 1e-9);
}

TEST(Integrator, RabiHalfPeriod) {
  const std::vector<double> grid{0.0, std::numbers::pi / 2};
  const auto out = integrate(rabi_rhs, ground(), grid);
  Matrix want = Matrix::Zero(2, 2);
  want(1, 1) = 1.0;
  EXPECT_LT((out.back() - want).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Integrator, TighterToleranceReducesError) {
  double previous = INFINITY;
  for (double rtol : {1e-6, 1e-8, 1e-10, 1e-12}) {
    IntegratorConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = rtol;
    const double err = rabi_error(cfg, 10.0);
    EXPECT_LT(err, previous) << "rtol " << rtol;
    previous = err;
  }
}

TEST(Integrator, FixedStepFifthOrder) {
  // Global error ~ h^5: halving the step divides it by ~32.
  std::vector<double> errs;
  for (double h : {0.4, 0.2, 0.1}) {
    IntegratorConfig cfg;
    cfg.fixed_step = true;
    cfg.initial_step = h;
    const std::vector<double> grid{0.0, 4.0};
    const Matrix y = integrate(rabi_rhs, ground(), grid, cfg).back();
    Matrix exact(2, 2);
    exact << std::pow(std::cos(4.0), 2), -kI * std::sin(4.0) * std::cos(4.0),
        kI * std::sin(4.0) * std::cos(4.0), std::pow(std::sin(4.0), 2);
    errs.push_back((y - exact).cwiseAbs().maxCoeff());
  }
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    const double order = std::log2(errs[i] / errs[i + 1]);
    EXPECT_NEAR(order, 5.0, 0.5);
  }
}

TEST(Integrator, TraceFreeGeneratorConservesTrace) {
  // Lindblad dephasing plus a coherent term: d Tr(rho)/dt = 0.
  IntegratorConfig cfg;
  cfg.rtol = 1e-6;
  cfg.atol = 1e-8;
  auto rhs = [](double, const Matrix& rho) -> Matrix {
    const Matrix h = create_tls_hamiltonian(0.3, 1.0);
    const Matrix l = 0.5 * sigma_z();
    return -kI * (h * rho - rho * h) + l * rho * l.adjoint() -
           0.5 * (l.adjoint() * l * rho + rho * l.adjoint() * l);
  };
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(0.25 * k);
  const auto out = integrate(rhs, ground(), grid, cfg);
  for (const auto& y : out) EXPECT_LT(std::abs(y.trace() - Complex(1.0)), 10 * cfg.atol);
}

TEST(Integrator, LandsExactlyOnGrid) {
  std::vector<double> grid{0.0, 0.1, 0.35, 0.36, 2.0};
  std::vector<std::size_t> seen;
  Vector y0 = Vector::Ones(1);
  integrate([](double, const Vector& y, Vector& dy) { dy = -y; }, y0, grid, IntegratorConfig{},
            [&](std::size_t k, const Vector& y) {
              seen.push_back(k);
              EXPECT_NEAR(y(0).real(), std::exp(-grid[k]), 1e-9);
            });
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(Integrator, RejectsBadGrid) {
  const std::vector<double> bad{0.0, 1.0, 0.5};
  EXPECT_THROW(integrate(rabi_rhs, ground(), bad), InvalidArgument);
}

TEST(Integrator, ReportsNonFiniteRhs) {
  const std::vector<double> grid{0.0, 1.0};
  auto rhs = [](double t, const Matrix& y) -> Matrix {
    return t > 0.3 ? Matrix::Constant(y.rows(), y.cols(), NAN) : Matrix(-y);
  };
  EXPECT_THROW(integrate(rhs, ground(), grid), IntegratorError);
}

TEST(Integrator, StepUnderflowCarriesTime) {
  // Finite-time blow-up at t = 1 forces the step size to collapse.
  Matrix y0(1, 1);
  y0(0, 0) = 1.0;
  const std::vector<double> grid{0.0, 2.0};
  try {
    integrate([](double, const Matrix& y) -> Matrix { return y.cwiseProduct(y); }, y0, grid);
    FAIL() << "expected an integrator failure";
  } catch (const IntegratorError& e) {
    EXPECT_NEAR(e.time(), 1.0, 1e-2);
  }
}
