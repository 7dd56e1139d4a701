#include "qdyn/eta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qdyn/error.hpp"

namespace qdyn {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

// Thermal weight multiplying the (1 - cos) part of the kernel.
double thermal_factor(double beta, double w, KernelKind kind) {
  if (kind == KernelKind::Classical) return 2.0 / (beta * w);
  if (std::isinf(beta)) return 1.0;
  return 1.0 / std::tanh(0.5 * beta * w);
}

struct PanelResult {
  Complex value;
  double error;
};

// One Gauss-Kronrod panel evaluated for a complex integrand.
template <class F>
PanelResult gk_panel(const F& f, double a, double b) {
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = boost::math::quadrature::gauss<double, 15>::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Complex k = f(c) * wk[0];
  Complex g = f(c) * wg[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const Complex fp = f(c + h * x[i]);
    const Complex fm = f(c - h * x[i]);
    k += (fp + fm) * wk[i];
    if (i % 2 == 0) g += (fp + fm) * wg[i / 2];
  }
  return {k * h, std::abs(k - g) * h};
}

template <class F>
Complex adaptive(const F& f, double a, double b, double tol, int depth, double& err_out) {
  const PanelResult r = gk_panel(f, a, b);
  if (r.error <= tol || depth == 0) {
    err_out += r.error;
    return r.value;
  }
  const double m = 0.5 * (a + b);
  return adaptive(f, a, m, 0.5 * tol, depth - 1, err_out) +
         adaptive(f, m, b, 0.5 * tol, depth - 1, err_out);
}

Complex tabulated_q(const TabulatedSD& tab, double beta, double t, KernelKind kind) {
  const auto& g = tab.omega_grid;
  auto f = [&](std::size_t i) {
    const double w = g[i];
    const double j = tab.mode == TabulatedSD::Mode::J ? tab.values[i] : tab.values[i] * w;
    const double s = std::sin(0.5 * w * t);
    return Complex(j / (w * w) * thermal_factor(beta, w, kind) * 2.0 * s * s,
                   j / (w * w) * std::sin(w * t));
  };
  Complex acc = 0.0;
  Complex prev = f(0);
  for (std::size_t i = 1; i < g.size(); ++i) {
    const Complex cur = f(i);
    acc += 0.5 * (prev + cur) * (g[i] - g[i - 1]);
    prev = cur;
  }
  return acc / std::numbers::pi;
}

}  // namespace

Complex kernel_q(const SpectralDensity& sd, double beta, double t, KernelKind kind) {
  if (t == 0.0) return 0.0;
  if (!(beta > 0.0)) throw InvalidArgument("kernel_q: beta must be positive");
  if (kind == KernelKind::Classical && std::isinf(beta))
    throw InvalidArgument("kernel_q: classical kernel needs finite temperature");
  if (const auto* tab = std::get_if<TabulatedSD>(&sd)) return tabulated_q(*tab, beta, t, kind);

  auto integrand = [&](double w) -> Complex {
    if (w <= 0.0) return 0.0;
    const double jw = evaluate(sd, w) / (w * w);
    const double s = std::sin(0.5 * w * t);
    return {jw * thermal_factor(beta, w, kind) * 2.0 * s * s, jw * std::sin(w * t)};
  };

  const double wmax = frequency_cutoff(sd);
  const double osc = std::numbers::pi / std::abs(t);
  double first = std::min(osc, characteristic_frequency(sd));
  if (std::isfinite(beta)) first = std::min(first, 2.0 / beta);

  std::vector<double> edges{0.0};
  double width = first;
  while (edges.back() < wmax) {
    edges.push_back(std::min(wmax, edges.back() + width));
    width = std::min(osc, width * 1.5);
  }

  // Coarse pass fixes the absolute tolerance for the refinement.
  Complex coarse = 0.0;
  for (std::size_t i = 1; i < edges.size(); ++i)
    coarse += gk_panel(integrand, edges[i - 1], edges[i]).value;
  const double scale = std::max(std::abs(coarse), std::numeric_limits<double>::min());
  const double tol = 1e-12 * scale;

  Complex acc = 0.0;
  double err = 0.0;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    const double share = tol * (edges[i] - edges[i - 1]) / wmax;
    acc += adaptive(integrand, edges[i - 1], edges[i], share, 20, err);
  }

  // Beyond wmax the oscillating parts average out; keep the smooth remainder.
  auto tail = [&](double w) { return evaluate(sd, w) / (w * w) * thermal_factor(beta, w, kind); };
  boost::math::quadrature::exp_sinh<double> es;
  double tail_err = 0.0;
  const double tail_value = es.integrate([&](double u) { return tail(wmax + u); },
                                         std::sqrt(std::numeric_limits<double>::epsilon()),
                                         &tail_err);
  acc += tail_value;
  err += tail_err;

  if (!std::isfinite(acc.real()) || !std::isfinite(acc.imag()) || err > 1e-8 * scale + 1e-300)
    throw QuadratureError("kernel_q: quadrature did not converge at t = " + std::to_string(t), 0,
                          0);
  return acc / std::numbers::pi;
}

Complex EtaCoefficients::lag(std::size_t m, EtaClass cls) const {
  if (m == 0) throw InvalidArgument("EtaCoefficients::lag: lag must be positive");
  auto Q = [&](std::size_t half_steps) { return q.at(half_steps); };
  const std::size_t h = 2 * m;
  switch (cls) {
    case EtaClass::Interior:
      return Q(h + 2) - 2.0 * Q(h) + Q(h - 2);
    case EtaClass::OneEnd:
      return Q(h + 1) - Q(h - 1) - Q(h) + Q(h - 2);
    case EtaClass::BothEnds:
      return Q(h) - 2.0 * Q(h - 1) + Q(h - 2);
  }
  return 0.0;
}

Complex EtaCoefficients::at(std::size_t k, std::size_t kp, std::size_t n_steps) const {
  if (kp > k || k > n_steps || n_steps > N)
    throw InvalidArgument("EtaCoefficients: index out of range");
  const bool k_end = (k == 0 || k == n_steps);
  const bool kp_end = (kp == 0 || kp == n_steps);
  if (k == kp) return k_end ? diag_end() : diag_interior();
  const std::size_t m = k - kp;
  if (k_end && kp_end) return lag(m, EtaClass::BothEnds);
  if (k_end || kp_end) return lag(m, EtaClass::OneEnd);
  return lag(m, EtaClass::Interior);
}

Matrix EtaCoefficients::table() const {
  Matrix t = Matrix::Zero(static_cast<Eigen::Index>(N + 1), static_cast<Eigen::Index>(N + 1));
  for (std::size_t k = 0; k <= N; ++k)
    for (std::size_t kp = 0; kp <= k; ++kp)
      t(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(kp)) = (*this)(k, kp);
  return t;
}

EtaCoefficients compute_eta(const SpectralDensity& sd, double beta, double dt, std::size_t N,
                            KernelKind kind) {
  if (!(dt > 0.0)) throw InvalidArgument("compute_eta: dt must be positive");
  if (N < 1) throw InvalidArgument("compute_eta: need at least one step");
  EtaCoefficients eta;
  eta.N = N;
  eta.dt = dt;
  // Two extra samples let interior lags up to N be formed for continuation.
  eta.q.resize(2 * N + 3);
  for (std::size_t j = 0; j < eta.q.size(); ++j) {
    try {
      eta.q[j] = kernel_q(sd, beta, 0.5 * dt * static_cast<double>(j), kind);
    } catch (const QuadratureError& e) {
      // Report the earliest pair whose coefficient needs this sample.
      throw QuadratureError(e.what(), std::min(N, (j + 1) / 2), 0);
    }
  }
  return eta;
}

}  // namespace qdyn
