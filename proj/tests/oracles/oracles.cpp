#include "oracles/oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

namespace oracle {

namespace {

double upper_limit(const qdyn::SpectralDensity& sd) {
  if (const auto* e = std::get_if<qdyn::ExponentialCutoffSD>(&sd)) return 80.0 * e->omega_c;
  if (const auto* d = std::get_if<qdyn::DrudeLorentzSD>(&sd)) return 2e4 * d->gamma;
  const auto& t = std::get<qdyn::TabulatedSD>(sd);
  return t.omega_grid.back();
}

double coth(double x) { return 1.0 / std::tanh(x); }

}  // namespace

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  return s * h / 3.0;
}

double spectral_density(const qdyn::SpectralDensity& sd, double w) {
  using std::numbers::pi;
  if (w <= 0.0) return 0.0;
  if (const auto* e = std::get_if<qdyn::ExponentialCutoffSD>(&sd))
    return 2.0 * pi / (e->delta_s * e->delta_s) * e->xi * std::pow(w, e->n) /
           std::pow(e->omega_c, e->n - 1.0) * std::exp(-w / e->omega_c);
  if (const auto* d = std::get_if<qdyn::DrudeLorentzSD>(&sd))
    return 2.0 * d->lambda / (d->delta_s * d->delta_s) * d->gamma * w / (w * w + d->gamma * d->gamma);
  const auto& t = std::get<qdyn::TabulatedSD>(sd);
  if (w < t.omega_grid.front() || w > t.omega_grid.back()) return 0.0;
  std::size_t i = 1;
  while (t.omega_grid[i] < w) ++i;
  const double f = (w - t.omega_grid[i - 1]) / (t.omega_grid[i] - t.omega_grid[i - 1]);
  const double v = t.values[i - 1] + f * (t.values[i] - t.values[i - 1]);
  const double j = t.mode == qdyn::TabulatedSD::Mode::J ? v : v * w;
  return j / (t.delta_s * t.delta_s);
}

double reorganization_energy(const qdyn::SpectralDensity& sd) {
  const double top = upper_limit(sd);
  // Substitute w = top * u^2 to resolve the neighbourhood of zero.
  auto f = [&](double u) {
    if (u == 0.0) return 0.0;
    const double w = top * u * u;
    return spectral_density(sd, w) / w * 2.0 * top * u;
  };
  double tail = 0.0;
  if (const auto* d = std::get_if<qdyn::DrudeLorentzSD>(&sd))
    tail = 2.0 * d->lambda / (d->delta_s * d->delta_s) * d->gamma / top;  // int J/w beyond top
  return (simpson(f, 0.0, 1.0, 400000) + tail) / std::numbers::pi;
}

Complex kernel_q(const qdyn::SpectralDensity& sd, double beta, double t) {
  const double top = upper_limit(sd);
  auto re = [&](double u) {
    if (u == 0.0) return 0.0;
    const double w = top * u * u;
    const double th = std::isinf(beta) ? 1.0 : coth(0.5 * beta * w);
    return spectral_density(sd, w) / (w * w) * th * 2.0 * std::pow(std::sin(0.5 * w * t), 2) * 2.0 *
           top * u;
  };
  auto im = [&](double u) {
    if (u == 0.0) return 0.0;
    const double w = top * u * u;
    return spectral_density(sd, w) / (w * w) * std::sin(w * t) * 2.0 * top * u;
  };
  const std::size_t n = 2000000;
  return Complex(simpson(re, 0.0, 1.0, n), simpson(im, 0.0, 1.0, n)) / std::numbers::pi;
}

Complex drude_lorentz_correlation(const qdyn::DrudeLorentzSD& sd, double beta, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("drude_lorentz_correlation: t must be positive");
  // Substituting w = x / t turns the transform into the unit-frequency form.
  auto j = [&](double w) {
    return 2.0 * sd.lambda / (sd.delta_s * sd.delta_s) * sd.gamma * w / (w * w + sd.gamma * sd.gamma);
  };
  auto fc = [&](double x) {
    const double w = x / t;
    const double th = w * beta < 1e-8 ? 2.0 / (beta * w) : coth(0.5 * beta * w);
    return j(w) * th / t;
  };
  auto fs = [&](double x) { return j(x / t) / t; };
  boost::math::quadrature::ooura_fourier_cos<double> cos_integrator(1e-13);
  boost::math::quadrature::ooura_fourier_sin<double> sin_integrator(1e-13);
  const double c = cos_integrator.integrate(fc, 1.0).first;
  const double s = sin_integrator.integrate(fs, 1.0).first;
  return Complex(c, -s) / std::numbers::pi;
}

namespace {

void visit(const std::vector<qdyn::Matrix>& fb, const qdyn::EtaCoefficients& eta,
           const std::vector<double>& svec, Eigen::Index d, std::size_t N,
           std::vector<Eigen::Index>& path, Complex amp, qdyn::Vector& out) {
  const std::size_t k = path.size() - 1;
  if (k == N) {
    Complex phase = 0.0;
    for (std::size_t a = 0; a <= N; ++a)
      for (std::size_t b = 0; b <= a; ++b) {
        const double sp_a = svec[static_cast<std::size_t>(path[a] / d)];
        const double sm_a = svec[static_cast<std::size_t>(path[a] % d)];
        const double sp_b = svec[static_cast<std::size_t>(path[b] / d)];
        const double sm_b = svec[static_cast<std::size_t>(path[b] % d)];
        const Complex e = eta.at(a, b, N);
        phase -= (sp_a - sm_a) * (e * sp_b - std::conj(e) * sm_b);
      }
    out(path.back()) += amp * std::exp(phase);
    return;
  }
  for (Eigen::Index next = 0; next < d * d; ++next) {
    const Complex step = fb[k](next, path.back());
    if (step == 0.0) continue;
    path.push_back(next);
    visit(fb, eta, svec, d, N, path, amp * step, out);
    path.pop_back();
  }
}

}  // namespace

qdyn::DensityMatrix path_sum(const std::vector<qdyn::Matrix>& fb_steps,
                             const qdyn::EtaCoefficients& eta, const std::vector<double>& svec,
                             const qdyn::DensityMatrix& rho0, std::size_t N) {
  const Eigen::Index d = rho0.rows();
  qdyn::Vector out = qdyn::Vector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      if (rho0(i, j) == 0.0) continue;
      std::vector<Eigen::Index> path{i * d + j};
      visit(fb_steps, eta, svec, d, N, path, rho0(i, j), out);
    }
  qdyn::DensityMatrix rho(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) rho(i, j) = out(i * d + j);
  return rho;
}

double max_deviation(const qdyn::Dynamics& a, const qdyn::Dynamics& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_deviation: length mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, (a.states[k] - b.states[k]).cwiseAbs().maxCoeff());
  return m;
}

double max_population_deviation(const qdyn::Dynamics& a, const qdyn::Dynamics& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_population_deviation: length mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, (a.states[k].diagonal() - b.states[k].diagonal()).cwiseAbs().maxCoeff());
  return m;
}

double min_eigenvalue(const qdyn::Matrix& rho) {
  const qdyn::Matrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<qdyn::Matrix> es(h);
  return es.eigenvalues().minCoeff();
}

qdyn::Matrix random_hermitian(Eigen::Index d, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> n;
  qdyn::Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(n(gen), n(gen));
  return 0.5 * (m + m.adjoint());
}

qdyn::DensityMatrix random_density(Eigen::Index d, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> n;
  qdyn::Matrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(n(gen), n(gen));
  qdyn::Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

std::size_t count_extrema(const std::vector<double>& v, double threshold) {
  // Turning points of a hysteresis walk: an extremum is counted once the signal
  // has moved `threshold` back from it. The first point is not an extremum.
  if (v.empty()) return 0;
  std::size_t count = 0;
  int dir = 0;
  double hi = v.front(), lo = v.front();
  for (double x : v) {
    if (dir == 0) {
      hi = std::max(hi, x);
      lo = std::min(lo, x);
      if (x < hi - threshold) {
        if (hi > v.front()) ++count;
        dir = -1;
        lo = x;
      } else if (x > lo + threshold) {
        if (lo < v.front()) ++count;
        dir = 1;
        hi = x;
      }
    } else if (dir > 0) {
      if (x > hi) {
        hi = x;
      } else if (x < hi - threshold) {
        ++count;
        dir = -1;
        lo = x;
      }
    } else {
      if (x < lo) {
        lo = x;
      } else if (x > lo + threshold) {
        ++count;
        dir = 1;
        hi = x;
      }
    }
  }
  return count;
}

}  // namespace oracle
