#include "qdyn/bath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "qdyn/error.hpp"

namespace qdyn {

double DiscreteBathModes::reorganization_energy() const {
  double acc = 0.0;
  for (std::size_t j = 0; j < omegas.size(); ++j)
    acc += couplings[j] * couplings[j] / (2.0 * omegas[j] * omegas[j]);
  return acc;
}

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

double integrate_density(const SpectralDensity& sd, double a, double b) {
  if (b <= a) return 0.0;
  auto f = [&](double w) { return evaluate(sd, w) / w; };
  return GK::integrate(f, a, b, 4, 1e-11);
}

}  // namespace

DiscreteBathModes discretize(const SpectralDensity& sd, std::size_t n_modes) {
  if (n_modes < 1) throw InvalidArgument("discretize: need at least one mode");
  const SpectralPeak peak = find_peak(sd);
  if (!(peak.value > 0.0)) {
    // Zero coupling: modes at the characteristic frequency with no coupling.
    DiscreteBathModes out;
    out.omegas.assign(n_modes, characteristic_frequency(sd));
    out.couplings.assign(n_modes, 0.0);
    return out;
  }

  std::vector<double> nodes;
  const auto* tab = std::get_if<TabulatedSD>(&sd);
  bool extrapolate = true;
  if (tab != nullptr) {
    nodes = tab->omega_grid;
    extrapolate = false;
  } else {
    double wmax = peak.omega;
    while (evaluate(sd, wmax) >= 1e-10 * peak.value) wmax *= 1.05;
    const double wlo = peak.omega * 1e-8;
    const std::size_t npts = 600;
    nodes.resize(npts + 1);
    for (std::size_t i = 0; i <= npts; ++i)
      nodes[i] = wlo * std::pow(wmax / wlo, static_cast<double>(i) / npts);
  }

  // Power-law extrapolation of J/w below the first node.
  double head = 0.0, power = 0.0;
  if (extrapolate) {
    const double w1 = nodes[0], w2 = 2.0 * nodes[0];
    const double f1 = evaluate(sd, w1) / w1, f2 = evaluate(sd, w2) / w2;
    power = std::log(f2 / f1) / std::log(w2 / w1);
    if (!(power > -1.0)) throw InvalidArgument("discretize: J(w)/w not integrable at w = 0");
    head = f1 * w1 / (power + 1.0);
  }

  std::vector<double> cumulative(nodes.size());
  cumulative[0] = head;
  for (std::size_t i = 1; i < nodes.size(); ++i)
    cumulative[i] = cumulative[i - 1] + integrate_density(sd, nodes[i - 1], nodes[i]);
  const double total = cumulative.back();
  const double lambda_r = total / std::numbers::pi;

  DiscreteBathModes out;
  out.omegas.resize(n_modes);
  out.couplings.resize(n_modes);
  const double n = static_cast<double>(n_modes);
  for (std::size_t j = 0; j < n_modes; ++j) {
    const double target = (static_cast<double>(j) + 0.5) / n * total;
    double w;
    if (target <= cumulative[0]) {
      w = nodes[0] * std::pow(target / head, 1.0 / (power + 1.0));
    } else {
      const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), target);
      const std::size_t hi = std::min<std::size_t>(
          static_cast<std::size_t>(it - cumulative.begin()), nodes.size() - 1);
      const std::size_t lo = hi - 1;
      auto g = [&](double x) { return cumulative[lo] + integrate_density(sd, nodes[lo], x) - target; };
      const double ga = g(nodes[lo]), gb = g(nodes[hi]);
      if (ga >= 0.0) {
        w = nodes[lo];
      } else if (gb <= 0.0) {
        w = nodes[hi];
      } else {
        std::uintmax_t iters = 200;
        auto r = boost::math::tools::toms748_solve(g, nodes[lo], nodes[hi], ga, gb,
                                                   boost::math::tools::eps_tolerance<double>(50),
                                                   iters);
        w = 0.5 * (r.first + r.second);
      }
    }
    out.omegas[j] = w;
    out.couplings[j] = w * std::sqrt(2.0 * lambda_r / n);
  }
  return out;
}

Complex MatsubaraExpansion::correlation(double t) const {
  Complex acc = 0.0;
  for (std::size_t m = 0; m < nus.size(); ++m) acc += cs[m] * std::exp(-nus[m] * t);
  return acc;
}

MatsubaraExpansion matsubara_expand(const DrudeLorentzSD& sd, double beta, std::size_t num_modes) {
  if (!(beta > 0.0)) throw InvalidArgument("matsubara_expand: beta must be positive");
  if (!(sd.gamma > 0.0)) throw InvalidArgument("matsubara_expand: gamma must be positive");
  const double g = sd.gamma;
  const double lam = sd.lambda / (sd.delta_s * sd.delta_s);
  const double nu1 = 2.0 * std::numbers::pi / beta;
  const double k = std::round(g / nu1);
  if (k >= 1.0 && std::abs(g - k * nu1) <= 1e-12 * g)
    throw InvalidArgument("matsubara_expand: gamma coincides with a Matsubara frequency");

  MatsubaraExpansion out;
  out.num_modes = num_modes;
  out.nus.resize(num_modes + 1);
  out.cs.resize(num_modes + 1);
  out.nus[0] = g;
  out.cs[0] = g * lam * Complex(1.0 / std::tan(beta * g / 2.0), -1.0);
  for (std::size_t m = 1; m <= num_modes; ++m) {
    const double nu = nu1 * static_cast<double>(m);
    out.nus[m] = nu;
    out.cs[m] = 4.0 * lam * g / beta * nu / (nu * nu - g * g);
  }
  return out;
}

}  // namespace qdyn
