#pragma once

#include <cstddef>
#include <vector>

#include "qdyn/core.hpp"
#include "qdyn/spectral_density.hpp"

namespace qdyn {

/// Harmonic modes with unit masses: J(w) = (pi/2) sum_j c_j^2 / w_j delta(w - w_j).
struct DiscreteBathModes {
  std::vector<double> omegas;
  std::vector<double> couplings;

  std::size_t size() const { return omegas.size(); }
  /// sum_j c_j^2 / (2 w_j^2).
  double reorganization_energy() const;
};

/// Equal-weight discretization of the density proportional to J(w)/w: w_j is the
/// (j - 1/2)/n quantile and every mode carries the same share of the reorganization
/// energy.
DiscreteBathModes discretize(const SpectralDensity& sd, std::size_t n_modes);

/// C(t) = sum_m c_m exp(-nu_m t) for a Drude-Lorentz bath.
struct MatsubaraExpansion {
  std::vector<double> nus;
  std::vector<Complex> cs;
  std::size_t num_modes = 0;

  Complex correlation(double t) const;
};

MatsubaraExpansion matsubara_expand(const DrudeLorentzSD& sd, double beta, std::size_t num_modes);

}  // namespace qdyn
