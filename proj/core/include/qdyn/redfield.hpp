#pragma once

// Bloch-Redfield master equation in the eigenbasis of the system Hamiltonian,
// without the secular approximation.

#include <cstddef>
#include <vector>

#include "qdyn/core.hpp"
#include "qdyn/integrator.hpp"
#include "qdyn/spectral_density.hpp"

namespace qdyn {

struct SystemBathCoupling {
  SpectralDensity sd;
  Operator coupling;
};

/// Full bath spectrum J(w) (coth(beta w / 2) + 1), extended to w < 0 through
/// detailed balance; at w = 0 the limit 2 J(w) / (beta w) is used.
double bath_spectrum(const SpectralDensity& sd, double beta, double omega);

struct RedfieldTensor {
  Eigen::Index dim = 0;
  RealVector energies;
  // Columns are eigenvectors; the largest-magnitude component of each is real positive.
  Matrix eigenvectors;
  // R_abcd stored at ((a * d + b) * d + c) * d + d'.
  std::vector<Complex> entries;

  Complex operator()(Eigen::Index a, Eigen::Index b, Eigen::Index c, Eigen::Index d) const {
    return entries[static_cast<std::size_t>(((a * dim + b) * dim + c) * dim + d)];
  }
  double omega(Eigen::Index a, Eigen::Index b) const { return energies(a) - energies(b); }

  /// Generator of d(vec rho)/dt in the eigenbasis, including -i w_ab.
  Matrix generator() const;
  /// The same generator expressed in the site basis.
  Matrix site_generator() const;
};

/// Eigen-decomposition with the deterministic phase convention.
void phased_eigensystem(const Operator& h0, RealVector& energies, Matrix& vectors);

RedfieldTensor build_redfield_tensor(const Operator& h0,
                                     const std::vector<SystemBathCoupling>& baths, double beta);

/// Uses the supplied orthonormal eigenvectors of h0 instead of computing them.
RedfieldTensor build_redfield_tensor(const Operator& h0,
                                     const std::vector<SystemBathCoupling>& baths, double beta,
                                     const Matrix& eigenvectors);

Dynamics propagate_brme(const Operator& h0, const std::vector<SystemBathCoupling>& baths,
                        double beta, const DensityMatrix& rho0, double dt, std::size_t ntimes,
                        const IntegratorConfig& integrator = {});

}  // namespace qdyn
