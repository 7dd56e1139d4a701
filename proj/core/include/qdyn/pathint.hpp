#pragma once

// Quasi-adiabatic propagator path integrals over forward-backward paths.
//
// A forward-backward point is alpha = i * d + j, the (i, j) element of rho, with
// coordinates s+ = svec[i] and s- = svec[j] for each bath.

#include <cstddef>
#include <limits>
#include <vector>

#include "qdyn/core.hpp"
#include "qdyn/eta.hpp"
#include "qdyn/spectral_density.hpp"

namespace qdyn {

/// A harmonic bath seen by a path integral: its spectral density and the values
/// of the coupling operator on the system basis states.
struct PathBath {
  SpectralDensity sd;
  std::vector<double> svec;
};

/// One factor of the influence functional, already discretized.
struct InfluenceTerm {
  EtaCoefficients eta;
  std::vector<double> svec;
  // Optional reference coordinate per time point. When present the imaginary part
  // of the influence acts on (s+ + s-) / 2 - reference instead of (s+ + s-) / 2,
  // for paths whose mean-field response is already in the propagators.
  std::vector<double> reference;
};

inline constexpr double kDefaultElementBudget = 1u << 28;

struct QuapiArgs {
  // Path-amplitude entries below this magnitude are dropped after every step.
  double filter_cutoff = 0.0;
  // Refuse before any work when a path tensor would need more entries than this.
  double element_budget = kDefaultElementBudget;
};

/// Entry k is U_k (x) conj(U_k) for the step [k dt, (k+1) dt]. With fields the step
/// is split into `substeps` midpoint exponentials (0 picks 1 without fields, 64 with).
ForwardBackwardPropagatorSeries calculate_bare_propagators(
    const Operator& hamiltonian, double dt, std::size_t ntimes,
    const std::vector<ExternalField>& external_fields = {}, std::size_t substeps = 0);

/// Discretized influence for each bath, good for paths of up to n_max steps.
std::vector<InfluenceTerm> make_influence_terms(const std::vector<PathBath>& baths, double beta,
                                                double dt, std::size_t n_max);

/// Iterative propagation with memory L: exact for the first L steps, after which
/// pairs further apart than L steps are dropped.
Dynamics propagate_quapi(const ForwardBackwardPropagatorSeries& fbU,
                         const std::vector<PathBath>& baths, double beta,
                         const DensityMatrix& rho0, double dt, std::size_t ntimes, std::size_t L,
                         const QuapiArgs& args = {});

/// Same, with a prepared influence functional.
Dynamics propagate_quapi(const ForwardBackwardPropagatorSeries& fbU,
                         const std::vector<InfluenceTerm>& terms, const DensityMatrix& rho0,
                         std::size_t ntimes, std::size_t L, const QuapiArgs& args = {});

enum class AugmentedMethod { Quapi, Blip };

struct AugmentedArgs {
  AugmentedMethod method = AugmentedMethod::Quapi;
  // Quapi only: memory length, 0 for full memory.
  std::size_t memory = 0;
  // Blip only: drop configurations with more blips than this.
  std::size_t max_blips = std::numeric_limits<std::size_t>::max();
  QuapiArgs quapi;
};

/// Maps from vec(rho(0)) to vec(rho(k dt)), k = 0..N, including the influence
/// functional over all k-step paths.
AugmentedPropagatorSeries build_augmented_propagator(const ForwardBackwardPropagatorSeries& fbU,
                                                     const std::vector<PathBath>& baths,
                                                     double beta, double dt, std::size_t N,
                                                     const AugmentedArgs& args = {});

AugmentedPropagatorSeries build_augmented_propagator(const ForwardBackwardPropagatorSeries& fbU,
                                                     const std::vector<InfluenceTerm>& terms,
                                                     std::size_t N, const AugmentedArgs& args = {});

/// Direct sum over every forward-backward path of N steps.
DensityMatrix brute_force_path_sum(const ForwardBackwardPropagatorSeries& fbU,
                                   const std::vector<InfluenceTerm>& terms,
                                   const DensityMatrix& rho0, std::size_t N,
                                   double element_budget = kDefaultElementBudget);

DensityMatrix brute_force_path_sum(const ForwardBackwardPropagatorSeries& fbU,
                                   const EtaCoefficients& eta, const DensityMatrix& rho0,
                                   std::size_t N, const std::vector<double>& svec,
                                   double element_budget = kDefaultElementBudget);

}  // namespace qdyn
