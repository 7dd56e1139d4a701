#pragma once

// Quantum-classical path integral over a harmonic solvent.
//
// Each Monte Carlo sample is a classical bath trajectory driven by the
// mean-field system coordinate; it yields a sequence of reference propagators.
// EACP averages those; QCPI adds the residual quantum influence over kmax steps.
// The bath couples as -sum_j c_j x_j s + lambda s^2, matching the counterterm
// convention of the path-integral kernel.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qdyn/bath.hpp"
#include "qdyn/core.hpp"
#include "qdyn/pathint.hpp"
#include "qdyn/spectral_density.hpp"

namespace qdyn {

// Boltzmann draws the classical thermal distribution. Wigner draws the
// harmonic Wigner function, whose classical correlation already carries the
// full symmetrized quantum fluctuations.
enum class PhaseSpaceSampling { Boltzmann, Wigner };

struct HarmonicBathSolvent {
  double beta = 1.0;
  DiscreteBathModes modes;
  // Coupling-operator value on each system basis state.
  std::vector<double> svals;
  std::size_t n_points = 1;
  std::uint64_t seed = 0;
  PhaseSpaceSampling sampling = PhaseSpaceSampling::Boltzmann;
};

struct PhaseSpacePoint {
  std::vector<double> positions;
  std::vector<double> momenta;
};

/// sum_i rho0_ii s_i: the coordinate the bath is equilibrated around.
double initial_coordinate(const HarmonicBathSolvent& solvent, const DensityMatrix& rho0);

/// Sample `index`, centred on the equilibrium of s_init. The stream depends only
/// on (seed, index).
PhaseSpacePoint sample_point(const HarmonicBathSolvent& solvent, double s_init,
                             std::size_t index);

/// Samples 0..n_points-1.
std::vector<PhaseSpacePoint> sample_phase_space(const HarmonicBathSolvent& solvent,
                                                double s_init);

struct ReferencePropagators {
  ForwardBackwardPropagatorSeries fbU;
  // Mean-field coordinate Tr(rho_ref s) at each time point 0..ntimes.
  std::vector<double> mean_coordinate;
};

/// Integrates the trajectory from `point` with exact harmonic sub-steps of length
/// classical_dt under the mean-field force, building the step propagators along it.
ReferencePropagators calculate_reference_propagators(const Operator& h0,
                                                     const HarmonicBathSolvent& solvent,
                                                     const PhaseSpacePoint& point,
                                                     const DensityMatrix& rho0,
                                                     double classical_dt, double dt,
                                                     std::size_t ntimes);

struct QcpiArgs {
  std::size_t kmax = 3;
  // false drops the residual influence, which reduces QCPI to EACP.
  bool residual = true;
  QuapiArgs quapi;
  // 0 reads QDYN_NUM_THREADS, defaulting to 1.
  std::size_t threads = 0;
};

struct QcpiEnsemble {
  Dynamics qcpi;
  Dynamics eacp;
};

/// Per-sample unit of work plus a deterministic parallel reduction.
class QcpiRunner {
public:
  struct Sample {
    std::vector<DensityMatrix> eacp;
    std::vector<DensityMatrix> qcpi;
  };

  /// sd may be empty for an EACP-only run.
  QcpiRunner(Operator h0, std::optional<SpectralDensity> sd, HarmonicBathSolvent solvent,
             DensityMatrix rho0, double classical_dt, double dt, std::size_t ntimes,
             QcpiArgs args = {});

  Sample run_sample(std::size_t index) const;
  QcpiEnsemble run() const;

private:
  Operator h0_;
  std::optional<SpectralDensity> sd_;
  HarmonicBathSolvent solvent_;
  DensityMatrix rho0_;
  double classical_dt_, dt_;
  std::size_t ntimes_;
  QcpiArgs args_;
  double s_init_;
  std::optional<EtaCoefficients> residual_eta_;
};

Dynamics propagate_eacp(const Operator& h0, const HarmonicBathSolvent& solvent,
                        const DensityMatrix& rho0, double classical_dt, double dt,
                        std::size_t ntimes, std::size_t threads = 0);

Dynamics propagate_qcpi(const Operator& h0, const SpectralDensity& sd,
                        const HarmonicBathSolvent& solvent, const DensityMatrix& rho0,
                        double classical_dt, double dt, std::size_t ntimes,
                        const QcpiArgs& args = {});

/// Thread count from QDYN_NUM_THREADS (at least 1).
std::size_t default_thread_count();

}  // namespace qdyn
