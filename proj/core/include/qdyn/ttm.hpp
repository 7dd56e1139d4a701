#pragma once

// Transfer tensor method: learn T_1..T_rmax from augmented propagators and
// extrapolate E_k = sum_m T_m E_{k-m} beyond the learned range.

#include <cstddef>
#include <functional>
#include <vector>

#include "qdyn/core.hpp"
#include "qdyn/pathint.hpp"

namespace qdyn {

struct TransferTensors {
  std::vector<Matrix> tensors;  // tensors[m - 1] = T_m
  std::size_t rmax = 0;
  double dt = 0.0;
};

TransferTensors build_transfer_tensors(const AugmentedPropagatorSeries& e, std::size_t rmax);

/// Maps E_0..E_ntimes: the input entries for k <= rmax are copied unchanged.
AugmentedPropagatorSeries extend_propagators(const AugmentedPropagatorSeries& e,
                                             const TransferTensors& t, std::size_t ntimes);

/// Produces augmented propagators E_0..E_n for a given step count.
using AugmentedBackend = std::function<AugmentedPropagatorSeries(std::size_t)>;

/// Backend over build_augmented_propagator with the given baths and options.
AugmentedBackend path_integral_backend(const ForwardBackwardPropagatorSeries& fbU,
                                       std::vector<PathBath> baths, double beta, double dt,
                                       AugmentedArgs args = {});

/// fbU must be time-independent (no external fields).
Dynamics propagate_ttm(const ForwardBackwardPropagatorSeries& fbU,
                       const std::vector<PathBath>& baths, double beta, const DensityMatrix& rho0,
                       double dt, std::size_t ntimes, std::size_t rmax,
                       const AugmentedArgs& backend_args = {});

Dynamics propagate_ttm(const AugmentedBackend& backend, const DensityMatrix& rho0, double dt,
                       std::size_t ntimes, std::size_t rmax);

}  // namespace qdyn
