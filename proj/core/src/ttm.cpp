#include "qdyn/ttm.hpp"

#include <string>

#include "qdyn/error.hpp"

namespace qdyn {

TransferTensors build_transfer_tensors(const AugmentedPropagatorSeries& e, std::size_t rmax) {
  if (rmax < 1) throw InvalidArgument("build_transfer_tensors: rmax must be at least 1");
  if (e.maps.size() < rmax + 1)
    throw DimensionError("build_transfer_tensors: need " + std::to_string(rmax) +
                         " propagators beyond t = 0, have " +
                         std::to_string(e.maps.empty() ? 0 : e.maps.size() - 1));
  TransferTensors t;
  t.rmax = rmax;
  t.dt = e.dt;
  t.tensors.reserve(rmax);
  for (std::size_t k = 1; k <= rmax; ++k) {
    Matrix tk = e.maps[k];
    for (std::size_t m = 1; m < k; ++m) tk.noalias() -= t.tensors[m - 1] * e.maps[k - m];
    t.tensors.push_back(std::move(tk));
  }
  return t;
}

AugmentedPropagatorSeries extend_propagators(const AugmentedPropagatorSeries& e,
                                             const TransferTensors& t, std::size_t ntimes) {
  AugmentedPropagatorSeries out;
  out.dt = e.dt;
  const std::size_t known = std::min(ntimes + 1, t.rmax + 1);
  out.maps.assign(e.maps.begin(), e.maps.begin() + static_cast<std::ptrdiff_t>(known));
  out.maps.reserve(ntimes + 1);
  for (std::size_t k = known; k <= ntimes; ++k) {
    Matrix ek = Matrix::Zero(out.maps[0].rows(), out.maps[0].cols());
    for (std::size_t m = 1; m <= t.rmax; ++m) ek.noalias() += t.tensors[m - 1] * out.maps[k - m];
    out.maps.push_back(std::move(ek));
  }
  return out;
}

AugmentedBackend path_integral_backend(const ForwardBackwardPropagatorSeries& fbU,
                                       std::vector<PathBath> baths, double beta, double dt,
                                       AugmentedArgs args) {
  return [fbU, baths = std::move(baths), beta, dt, args](std::size_t n) {
    return build_augmented_propagator(fbU, baths, beta, dt, n, args);
  };
}

Dynamics propagate_ttm(const AugmentedBackend& backend, const DensityMatrix& rho0, double dt,
                       std::size_t ntimes, std::size_t rmax) {
  const std::size_t learned = std::min(ntimes, rmax);
  const AugmentedPropagatorSeries e = backend(learned);
  if (e.maps.size() < learned + 1)
    throw DimensionError("propagate_ttm: backend returned too few propagators");
  if (ntimes <= rmax) return apply_propagator(e, rho0, dt, ntimes);
  const TransferTensors t = build_transfer_tensors(e, rmax);
  return apply_propagator(extend_propagators(e, t, ntimes), rho0, dt, ntimes);
}

Dynamics propagate_ttm(const ForwardBackwardPropagatorSeries& fbU,
                       const std::vector<PathBath>& baths, double beta, const DensityMatrix& rho0,
                       double dt, std::size_t ntimes, std::size_t rmax,
                       const AugmentedArgs& backend_args) {
  if (rmax < 1) throw InvalidArgument("propagate_ttm: rmax must be at least 1");
  for (std::size_t k = 1; k < fbU.steps.size(); ++k)
    if (fbU.steps[k] != fbU.steps[0])
      throw InvalidArgument("propagate_ttm: time-dependent propagators are not supported");
  return propagate_ttm(path_integral_backend(fbU, baths, beta, dt, backend_args), rho0, dt,
                       ntimes, rmax);
}

}  // namespace qdyn
