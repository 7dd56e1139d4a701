#pragma once

// Discretized influence-functional kernel.
//
// All coefficients are second differences of
//   Q(t) = (1/pi) int_0^inf J(w)/w^2 [coth(beta w/2)(1 - cos wt) + i sin wt] dw,
// the twice-integrated bath correlation function with the reorganization
// counterterm removed. Time points k = 0..N carry full steps in the interior and
// half steps at either end of the path, which gives four classes of coefficient.

#include <cstddef>
#include <vector>

#include "qdyn/core.hpp"
#include "qdyn/spectral_density.hpp"

namespace qdyn {

enum class KernelKind {
  Quantum,
  // coth(beta w / 2) replaced by its high-temperature limit 2/(beta w).
  Classical,
};

/// Q(t) by frequency quadrature. beta may be +infinity (zero temperature) for the
/// quantum kernel.
Complex kernel_q(const SpectralDensity& sd, double beta, double t,
                 KernelKind kind = KernelKind::Quantum);

enum class EtaClass {
  Interior,   // both points interior
  OneEnd,     // exactly one of the points is the first or last point of the path
  BothEnds,   // the pair (N, 0)
};

struct EtaCoefficients {
  std::size_t N = 0;
  double dt = 0.0;
  // q[j] = Q(j dt / 2), j = 0..2N+2.
  std::vector<Complex> q;

  /// eta_kk for an endpoint (k = 0 or k = N).
  Complex diag_end() const { return q.at(1); }
  /// eta_kk for an interior point.
  Complex diag_interior() const { return q.at(2); }
  /// Off-diagonal coefficient at lag m >= 1 for the given class.
  Complex lag(std::size_t m, EtaClass cls) const;

  /// eta_{k k'} (k >= k') for a path of exactly n_steps <= N steps, with endpoint
  /// classes assigned accordingly.
  Complex at(std::size_t k, std::size_t kp, std::size_t n_steps) const;
  Complex operator()(std::size_t k, std::size_t kp) const { return at(k, kp, N); }

  /// Full lower-triangular (N+1)x(N+1) table for a path of N steps.
  Matrix table() const;
};

/// Coefficients sufficient for paths of up to N steps.
EtaCoefficients compute_eta(const SpectralDensity& sd, double beta, double dt, std::size_t N,
                            KernelKind kind = KernelKind::Quantum);

}  // namespace qdyn
