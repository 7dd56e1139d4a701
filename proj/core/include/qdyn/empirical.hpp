#pragma once

// Isolated (possibly non-Hermitian) and Lindblad propagation.

#include <cstddef>
#include <vector>

#include "qdyn/core.hpp"
#include "qdyn/integrator.hpp"

namespace qdyn {

struct BarePropagateRequest {
  Operator hamiltonian;
  DensityMatrix rho0;
  double dt = 0.0;
  std::size_t ntimes = 0;
  std::vector<ExternalField> external_fields;
  // Each operator includes its rate prefactor.
  std::vector<Operator> jump_ops;
  IntegratorConfig integrator;
};

/// i d(rho)/dt = H rho - rho H^dagger, plus the Lindblad dissipator when jump
/// operators are given.
Dynamics propagate_bare(const BarePropagateRequest& req);

/// The right-hand side used by propagate_bare.
Matrix lindblad_rhs(const Operator& h, const std::vector<Operator>& jump_ops,
                    const DensityMatrix& rho);

/// Liouvillian superoperator acting on row-major vec(rho).
Matrix lindblad_liouvillian(const Operator& h, const std::vector<Operator>& jump_ops);

/// Excitonic dimer with vibrational dephasing (strength bo) and spontaneous
/// emission (strength se). Basis kron(site1, site2) with 0 = excited, so index 3
/// is the common ground state; the run starts in index 1. dt = 0.125, 100 steps.
Dynamics propagate_dimer_emission(double bo, double se, const IntegratorConfig& integrator = {});

}  // namespace qdyn
