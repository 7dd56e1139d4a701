#pragma once

// Hierarchical equations of motion for Drude-Lorentz baths with the
// Ishizaki-Tanimura closure for the truncated Matsubara tail.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qdyn/bath.hpp"
#include "qdyn/core.hpp"
#include "qdyn/integrator.hpp"
#include "qdyn/spectral_density.hpp"

namespace qdyn {

struct HeomBathBinding {
  DrudeLorentzSD sd;
  Operator coupling_op;
};

/// All multi-indices n (length n_env * (num_modes + 1), entry b * (M+1) + m) with
/// |n| <= lmax, ordered by depth. plus/minus give the position of n +/- e_k, or -1.
struct HierarchyIndexSet {
  std::size_t n_env = 0;
  std::size_t num_modes = 0;
  std::size_t lmax = 0;
  std::vector<std::vector<std::uint16_t>> indices;
  std::vector<std::int64_t> plus;
  std::vector<std::int64_t> minus;

  std::size_t size() const { return indices.size(); }
  std::size_t width() const { return n_env * (num_modes + 1); }
  std::int64_t raised(std::size_t ado, std::size_t k) const { return plus[ado * width() + k]; }
  std::int64_t lowered(std::size_t ado, std::size_t k) const { return minus[ado * width() + k]; }
};

HierarchyIndexSet enumerate_hierarchy(std::size_t n_env, std::size_t num_modes, std::size_t lmax);

struct HeomArgs {
  std::size_t num_modes = 2;
  std::size_t lmax = 3;
  bool scaled = true;
  IntegratorConfig integrator;
};

/// Assembled hierarchy with its right-hand side. The state is one flat vector of
/// d*d blocks in enumeration order; block 0 is the reduced density matrix.
class HeomSystem {
public:
  HeomSystem(const Operator& h0, const std::vector<HeomBathBinding>& baths, double beta,
             const HeomArgs& args, std::vector<ExternalField> external_fields = {});

  const HierarchyIndexSet& hierarchy() const { return hierarchy_; }
  const std::vector<MatsubaraExpansion>& expansions() const { return expansions_; }
  Eigen::Index dim() const { return d_; }
  Eigen::Index state_size() const { return static_cast<Eigen::Index>(hierarchy_.size()) * d_ * d_; }

  Vector initial_state(const DensityMatrix& rho0) const;
  DensityMatrix reduced(const Vector& state) const;
  void rhs(double t, const Vector& y, Vector& dy) const;

private:
  struct Link {
    std::int64_t target;
    std::size_t bath;
    double weight;
    Complex c;
  };

  Eigen::Index d_;
  Operator h0_;
  std::vector<ExternalField> fields_;
  std::vector<Operator> couplings_;
  std::vector<bool> diagonal_;
  std::vector<RealVector> diag_values_;
  std::vector<double> closure_;
  std::vector<MatsubaraExpansion> expansions_;
  HierarchyIndexSet hierarchy_;
  std::vector<double> damping_;
  std::vector<std::vector<Link>> up_;
  std::vector<std::vector<Link>> down_;
};

Dynamics propagate_heom(const Operator& h0, const std::vector<HeomBathBinding>& baths, double beta,
                        const DensityMatrix& rho0, double dt, std::size_t ntimes,
                        const HeomArgs& args = {},
                        const std::vector<ExternalField>& external_fields = {});

}  // namespace qdyn
