#pragma once

// Dormand-Prince 5(4) integrator with PI step-size control and exact landing on
// a caller-supplied output grid.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "qdyn/core.hpp"

namespace qdyn {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-10;
  // 0 selects an automatic initial step.
  double initial_step = 0.0;
  double max_step = std::numeric_limits<double>::infinity();
  // Take steps of exactly initial_step (shortened only to land on grid points);
  // no error control. Used for order checks.
  bool fixed_step = false;
  // 0 means unlimited.
  std::size_t max_steps = 0;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_calls = 0;
};

// dy/dt written into the third argument; it is pre-sized to match y.
using VectorRhs = std::function<void(double, const Vector&, Vector&)>;
using MatrixRhs = std::function<Matrix(double, const Matrix&)>;
// Called once per grid point with its index and the state there.
using GridObserver = std::function<void(std::size_t, const Vector&)>;

/// Integrates y' = rhs(t, y) from t_grid[0], reporting y at each grid point
/// (including the first) through the observer.
IntegratorStats integrate(const VectorRhs& rhs, const Vector& y0, std::span<const double> t_grid,
                          const IntegratorConfig& config, const GridObserver& observer);

std::vector<Matrix> integrate(const MatrixRhs& rhs, const Matrix& y0,
                              std::span<const double> t_grid,
                              const IntegratorConfig& config = {});

}  // namespace qdyn
