#pragma once

// Shared state and operator types for every propagation method.
//
// Conventions used throughout the library:
//  * hbar = 1; energies and times are in whatever consistent units the caller
//    picks (the CLI converts spectroscopic units through `units`).
//  * Density matrices are vectorized row-major: vec(rho)[i * d + j] = rho(i, j).
//    A forward-backward propagator acting on vec(rho) is then U (x) conj(U).

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qdyn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

using Operator = Matrix;
using DensityMatrix = Matrix;

inline constexpr Complex kI{0.0, 1.0};

namespace units {
inline constexpr double invcm2au = 4.55633e-6;
inline constexpr double au2fs = 0.02418884254;
// Boltzmann constant in Hartree per Kelvin.
inline constexpr double kelvin2au = 3.166811563e-6;
}  // namespace units

/// Time-dependent scalar field V(t) coupled to the system through a Hermitian operator.
struct ExternalField {
  std::function<double(double)> amplitude;
  Operator coupling_op;
};

/// epsilon * sigma_z - omega * sigma_x.
Operator create_tls_hamiltonian(double epsilon, double omega);

/// Tight-binding chain with the given on-site energies and uniform nearest-neighbour
/// coupling. Periodic closure requires at least three sites.
Operator create_nn_hamiltonian(std::span<const double> site_energies, double coupling,
                               bool periodic);

Operator sigma_x();
Operator sigma_y();
Operator sigma_z();

/// H + sum_f V_f(t) O_f.
Operator hamiltonian_at(const Operator& h, std::span<const ExternalField> fields, double t);

bool is_hermitian(const Matrix& m, double tol = 1e-12);
bool is_diagonal(const Matrix& m, double tol = 0.0);

Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v, Eigen::Index dim);

Matrix kron(const Matrix& a, const Matrix& b);

/// U (x) conj(U) in the row-major vectorization convention.
Matrix forward_backward(const Matrix& u);

/// exp(A) for a general complex matrix.
Matrix expm(const Matrix& a);

/// exp(-i H dt). Uses an eigendecomposition when H is Hermitian.
Matrix time_step_propagator(const Operator& h, double dt);

/// Step propagators; entry k advances vec(rho) from k*dt to (k+1)*dt.
struct ForwardBackwardPropagatorSeries {
  std::vector<Matrix> steps;
  double dt = 0.0;

  std::size_t size() const { return steps.size(); }
  Eigen::Index dim() const;
};

/// Maps from vec(rho(0)) to vec(rho(k*dt)); entry 0 is the identity.
struct AugmentedPropagatorSeries {
  std::vector<Matrix> maps;
  double dt = 0.0;

  std::size_t size() const { return maps.size(); }
  Eigen::Index dim() const;
};

/// Cumulative products of the step propagators (E_0 = 1, E_k = K_{k-1} E_{k-1}).
AugmentedPropagatorSeries accumulate(const ForwardBackwardPropagatorSeries& fb);

/// A time series of reduced density matrices on the grid k*dt.
struct Dynamics {
  std::vector<double> times;
  std::vector<DensityMatrix> states;

  std::size_t size() const { return states.size(); }
};

std::vector<double> time_grid(double dt, std::size_t ntimes);

Dynamics apply_propagator(const AugmentedPropagatorSeries& propagators, const DensityMatrix& rho0,
                          double dt, std::size_t ntimes);

}  // namespace qdyn
