#include "qdyn/core.hpp"

#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "qdyn/error.hpp"

namespace qdyn {

Operator sigma_x() {
  Operator m = Operator::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

Operator sigma_y() {
  Operator m = Operator::Zero(2, 2);
  m(0, 1) = -kI;
  m(1, 0) = kI;
  return m;
}

Operator sigma_z() {
  Operator m = Operator::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

Operator create_tls_hamiltonian(double epsilon, double omega) {
  return epsilon * sigma_z() - omega * sigma_x();
}

Operator create_nn_hamiltonian(std::span<const double> site_energies, double coupling,
                               bool periodic) {
  const auto n = static_cast<Eigen::Index>(site_energies.size());
  if (n < 1) throw InvalidArgument("create_nn_hamiltonian: need at least one site");
  if (periodic && n < 3)
    throw InvalidArgument("create_nn_hamiltonian: periodic chain needs at least 3 sites");
  Operator h = Operator::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = site_energies[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      h(i, i + 1) = coupling;
      h(i + 1, i) = coupling;
    }
  }
  if (periodic) {
    h(0, n - 1) = coupling;
    h(n - 1, 0) = coupling;
  }
  return h;
}

Operator hamiltonian_at(const Operator& h, std::span<const ExternalField> fields, double t) {
  if (fields.empty()) return h;
  Operator out = h;
  for (const auto& f : fields) out += f.amplitude(t) * f.coupling_op;
  return out;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_diagonal(const Matrix& m, double tol) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

Vector vectorize(const Matrix& rho) {
  const Eigen::Index d = rho.rows();
  Vector v(d * rho.cols());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j) v(i * rho.cols() + j) = rho(i, j);
  return v;
}

Matrix unvectorize(const Vector& v, Eigen::Index dim) {
  if (v.size() != dim * dim)
    throw DimensionError("unvectorize: vector length " + std::to_string(v.size()) +
                         " does not match dimension " + std::to_string(dim));
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = v(i * dim + j);
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
  return out;
}

Matrix forward_backward(const Matrix& u) { return kron(u, u.conjugate()); }

Matrix expm(const Matrix& a) { return a.exp(); }

Matrix time_step_propagator(const Operator& h, double dt) {
  if (is_hermitian(h, 1e-14 * (1.0 + h.cwiseAbs().maxCoeff()))) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    const Eigen::VectorXd& e = es.eigenvalues();
    Vector phase(e.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) phase(i) = std::exp(-kI * e(i) * dt);
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  }
  return expm(Matrix(-kI * dt * h));
}

Eigen::Index ForwardBackwardPropagatorSeries::dim() const {
  if (steps.empty()) return 0;
  const auto d2 = steps.front().rows();
  Eigen::Index d = 0;
  while (d * d < d2) ++d;
  return d;
}

Eigen::Index AugmentedPropagatorSeries::dim() const {
  if (maps.empty()) return 0;
  const auto d2 = maps.front().rows();
  Eigen::Index d = 0;
  while (d * d < d2) ++d;
  return d;
}

AugmentedPropagatorSeries accumulate(const ForwardBackwardPropagatorSeries& fb) {
  AugmentedPropagatorSeries out;
  out.dt = fb.dt;
  if (fb.steps.empty()) return out;
  const auto d2 = fb.steps.front().rows();
  out.maps.reserve(fb.steps.size() + 1);
  out.maps.push_back(Matrix::Identity(d2, d2));
  for (const auto& k : fb.steps) out.maps.push_back(k * out.maps.back());
  return out;
}

std::vector<double> time_grid(double dt, std::size_t ntimes) {
  std::vector<double> t(ntimes + 1);
  for (std::size_t k = 0; k <= ntimes; ++k) t[k] = static_cast<double>(k) * dt;
  return t;
}

Dynamics apply_propagator(const AugmentedPropagatorSeries& propagators, const DensityMatrix& rho0,
                          double dt, std::size_t ntimes) {
  if (propagators.maps.size() < ntimes + 1)
    throw DimensionError("apply_propagator: " + std::to_string(propagators.maps.size()) +
                         " propagators supplied, " + std::to_string(ntimes + 1) + " required");
  const Eigen::Index d = rho0.rows();
  if (rho0.cols() != d) throw DimensionError("apply_propagator: rho0 is not square");
  const Vector v0 = vectorize(rho0);
  Dynamics out;
  out.times = time_grid(dt, ntimes);
  out.states.reserve(ntimes + 1);
  for (std::size_t k = 0; k <= ntimes; ++k) {
    const auto& e = propagators.maps[k];
    if (e.rows() != d * d || e.cols() != d * d)
      throw DimensionError("apply_propagator: propagator " + std::to_string(k) +
                           " has wrong shape for a " + std::to_string(d) + "-level system");
    out.states.push_back(unvectorize(e * v0, d));
  }
  return out;
}

}  // namespace qdyn
