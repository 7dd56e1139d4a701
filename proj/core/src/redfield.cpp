#include "qdyn/redfield.hpp"

#include <cmath>

#include "qdyn/error.hpp"

namespace qdyn {

double bath_spectrum(const SpectralDensity& sd, double beta, double omega) {
  if (omega == 0.0) {
    if (std::isinf(beta)) return 0.0;
    const double delta = 1e-8 * characteristic_frequency(sd);
    return 2.0 * evaluate(sd, delta) / (beta * delta);
  }
  const double w = std::abs(omega);
  const double j = evaluate(sd, w);
  if (j == 0.0) return 0.0;
  if (std::isinf(beta)) return omega > 0.0 ? 2.0 * j : 0.0;
  // 2 J (n + 1) for emission and 2 J n for absorption, n the Bose occupation.
  const double n = 1.0 / std::expm1(beta * w);
  return omega > 0.0 ? 2.0 * j * (n + 1.0) : 2.0 * j * n;
}

void phased_eigensystem(const Operator& h0, RealVector& energies, Matrix& vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h0 + h0.adjoint()));
  energies = es.eigenvalues();
  vectors = es.eigenvectors();
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index imax = 0;
    double vmax = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      // Small slack so that numerically tied components resolve to the first one.
      if (std::abs(vectors(i, j)) > vmax * (1.0 + 1e-10)) {
        vmax = std::abs(vectors(i, j));
        imax = i;
      }
    }
    const Complex ph = vectors(imax, j) / std::abs(vectors(imax, j));
    vectors.col(j) *= std::conj(ph);
    vectors(imax, j) = std::abs(vectors(imax, j));
  }
}

namespace {

void validate(const Operator& h0, const std::vector<SystemBathCoupling>& baths) {
  if (h0.rows() != h0.cols() || h0.rows() < 1)
    throw DimensionError("build_redfield_tensor: Hamiltonian must be square");
  if (!is_hermitian(h0, 1e-10 * (1.0 + h0.cwiseAbs().maxCoeff())))
    throw InvalidArgument("build_redfield_tensor: Hamiltonian must be Hermitian");
  for (const auto& b : baths) {
    if (b.coupling.rows() != h0.rows() || b.coupling.cols() != h0.cols())
      throw DimensionError("build_redfield_tensor: coupling operator dimension mismatch");
    if (!is_hermitian(b.coupling, 1e-10 * (1.0 + b.coupling.cwiseAbs().maxCoeff())))
      throw InvalidArgument("build_redfield_tensor: coupling operator must be Hermitian");
  }
}

}  // namespace

RedfieldTensor build_redfield_tensor(const Operator& h0,
                                     const std::vector<SystemBathCoupling>& baths, double beta,
                                     const Matrix& eigenvectors) {
  validate(h0, baths);
  const Eigen::Index d = h0.rows();
  if (eigenvectors.rows() != d || eigenvectors.cols() != d)
    throw DimensionError("build_redfield_tensor: eigenvector matrix has wrong shape");
  RedfieldTensor r;
  r.dim = d;
  r.eigenvectors = eigenvectors;
  r.energies = (eigenvectors.adjoint() * h0 * eigenvectors).diagonal().real();
  r.entries.assign(static_cast<std::size_t>(d * d * d * d), 0.0);

  Matrix spec(d, d);
  for (const auto& bath : baths) {
    const Matrix s = eigenvectors.adjoint() * bath.coupling * eigenvectors;
    // spec(c, n) = S(w_c - w_n).
    for (Eigen::Index c = 0; c < d; ++c)
      for (Eigen::Index n = 0; n < d; ++n)
        spec(c, n) = bath_spectrum(bath.sd, beta, r.energies(c) - r.energies(n));
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b)
        for (Eigen::Index c = 0; c < d; ++c)
          for (Eigen::Index dd = 0; dd < d; ++dd) {
            Complex acc = 0.0;
            if (b == dd)
              for (Eigen::Index n = 0; n < d; ++n) acc += s(a, n) * s(n, c) * spec(c, n);
            acc -= s(a, c) * s(dd, b) * spec(c, a);
            if (a == c)
              for (Eigen::Index n = 0; n < d; ++n) acc += s(dd, n) * s(n, b) * spec(dd, n);
            acc -= s(a, c) * s(dd, b) * spec(dd, b);
            r.entries[static_cast<std::size_t>(((a * d + b) * d + c) * d + dd)] -= 0.5 * acc;
          }
  }
  return r;
}

RedfieldTensor build_redfield_tensor(const Operator& h0,
                                     const std::vector<SystemBathCoupling>& baths, double beta) {
  validate(h0, baths);
  RealVector e;
  Matrix v;
  phased_eigensystem(h0, e, v);
  return build_redfield_tensor(h0, baths, beta, v);
}

Matrix RedfieldTensor::generator() const {
  const Eigen::Index d = dim;
  Matrix g(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index dd = 0; dd < d; ++dd) g(a * d + b, c * d + dd) = (*this)(a, b, c, dd);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) g(a * d + b, a * d + b) += -kI * omega(a, b);
  return g;
}

Matrix RedfieldTensor::site_generator() const {
  // rho_eig = V^dagger rho V, so vec(rho_eig) = kron(V^dagger, V^T) vec(rho).
  const Matrix to_eig = kron(eigenvectors.adjoint(), eigenvectors.transpose());
  const Matrix to_site = kron(eigenvectors, eigenvectors.conjugate());
  return to_site * generator() * to_eig;
}

Dynamics propagate_brme(const Operator& h0, const std::vector<SystemBathCoupling>& baths,
                        double beta, const DensityMatrix& rho0, double dt, std::size_t ntimes,
                        const IntegratorConfig& integrator) {
  const RedfieldTensor r = build_redfield_tensor(h0, baths, beta);
  const Eigen::Index d = r.dim;
  if (rho0.rows() != d || rho0.cols() != d)
    throw DimensionError("propagate_brme: rho0 dimension mismatch");
  if (!(dt > 0.0)) throw InvalidArgument("propagate_brme: dt must be positive");
  const Matrix g = r.generator();
  const Matrix& v = r.eigenvectors;

  Dynamics out;
  out.times = time_grid(dt, ntimes);
  out.states.resize(ntimes + 1);
  VectorRhs rhs = [&](double, const Vector& y, Vector& dy) { dy.noalias() = g * y; };
  integrate(rhs, vectorize(v.adjoint() * rho0 * v), out.times, integrator,
            [&](std::size_t i, const Vector& y) {
              out.states[i] = v * unvectorize(y, d) * v.adjoint();
            });
  out.states[0] = rho0;
  return out;
}

}  // namespace qdyn
