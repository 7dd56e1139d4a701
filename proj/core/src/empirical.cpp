#include "qdyn/empirical.hpp"

#include <string>

#include "qdyn/error.hpp"

namespace qdyn {

namespace {

void check_square(const Matrix& m, Eigen::Index d, const char* what) {
  if (m.rows() != d || m.cols() != d)
    throw DimensionError(std::string("propagate_bare: ") + what + " has shape " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         ", expected " + std::to_string(d) + "x" + std::to_string(d));
}

}  // namespace

Matrix lindblad_rhs(const Operator& h, const std::vector<Operator>& jump_ops,
                    const DensityMatrix& rho) {
  Matrix out = -kI * (h * rho - rho * h.adjoint());
  for (const auto& l : jump_ops) {
    const Matrix ld = l.adjoint();
    const Matrix ldl = ld * l;
    out += l * rho * ld - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

Matrix lindblad_liouvillian(const Operator& h, const std::vector<Operator>& jump_ops) {
  const Eigen::Index d = h.rows();
  const Matrix id = Matrix::Identity(d, d);
  Matrix out = -kI * (kron(h, id) - kron(id, h.conjugate()));
  for (const auto& l : jump_ops) {
    const Matrix ldl = l.adjoint() * l;
    out += kron(l, l.conjugate()) - 0.5 * (kron(ldl, id) + kron(id, ldl.transpose()));
  }
  return out;
}

Dynamics propagate_bare(const BarePropagateRequest& req) {
  const Eigen::Index d = req.hamiltonian.rows();
  if (d < 1) throw DimensionError("propagate_bare: empty Hamiltonian");
  check_square(req.hamiltonian, d, "Hamiltonian");
  check_square(req.rho0, d, "rho0");
  for (const auto& f : req.external_fields) check_square(f.coupling_op, d, "field coupling");
  for (const auto& l : req.jump_ops) check_square(l, d, "jump operator");
  if (!(req.dt > 0.0)) throw InvalidArgument("propagate_bare: dt must be positive");
  if (!req.jump_ops.empty() && !is_hermitian(req.hamiltonian))
    throw InvalidArgument("propagate_bare: Lindblad evolution needs a Hermitian Hamiltonian");

  Dynamics out;
  out.times = time_grid(req.dt, req.ntimes);
  const std::span<const ExternalField> fields(req.external_fields);
  MatrixRhs rhs = [&](double t, const Matrix& rho) {
    return lindblad_rhs(hamiltonian_at(req.hamiltonian, fields, t), req.jump_ops, rho);
  };
  out.states = integrate(rhs, req.rho0, out.times, req.integrator);
  return out;
}

Dynamics propagate_dimer_emission(double bo, double se, const IntegratorConfig& integrator) {
  if (bo < 0.0 || se < 0.0) throw InvalidArgument("propagate_dimer_emission: negative strength");
  BarePropagateRequest req;
  req.hamiltonian = Operator::Zero(4, 4);
  req.hamiltonian(0, 0) = 20.0;
  req.hamiltonian(1, 1) = 10.0;
  req.hamiltonian(2, 2) = 10.0;
  req.hamiltonian(1, 2) = -1.0;
  req.hamiltonian(2, 1) = -1.0;
  req.rho0 = DensityMatrix::Zero(4, 4);
  req.rho0(1, 1) = 1.0;
  req.dt = 0.125;
  req.ntimes = 100;
  req.integrator = integrator;

  const Matrix id = Matrix::Identity(2, 2);
  Matrix sm = Matrix::Zero(2, 2);
  sm(1, 0) = 1.0;
  req.jump_ops = {kron(bo * sigma_z(), id), kron(id, bo * sigma_z()), kron(se * sm, id),
                  kron(id, se * sm)};
  return propagate_bare(req);
}

}  // namespace qdyn
