#include "qdyn/heom.hpp"

#include <cmath>
#include <map>
#include <string>

#include "qdyn/error.hpp"

namespace qdyn {

HierarchyIndexSet enumerate_hierarchy(std::size_t n_env, std::size_t num_modes, std::size_t lmax) {
  HierarchyIndexSet h;
  h.n_env = n_env;
  h.num_modes = num_modes;
  h.lmax = lmax;
  const std::size_t k = h.width();

  std::vector<std::uint16_t> cur(k, 0);
  h.indices.push_back(cur);
  // Depth-by-depth generation; each level is built from the previous by raising
  // positions at or beyond the last non-zero entry, which visits each index once.
  std::size_t level_begin = 0;
  for (std::size_t depth = 1; depth <= lmax && k > 0; ++depth) {
    const std::size_t level_end = h.indices.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      const auto base = h.indices[i];
      std::size_t last = 0;
      for (std::size_t j = 0; j < k; ++j)
        if (base[j] != 0) last = j;
      for (std::size_t j = last; j < k; ++j) {
        auto next = base;
        ++next[j];
        h.indices.push_back(std::move(next));
      }
    }
    level_begin = level_end;
  }

  std::map<std::vector<std::uint16_t>, std::int64_t> position;
  for (std::size_t i = 0; i < h.indices.size(); ++i)
    position.emplace(h.indices[i], static_cast<std::int64_t>(i));
  h.plus.assign(h.indices.size() * k, -1);
  h.minus.assign(h.indices.size() * k, -1);
  for (std::size_t i = 0; i < h.indices.size(); ++i) {
    auto probe = h.indices[i];
    for (std::size_t j = 0; j < k; ++j) {
      ++probe[j];
      if (auto it = position.find(probe); it != position.end()) h.plus[i * k + j] = it->second;
      --probe[j];
      if (probe[j] > 0) {
        --probe[j];
        h.minus[i * k + j] = position.at(probe);
        ++probe[j];
      }
    }
  }
  return h;
}

HeomSystem::HeomSystem(const Operator& h0, const std::vector<HeomBathBinding>& baths, double beta,
                       const HeomArgs& args, std::vector<ExternalField> external_fields)
    : d_(h0.rows()), h0_(h0), fields_(std::move(external_fields)) {
  if (h0.rows() != h0.cols() || d_ < 1) throw DimensionError("propagate_heom: H must be square");
  if (!(beta > 0.0) || std::isinf(beta))
    throw InvalidArgument("propagate_heom: beta must be positive and finite");
  for (const auto& f : fields_)
    if (f.coupling_op.rows() != d_ || f.coupling_op.cols() != d_)
      throw DimensionError("propagate_heom: field coupling dimension mismatch");

  const std::size_t m1 = args.num_modes + 1;
  for (const auto& b : baths) {
    if (b.coupling_op.rows() != d_ || b.coupling_op.cols() != d_)
      throw DimensionError("propagate_heom: coupling operator dimension mismatch");
    if (!is_hermitian(b.coupling_op, 1e-12 * (1.0 + b.coupling_op.cwiseAbs().maxCoeff())))
      throw InvalidArgument("propagate_heom: coupling operator must be Hermitian");
    couplings_.push_back(b.coupling_op);
    const bool diag = is_diagonal(b.coupling_op);
    diagonal_.push_back(diag);
    diag_values_.push_back(b.coupling_op.diagonal().real());
    expansions_.push_back(matsubara_expand(b.sd, beta, args.num_modes));
    const auto& ex = expansions_.back();
    const double lam = b.sd.lambda / (b.sd.delta_s * b.sd.delta_s);
    double closure = 2.0 * lam / (beta * b.sd.gamma);
    for (std::size_t m = 0; m < m1; ++m) closure -= ex.cs[m].real() / ex.nus[m];
    closure_.push_back(closure);
  }

  hierarchy_ = enumerate_hierarchy(baths.size(), args.num_modes, args.lmax);
  const std::size_t k = hierarchy_.width();
  damping_.resize(hierarchy_.size());
  up_.resize(hierarchy_.size());
  down_.resize(hierarchy_.size());
  for (std::size_t i = 0; i < hierarchy_.size(); ++i) {
    const auto& n = hierarchy_.indices[i];
    double damp = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t b = j / m1, m = j % m1;
      const Complex c = expansions_[b].cs[m];
      const double nj = n[j];
      damp += nj * expansions_[b].nus[m];
      const bool scale = args.scaled && std::abs(c) > 0.0;
      if (auto up = hierarchy_.raised(i, j); up >= 0) {
        const double w = scale ? std::sqrt((nj + 1.0) * std::abs(c)) : 1.0;
        up_[i].push_back({up, b, w, c});
      }
      if (auto dn = hierarchy_.lowered(i, j); dn >= 0) {
        const double w = scale ? std::sqrt(nj / std::abs(c)) : nj;
        down_[i].push_back({dn, b, w, c});
      }
    }
    damping_[i] = damp;
  }
}

Vector HeomSystem::initial_state(const DensityMatrix& rho0) const {
  if (rho0.rows() != d_ || rho0.cols() != d_)
    throw DimensionError("propagate_heom: rho0 dimension mismatch");
  Vector y = Vector::Zero(state_size());
  Eigen::Map<Matrix>(y.data(), d_, d_) = rho0;
  return y;
}

DensityMatrix HeomSystem::reduced(const Vector& state) const {
  return Eigen::Map<const Matrix>(state.data(), d_, d_);
}

void HeomSystem::rhs(double t, const Vector& y, Vector& dy) const {
  const Eigen::Index dd = d_ * d_;
  const Matrix h = fields_.empty() ? h0_ : hamiltonian_at(h0_, fields_, t);
  const std::size_t nb = couplings_.size();
  Matrix acc(d_, d_), tmp(d_, d_), p(d_, d_);

  for (std::size_t i = 0; i < hierarchy_.size(); ++i) {
    Eigen::Map<const Matrix> rho(y.data() + static_cast<Eigen::Index>(i) * dd, d_, d_);
    Eigen::Map<Matrix> out(dy.data() + static_cast<Eigen::Index>(i) * dd, d_, d_);

    acc.noalias() = h * rho;
    acc.noalias() -= rho * h;
    out = -kI * acc - damping_[i] * rho;

    for (std::size_t b = 0; b < nb; ++b) {
      if (closure_[b] == 0.0) continue;
      if (diagonal_[b]) {
        const auto& s = diag_values_[b];
        for (Eigen::Index c = 0; c < d_; ++c)
          for (Eigen::Index r = 0; r < d_; ++r) {
            const double ds = s(r) - s(c);
            out(r, c) -= closure_[b] * ds * ds * rho(r, c);
          }
      } else {
        const Matrix& s = couplings_[b];
        tmp.noalias() = s * rho;
        tmp.noalias() -= rho * s;
        acc.noalias() = s * tmp;
        acc.noalias() -= tmp * s;
        out -= closure_[b] * acc;
      }
    }

    // Links are ordered by bath, so each group shares one commutator.
    const auto& ups = up_[i];
    for (std::size_t g = 0; g < ups.size();) {
      const std::size_t b = ups[g].bath;
      p.setZero();
      for (; g < ups.size() && ups[g].bath == b; ++g)
        p += ups[g].weight * Eigen::Map<const Matrix>(y.data() + ups[g].target * dd, d_, d_);
      if (diagonal_[b]) {
        const auto& s = diag_values_[b];
        for (Eigen::Index c = 0; c < d_; ++c)
          for (Eigen::Index r = 0; r < d_; ++r) out(r, c) -= kI * (s(r) - s(c)) * p(r, c);
      } else {
        acc.noalias() = couplings_[b] * p;
        acc.noalias() -= p * couplings_[b];
        out -= kI * acc;
      }
    }

    for (const Link& l : down_[i]) {
      Eigen::Map<const Matrix> lo(y.data() + l.target * dd, d_, d_);
      const Complex c = l.c, cc = std::conj(l.c);
      if (diagonal_[l.bath]) {
        const auto& s = diag_values_[l.bath];
        for (Eigen::Index col = 0; col < d_; ++col)
          for (Eigen::Index r = 0; r < d_; ++r)
            out(r, col) -= kI * l.weight * (c * s(r) - cc * s(col)) * lo(r, col);
      } else {
        const Matrix& s = couplings_[l.bath];
        acc.noalias() = c * (s * lo);
        acc.noalias() -= cc * (lo * s);
        out -= kI * l.weight * acc;
      }
    }
  }
}

Dynamics propagate_heom(const Operator& h0, const std::vector<HeomBathBinding>& baths, double beta,
                        const DensityMatrix& rho0, double dt, std::size_t ntimes,
                        const HeomArgs& args, const std::vector<ExternalField>& external_fields) {
  if (!(dt > 0.0)) throw InvalidArgument("propagate_heom: dt must be positive");
  const HeomSystem sys(h0, baths, beta, args, external_fields);
  Dynamics out;
  out.times = time_grid(dt, ntimes);
  out.states.resize(ntimes + 1);
  VectorRhs rhs = [&](double t, const Vector& y, Vector& dy) { sys.rhs(t, y, dy); };
  integrate(rhs, sys.initial_state(rho0), out.times, args.integrator,
            [&](std::size_t i, const Vector& y) { out.states[i] = sys.reduced(y); });
  return out;
}

}  // namespace qdyn
