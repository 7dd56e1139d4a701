#include "qdyn/qcpi.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "qdyn/error.hpp"

namespace qdyn {

namespace {

template <class M>
M exp_step(const M& h, double step) {
  if constexpr (M::RowsAtCompileTime == 2) {
    const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
    const double az = 0.5 * (h(0, 0).real() - h(1, 1).real());
    const double v = std::sqrt(az * az + std::norm(h(0, 1)));
    const Complex global = std::exp(Complex(0.0, -a0 * step));
    if (v == 0.0) return global * M::Identity();
    const double c = std::cos(v * step);
    const double s = std::sin(v * step) / v;
    M u;
    u(0, 0) = global * Complex(c, -s * az);
    u(1, 1) = global * Complex(c, s * az);
    u(0, 1) = global * Complex(0.0, -s) * h(0, 1);
    u(1, 0) = global * Complex(0.0, -s) * h(1, 0);
    return u;
  } else {
    return time_step_propagator(h, step);
  }
}

// Exact harmonic sub-steps under the force c * s(t), with the mean-field coordinate
// s(t) taken linear across each sub-step; its mean value and slope are
// extrapolated from the last three sub-step boundaries.
template <class M>
void drive(const Matrix& hsys_in, const RealVector& svals, const DiscreteBathModes& modes,
           const PhaseSpacePoint& point, const DensityMatrix& rho0, double h, std::size_t nsub,
           std::size_t ntimes, ReferencePropagators& out) {
  const auto n_modes = static_cast<Eigen::Index>(modes.size());
  const Eigen::Map<const Eigen::ArrayXd> w(modes.omegas.data(), n_modes);
  const Eigen::Map<const Eigen::ArrayXd> c(modes.couplings.data(), n_modes);
  const Eigen::ArrayXd cw = (w * h).cos();
  const Eigen::ArrayXd sw = (w * h).sin();
  const Eigen::ArrayXd c_over_w2 = c / w.square();
  const Eigen::ArrayXd sw_over_w = sw / w;
  const Eigen::ArrayXd w_sw = w * sw;
  // c times the exact sub-step integral of x(t), split by initial displacement and momentum.
  const Eigen::ArrayXd int_dx = c * sw / w;
  const Eigen::ArrayXd int_p = c * (1.0 - cw) / w.square();
  const double static_ix = (c * c_over_w2).sum() * h;
  // Double integral of x(t2) - x(t1) over t2 < t1 for the same split; the
  // displacement about the driven centre is all that survives.
  const Eigen::ArrayXd dint_dx = c * (2.0 * (1.0 - cw) / w.square() - h * sw / w);
  const Eigen::ArrayXd dint_p = c * (h * (1.0 + cw) / w - 2.0 * sw / w.square()) / w;
  const double lin_iix = (c * c_over_w2).sum() * h * h * h / 6.0;
  Eigen::ArrayXd x = Eigen::Map<const Eigen::ArrayXd>(point.positions.data(), n_modes);
  Eigen::ArrayXd p = Eigen::Map<const Eigen::ArrayXd>(point.momenta.data(), n_modes);
  Eigen::ArrayXd dx(n_modes);

  const M hsys = hsys_in;
  const Eigen::Index d = hsys.rows();
  M rho = rho0;
  auto mean = [&](const M& r) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) v += r(i, i).real() * svals(i);
    return v;
  };
  double sbar = mean(rho);
  double s1 = sbar, s2 = sbar;  // values one and two sub-steps back
  std::size_t history = 0;
  // d<S>/dt at t = 0; the bath term is diagonal and drops out of [S, H].
  double slope0 = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k)
      slope0 += (Complex(0.0, -1.0) * rho(k, i) * hsys(i, k) * (svals(i) - svals(k))).real();
  out.mean_coordinate.push_back(sbar);
  M hstep = hsys;
  // Second Magnus term: exp(-i h H + (I/2)[H_sys, S]) with H_sys Hermitian and S
  // diagonal; folded into an effective Hermitian step Hamiltonian.
  M comm = M::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k) comm(i, k) = hsys(i, k) * (svals(k) - svals(i));
  const M magnus = (kI / (2.0 * h)) * comm;
  for (std::size_t n = 0; n < ntimes; ++n) {
    M u = M::Identity(d, d);
    for (std::size_t j = 0; j < nsub; ++j) {
      double smid = sbar, slope = 0.0;
      if (history >= 2) {
        smid = (23.0 * sbar - 16.0 * s1 + 5.0 * s2) / 12.0;
        slope = (2.0 * sbar - 3.0 * s1 + s2) / h;
      } else if (history == 1) {
        smid = 1.5 * sbar - 0.5 * s1;
        slope = (sbar - s1) / h;
      } else {
        slope = slope0;
        smid = sbar + 0.5 * h * slope;
      }
      const double s0 = smid - 0.5 * h * slope;
      dx = x - c_over_w2 * s0;
      p -= c_over_w2 * slope;
      const double ix = static_ix * smid + (dx * int_dx + p * int_p).sum();
      const double iix = (dx * dint_dx + p * dint_p).sum() - lin_iix * slope;
      x = c_over_w2 * (s0 + slope * h) + dx * cw + p * sw_over_w;
      p = p * cw - dx * w_sw + c_over_w2 * slope;
      hstep = hsys + iix * magnus;
      for (Eigen::Index i = 0; i < d; ++i) hstep(i, i) -= (ix / h) * svals(i);
      const M usub = exp_step(hstep, h);
      u = (usub * u).eval();
      rho = (usub * rho * usub.adjoint()).eval();
      s2 = s1;
      s1 = sbar;
      sbar = mean(rho);
      ++history;
    }
    out.fbU.steps.push_back(forward_backward(Matrix(u)));
    out.mean_coordinate.push_back(sbar);
  }
}

std::size_t substep_count(double classical_dt, double dt) {
  if (!(classical_dt > 0.0) || !(dt > 0.0))
    throw InvalidArgument("qcpi: time steps must be positive");
  const double ratio = dt / classical_dt;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * ratio)
    throw InvalidArgument("qcpi: classical_dt must divide dt");
  return static_cast<std::size_t>(n);
}

void check_solvent(const HarmonicBathSolvent& solvent, Eigen::Index d) {
  if (static_cast<Eigen::Index>(solvent.svals.size()) != d)
    throw DimensionError("qcpi: svals length does not match the system dimension");
  if (solvent.modes.omegas.size() != solvent.modes.couplings.size())
    throw DimensionError("qcpi: mode frequency and coupling lists differ in length");
  if (!(solvent.beta > 0.0)) throw InvalidArgument("qcpi: beta must be positive");
  if (solvent.n_points < 1) throw InvalidArgument("qcpi: need at least one sample");
}

}  // namespace

std::size_t default_thread_count() {
  if (const char* env = std::getenv("QDYN_NUM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

double initial_coordinate(const HarmonicBathSolvent& solvent, const DensityMatrix& rho0) {
  double s = 0.0;
  for (std::size_t i = 0; i < solvent.svals.size(); ++i)
    s += rho0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() * solvent.svals[i];
  return s;
}

PhaseSpacePoint sample_point(const HarmonicBathSolvent& solvent, double s_init,
                             std::size_t index) {
  const std::uint64_t idx = index;
  std::seed_seq seq{static_cast<std::uint32_t>(solvent.seed),
                    static_cast<std::uint32_t>(solvent.seed >> 32), static_cast<std::uint32_t>(idx),
                    static_cast<std::uint32_t>(idx >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto& m = solvent.modes;
  PhaseSpacePoint p;
  p.positions.resize(m.size());
  p.momenta.resize(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double w = m.omegas[j];
    // Momentum variance: 1/beta classically, (w/2) coth(beta w/2) for Wigner.
    const double var_p = solvent.sampling == PhaseSpaceSampling::Wigner
                             ? 0.5 * w / std::tanh(0.5 * solvent.beta * w)
                             : 1.0 / solvent.beta;
    const double sigma_p = std::sqrt(var_p);
    p.positions[j] = m.couplings[j] * s_init / (w * w) + sigma_p / w * normal(rng);
    p.momenta[j] = sigma_p * normal(rng);
  }
  return p;
}

std::vector<PhaseSpacePoint> sample_phase_space(const HarmonicBathSolvent& solvent,
                                                double s_init) {
  std::vector<PhaseSpacePoint> out;
  out.reserve(solvent.n_points);
  for (std::size_t i = 0; i < solvent.n_points; ++i)
    out.push_back(sample_point(solvent, s_init, i));
  return out;
}

ReferencePropagators calculate_reference_propagators(const Operator& h0,
                                                     const HarmonicBathSolvent& solvent,
                                                     const PhaseSpacePoint& point,
                                                     const DensityMatrix& rho0,
                                                     double classical_dt, double dt,
                                                     std::size_t ntimes) {
  const Eigen::Index d = h0.rows();
  check_solvent(solvent, d);
  if (rho0.rows() != d || rho0.cols() != d)
    throw DimensionError("qcpi: rho0 does not match the Hamiltonian");
  const auto& modes = solvent.modes;
  if (point.positions.size() != modes.size() || point.momenta.size() != modes.size())
    throw DimensionError("qcpi: phase-space point does not match the mode count");
  const std::size_t nsub = substep_count(classical_dt, dt);
  const double h = dt / static_cast<double>(nsub);

  RealVector svals(d);
  for (Eigen::Index i = 0; i < d; ++i) svals(i) = solvent.svals[static_cast<std::size_t>(i)];
  const double lambda = modes.reorganization_energy();
  Operator hsys = h0;
  hsys.diagonal() += (lambda * svals.array().square()).matrix().cast<Complex>();
  auto mean = [&](const DensityMatrix& rho) { return (rho.diagonal().real().array() * svals.array()).sum(); };

  ReferencePropagators out;
  out.fbU.dt = dt;
  out.fbU.steps.reserve(ntimes);
  out.mean_coordinate.reserve(ntimes + 1);

  bool coupled = false;
  for (double c : modes.couplings) coupled = coupled || c != 0.0;
  if (!coupled) {
    const Matrix u = time_step_propagator(hsys, dt);
    const Matrix k = forward_backward(u);
    DensityMatrix rho = rho0;
    out.mean_coordinate.push_back(mean(rho));
    for (std::size_t n = 0; n < ntimes; ++n) {
      out.fbU.steps.push_back(k);
      rho = u * rho * u.adjoint();
      out.mean_coordinate.push_back(mean(rho));
    }
    return out;
  }

  if (d == 2)
    drive<Eigen::Matrix2cd>(hsys, svals, modes, point, rho0, h, nsub, ntimes, out);
  else
    drive<Matrix>(hsys, svals, modes, point, rho0, h, nsub, ntimes, out);
  return out;
}

QcpiRunner::QcpiRunner(Operator h0, std::optional<SpectralDensity> sd, HarmonicBathSolvent solvent,
                       DensityMatrix rho0, double classical_dt, double dt, std::size_t ntimes,
                       QcpiArgs args)
    : h0_(std::move(h0)), sd_(std::move(sd)), solvent_(std::move(solvent)),
      rho0_(std::move(rho0)), classical_dt_(classical_dt), dt_(dt), ntimes_(ntimes),
      args_(args) {
  check_solvent(solvent_, h0_.rows());
  if (!is_hermitian(h0_, 1e-12 * (1.0 + h0_.cwiseAbs().maxCoeff())))
    throw InvalidArgument("qcpi: H0 must be Hermitian");
  if (rho0_.rows() != h0_.rows() || rho0_.cols() != h0_.cols())
    throw DimensionError("qcpi: rho0 does not match the Hamiltonian");
  substep_count(classical_dt_, dt_);
  if (args_.kmax < 1) throw InvalidArgument("qcpi: kmax must be at least 1");
  s_init_ = initial_coordinate(solvent_, rho0_);
  if (sd_ && args_.residual && ntimes_ > 0) {
    const std::size_t n = std::min(args_.kmax, ntimes_);
    const EtaCoefficients q = compute_eta(*sd_, solvent_.beta, dt_, n, KernelKind::Quantum);
    // The sampled ensemble supplies the real part of the kernel it reproduces.
    const EtaCoefficients cl =
        solvent_.sampling == PhaseSpaceSampling::Wigner
            ? q
            : compute_eta(*sd_, solvent_.beta, dt_, n, KernelKind::Classical);
    // The references carry the full classical response to the mean coordinate,
    // static part included, so the residual acts with the response kernel
    // without the counterterm: Q(t) - i lambda t. The linear term only reaches
    // the diagonal classes.
    const double lambda = solvent_.modes.reorganization_energy();
    EtaCoefficients res = q;
    for (std::size_t j = 0; j < res.q.size(); ++j)
      res.q[j] = Complex(q.q[j].real() - cl.q[j].real(),
                         q.q[j].imag() - lambda * 0.5 * dt_ * static_cast<double>(j));
    residual_eta_ = std::move(res);
  }
}

QcpiRunner::Sample QcpiRunner::run_sample(std::size_t index) const {
  try {
    const PhaseSpacePoint point = sample_point(solvent_, s_init_, index);
    ReferencePropagators ref = calculate_reference_propagators(h0_, solvent_, point, rho0_,
                                                               classical_dt_, dt_, ntimes_);
    Sample s;
    s.eacp = apply_propagator(accumulate(ref.fbU), rho0_, dt_, ntimes_).states;
    if (ntimes_ == 0 && s.eacp.empty()) s.eacp.push_back(rho0_);
    if (!sd_) return s;
    std::vector<InfluenceTerm> terms;
    if (residual_eta_)
      terms.push_back({*residual_eta_, solvent_.svals, std::move(ref.mean_coordinate)});
    s.qcpi = propagate_quapi(ref.fbU, terms, rho0_, ntimes_, args_.kmax, args_.quapi).states;
    return s;
  } catch (const Error& e) {
    throw Error("qcpi: sample " + std::to_string(index) + " failed: " + e.what());
  }
}

QcpiEnsemble QcpiRunner::run() const {
  constexpr std::size_t kBlock = 16;
  const std::size_t n = solvent_.n_points;
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  const Eigen::Index d = h0_.rows();
  const bool want_qcpi = sd_.has_value();

  struct Partial {
    std::vector<DensityMatrix> eacp, qcpi;
  };
  std::vector<Partial> partial(nblocks);
  std::vector<std::exception_ptr> errors(nblocks);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t b = next++; b < nblocks; b = next++) {
      try {
        Partial acc;
        acc.eacp.assign(ntimes_ + 1, DensityMatrix::Zero(d, d));
        if (want_qcpi) acc.qcpi.assign(ntimes_ + 1, DensityMatrix::Zero(d, d));
        for (std::size_t i = b * kBlock; i < std::min(n, (b + 1) * kBlock); ++i) {
          const Sample s = run_sample(i);
          for (std::size_t k = 0; k <= ntimes_; ++k) {
            acc.eacp[k] += s.eacp[k];
            if (want_qcpi) acc.qcpi[k] += s.qcpi[k];
          }
        }
        partial[b] = std::move(acc);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };

  const std::size_t nthreads =
      std::max<std::size_t>(1, std::min(args_.threads == 0 ? default_thread_count() : args_.threads,
                                        nblocks));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  QcpiEnsemble out;
  out.eacp.times = time_grid(dt_, ntimes_);
  out.eacp.states.assign(ntimes_ + 1, DensityMatrix::Zero(d, d));
  if (want_qcpi) {
    out.qcpi.times = out.eacp.times;
    out.qcpi.states.assign(ntimes_ + 1, DensityMatrix::Zero(d, d));
  }
  for (const auto& p : partial)
    for (std::size_t k = 0; k <= ntimes_; ++k) {
      out.eacp.states[k] += p.eacp[k];
      if (want_qcpi) out.qcpi.states[k] += p.qcpi[k];
    }
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k <= ntimes_; ++k) {
    out.eacp.states[k] *= inv;
    if (want_qcpi) out.qcpi.states[k] *= inv;
  }
  return out;
}

Dynamics propagate_eacp(const Operator& h0, const HarmonicBathSolvent& solvent,
                        const DensityMatrix& rho0, double classical_dt, double dt,
                        std::size_t ntimes, std::size_t threads) {
  QcpiArgs args;
  args.threads = threads;
  return QcpiRunner(h0, std::nullopt, solvent, rho0, classical_dt, dt, ntimes, args).run().eacp;
}

Dynamics propagate_qcpi(const Operator& h0, const SpectralDensity& sd,
                        const HarmonicBathSolvent& solvent, const DensityMatrix& rho0,
                        double classical_dt, double dt, std::size_t ntimes,
                        const QcpiArgs& args) {
  return QcpiRunner(h0, sd, solvent, rho0, classical_dt, dt, ntimes, args).run().qcpi;
}

}  // namespace qdyn
