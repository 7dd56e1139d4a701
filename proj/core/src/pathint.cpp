#include "qdyn/pathint.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "qdyn/error.hpp"

namespace qdyn {

ForwardBackwardPropagatorSeries calculate_bare_propagators(
    const Operator& hamiltonian, double dt, std::size_t ntimes,
    const std::vector<ExternalField>& external_fields, std::size_t substeps) {
  if (!(dt > 0.0)) throw InvalidArgument("calculate_bare_propagators: dt must be positive");
  if (hamiltonian.rows() != hamiltonian.cols())
    throw DimensionError("calculate_bare_propagators: Hamiltonian must be square");
  for (const auto& f : external_fields)
    if (f.coupling_op.rows() != hamiltonian.rows() || f.coupling_op.cols() != hamiltonian.cols())
      throw DimensionError("calculate_bare_propagators: field coupling dimension mismatch");
  ForwardBackwardPropagatorSeries out;
  out.dt = dt;
  out.steps.reserve(ntimes);
  if (external_fields.empty()) {
    const Matrix k = forward_backward(time_step_propagator(hamiltonian, dt));
    out.steps.assign(ntimes, k);
    return out;
  }
  const std::size_t nsub = substeps == 0 ? 64 : substeps;
  const double h = dt / static_cast<double>(nsub);
  for (std::size_t k = 0; k < ntimes; ++k) {
    Matrix u = Matrix::Identity(hamiltonian.rows(), hamiltonian.cols());
    for (std::size_t j = 0; j < nsub; ++j) {
      const double tm = static_cast<double>(k) * dt + (static_cast<double>(j) + 0.5) * h;
      u = time_step_propagator(hamiltonian_at(hamiltonian, external_fields, tm), h) * u;
    }
    out.steps.push_back(forward_backward(u));
  }
  return out;
}

std::vector<InfluenceTerm> make_influence_terms(const std::vector<PathBath>& baths, double beta,
                                                double dt, std::size_t n_max) {
  std::vector<InfluenceTerm> terms;
  terms.reserve(baths.size());
  for (const auto& b : baths)
    terms.push_back({compute_eta(b.sd, beta, dt, std::max<std::size_t>(1, n_max)), b.svec, {}});
  return terms;
}

namespace {

// Per-term coordinates of every forward-backward point.
struct Coordinates {
  std::vector<Eigen::ArrayXd> splus, sminus, ds;
};

Coordinates coordinates(const std::vector<InfluenceTerm>& terms, Eigen::Index d) {
  Coordinates c;
  for (const auto& t : terms) {
    if (static_cast<Eigen::Index>(t.svec.size()) != d)
      throw DimensionError("path integral: svec has " + std::to_string(t.svec.size()) +
                           " entries for a " + std::to_string(d) + "-level system");
    Eigen::ArrayXd sp(d * d), sm(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) {
        sp(i * d + j) = t.svec[static_cast<std::size_t>(i)];
        sm(i * d + j) = t.svec[static_cast<std::size_t>(j)];
      }
    c.splus.push_back(sp);
    c.sminus.push_back(sm);
    c.ds.push_back(sp - sm);
  }
  return c;
}

Eigen::Index system_dim(const ForwardBackwardPropagatorSeries& fbU, const DensityMatrix* rho0) {
  if (fbU.steps.empty() && rho0 != nullptr) return rho0->rows();
  const Eigen::Index d = fbU.dim();
  if (d * d != fbU.steps.front().rows() || fbU.steps.front().cols() != d * d)
    throw DimensionError("path integral: propagators are not d^2 x d^2");
  if (rho0 != nullptr && (rho0->rows() != d || rho0->cols() != d))
    throw DimensionError("path integral: rho0 does not match the propagator dimension");
  return d;
}

double checked_power(double base, std::size_t exp) { return std::pow(base, static_cast<double>(exp)); }

enum class PairClass { Interior, OneEnd, BothEnds };

Complex eta_for(const EtaCoefficients& eta, std::size_t lag, PairClass cls) {
  switch (cls) {
    case PairClass::Interior:
      return eta.lag(lag, EtaClass::Interior);
    case PairClass::OneEnd:
      return eta.lag(lag, EtaClass::OneEnd);
    case PairClass::BothEnds:
      return eta.lag(lag, EtaClass::BothEnds);
  }
  return 0.0;
}

// Sliding-window propagation shared by propagate_quapi and the augmented builder.
class QuapiEngine {
public:
  using Observer = std::function<void(std::size_t, const Vector&)>;

  QuapiEngine(const ForwardBackwardPropagatorSeries& fbU, const std::vector<InfluenceTerm>& terms,
              Eigen::Index d, std::size_t L, const QuapiArgs& args)
      : fbU_(fbU), terms_(terms), d_(d), D_(d * d), L_(L), args_(args),
        coords_(coordinates(terms, d)) {
    if (L < 1) throw InvalidArgument("propagate_quapi: memory length must be at least 1");
  }

  void run(const Vector& v0, std::size_t ntimes, const Observer& observe) {
    if (fbU_.steps.size() < ntimes)
      throw DimensionError("propagate_quapi: " + std::to_string(fbU_.steps.size()) +
                           " step propagators for " + std::to_string(ntimes) + " steps");
    const std::size_t leff = std::min(L_, std::max<std::size_t>(ntimes, 1));
    const double required = checked_power(static_cast<double>(D_), leff);
    if (required > args_.element_budget)
      throw BudgetError("propagate_quapi: path tensor needs " + std::to_string(required) +
                        " entries, budget is " + std::to_string(args_.element_budget),
                        required, args_.element_budget);
    for (const auto& t : terms_) {
      if (ntimes > 0 && t.eta.N < std::min(L_, ntimes))
        throw InvalidArgument("propagate_quapi: influence coefficients too short for memory");
      if (!t.reference.empty() && t.reference.size() < ntimes + 1)
        throw InvalidArgument("propagate_quapi: reference path shorter than the run");
    }

    observe(0, v0);
    if (ntimes == 0) return;
    a_ = v0.cwiseProduct(diag_factor(0, true));
    for (std::size_t n = 1; n <= ntimes; ++n) step(n, observe);
  }

private:
  // Diagonal factor of point n, plus the reference phases of all pairs (n, k') in
  // the window; `terminal` selects the end-point classes for n.
  Vector diag_factor(std::size_t n, bool terminal) const {
    Eigen::ArrayXcd expo = Eigen::ArrayXcd::Zero(D_);
    for (std::size_t b = 0; b < terms_.size(); ++b) {
      const auto& t = terms_[b];
      const Complex eta = (terminal || n == 0) ? t.eta.diag_end() : t.eta.diag_interior();
      const auto& sp = coords_.splus[b];
      const auto& sm = coords_.sminus[b];
      const auto& ds = coords_.ds[b];
      expo -= ds * (eta * sp - std::conj(eta) * sm);
      if (!t.reference.empty()) {
        double im = eta.imag() * t.reference[n];
        const std::size_t w = std::min(n, L_);
        for (std::size_t m = 1; m <= w; ++m) {
          const std::size_t kp = n - m;
          im += eta_for(t.eta, m, pair_class(kp, terminal)).imag() * t.reference[kp];
        }
        expo += Complex(0.0, 2.0 * im) * ds;
      }
    }
    return expo.exp().matrix();
  }

  static PairClass pair_class(std::size_t kp, bool terminal) {
    if (terminal) return kp == 0 ? PairClass::BothEnds : PairClass::OneEnd;
    return kp == 0 ? PairClass::OneEnd : PairClass::Interior;
  }

  // Factor tables G_j(alpha_n, alpha') for window positions j = 0 (oldest) .. w-1.
  void pair_tables(std::size_t n, std::size_t w, bool terminal, std::vector<Matrix>& g) const {
    g.assign(w, Matrix());
    for (std::size_t j = 0; j < w; ++j) {
      const std::size_t kp = n - w + j;
      const std::size_t lag = n - kp;
      Eigen::ArrayXXcd expo = Eigen::ArrayXXcd::Zero(D_, D_);
      for (std::size_t b = 0; b < terms_.size(); ++b) {
        const Complex eta = eta_for(terms_[b].eta, lag, pair_class(kp, terminal));
        const auto& ds = coords_.ds[b];
        const Eigen::ArrayXcd col =
            eta * coords_.splus[b].cast<Complex>() - std::conj(eta) * coords_.sminus[b].cast<Complex>();
        // expo(a, a') = -ds(a) * col(a')
        expo -= (ds.cast<Complex>().matrix() * col.matrix().transpose()).array();
      }
      g[j] = expo.exp().matrix();
    }
    g[w - 1] = g[w - 1].cwiseProduct(fbU_.steps[n - 1]);
  }

  // Kronecker product of rows `row` of g[first..], oldest slowest.
  void kron_rows(const std::vector<Matrix>& g, std::size_t first, Eigen::Index row,
                 Vector& out) {
    out.resize(1);
    out(0) = 1.0;
    for (std::size_t j = first; j < g.size(); ++j) {
      scratch_ = out;
      out.resize(scratch_.size() * D_);
      for (Eigen::Index a = 0; a < scratch_.size(); ++a)
        out.segment(a * D_, D_) = scratch_(a) * g[j].row(row).transpose();
    }
  }

  void step(std::size_t n, const Observer& observe) {
    const std::size_t w = std::min(n, L_);

    // Terminal output.
    pair_tables(n, w, true, g_);
    const Vector dterm = diag_factor(n, true);
    Vector rho(D_);
    for (Eigen::Index an = 0; an < D_; ++an) {
      kron_rows(g_, 0, an, weights_);
      rho(an) = dterm(an) * (weights_.array() * a_.array()).sum();
    }
    observe(n, rho);

    // Continuation for the next step.
    pair_tables(n, w, false, g_);
    const Vector dcont = diag_factor(n, false);
    Vector next;
    if (w < L_) {
      next.resize(a_.size() * D_);
      for (Eigen::Index an = 0; an < D_; ++an) {
        kron_rows(g_, 0, an, weights_);
        const Complex f = dcont(an);
        for (Eigen::Index x = 0; x < a_.size(); ++x) next(x * D_ + an) = f * a_(x) * weights_(x);
      }
    } else {
      const Eigen::Index rest = a_.size() / D_;
      Eigen::Map<const Matrix> amap(a_.data(), rest, D_);
      const Matrix bm = amap * g_[0].transpose();
      next.resize(a_.size());
      Eigen::Map<Matrix> nmap(next.data(), D_, rest);
      for (Eigen::Index an = 0; an < D_; ++an) {
        kron_rows(g_, 1, an, weights_);
        const Complex f = dcont(an);
        for (Eigen::Index r = 0; r < rest; ++r) nmap(an, r) = f * bm(r, an) * weights_(r);
      }
    }
    if (args_.filter_cutoff > 0.0)
      for (Eigen::Index i = 0; i < next.size(); ++i)
        if (std::abs(next(i)) < args_.filter_cutoff) next(i) = 0.0;
    a_.swap(next);
  }

  const ForwardBackwardPropagatorSeries& fbU_;
  const std::vector<InfluenceTerm>& terms_;
  Eigen::Index d_, D_;
  std::size_t L_;
  QuapiArgs args_;
  Coordinates coords_;
  Vector a_, weights_, scratch_;
  std::vector<Matrix> g_;
};

}  // namespace

Dynamics propagate_quapi(const ForwardBackwardPropagatorSeries& fbU,
                         const std::vector<InfluenceTerm>& terms, const DensityMatrix& rho0,
                         std::size_t ntimes, std::size_t L, const QuapiArgs& args) {
  const Eigen::Index d = system_dim(fbU, &rho0);
  QuapiEngine engine(fbU, terms, d, L, args);
  Dynamics out;
  out.times = time_grid(fbU.dt, ntimes);
  out.states.resize(ntimes + 1);
  engine.run(vectorize(rho0), ntimes,
             [&](std::size_t n, const Vector& v) { out.states[n] = unvectorize(v, d); });
  out.states[0] = rho0;
  return out;
}

Dynamics propagate_quapi(const ForwardBackwardPropagatorSeries& fbU,
                         const std::vector<PathBath>& baths, double beta,
                         const DensityMatrix& rho0, double dt, std::size_t ntimes, std::size_t L,
                         const QuapiArgs& args) {
  if (L < 1) throw InvalidArgument("propagate_quapi: memory length must be at least 1");
  if (std::abs(fbU.dt - dt) > 1e-12 * dt)
    throw InvalidArgument("propagate_quapi: dt differs from the propagator time step");
  const std::size_t leff = std::min(L, std::max<std::size_t>(ntimes, 1));
  const Eigen::Index d = system_dim(fbU, &rho0);
  const double required = checked_power(static_cast<double>(d * d), leff);
  if (required > args.element_budget)
    throw BudgetError("propagate_quapi: path tensor needs " + std::to_string(required) +
                      " entries, budget is " + std::to_string(args.element_budget),
                      required, args.element_budget);
  const auto terms = make_influence_terms(baths, beta, dt, leff);
  return propagate_quapi(fbU, terms, rho0, ntimes, L, args);
}

namespace {

AugmentedPropagatorSeries augmented_quapi(const ForwardBackwardPropagatorSeries& fbU,
                                          const std::vector<InfluenceTerm>& terms, Eigen::Index d,
                                          std::size_t N, const AugmentedArgs& args) {
  const Eigen::Index D = d * d;
  const std::size_t L = args.memory == 0 ? std::max<std::size_t>(N, 1) : args.memory;
  AugmentedPropagatorSeries out;
  out.dt = fbU.dt;
  out.maps.assign(N + 1, Matrix::Zero(D, D));
  QuapiEngine engine(fbU, terms, d, L, args.quapi);
  for (Eigen::Index a0 = 0; a0 < D; ++a0) {
    Vector v0 = Vector::Zero(D);
    v0(a0) = 1.0;
    engine.run(v0, N, [&](std::size_t n, const Vector& v) { out.maps[n].col(a0) = v; });
  }
  out.maps[0] = Matrix::Identity(D, D);
  return out;
}

class BlipSum {
public:
  BlipSum(const ForwardBackwardPropagatorSeries& fbU, const std::vector<InfluenceTerm>& terms,
          Eigen::Index d, std::size_t max_blips)
      : fbU_(fbU), terms_(terms), d_(d), D_(d * d), max_blips_(max_blips),
        coords_(coordinates(terms, d)) {}

  Matrix map(std::size_t n) {
    n_ = n;
    result_ = Matrix::Zero(D_, D_);
    blips_.clear();
    descend(n, Matrix::Identity(D_, D_), true);
    return result_;
  }

private:
  bool is_blip(Eigen::Index a) const { return a / d_ != a % d_; }

  // Factors on point k from its pairs with the blips already placed at later points.
  Eigen::ArrayXcd later_factors(std::size_t k) const {
    Eigen::ArrayXcd expo = Eigen::ArrayXcd::Zero(D_);
    for (std::size_t b = 0; b < terms_.size(); ++b) {
      const auto& t = terms_[b];
      const auto sp = coords_.splus[b].cast<Complex>();
      const auto sm = coords_.sminus[b].cast<Complex>();
      for (const auto& [p, a] : blips_) {
        const Complex eta = t.eta.at(p, k, n_);
        expo -= coords_.ds[b](a) * (eta * sp - std::conj(eta) * sm);
        if (!t.reference.empty())
          expo += Complex(0.0, 2.0 * coords_.ds[b](a) * eta.imag() * t.reference[k]);
      }
    }
    return expo.exp();
  }

  Complex own_factor(std::size_t k, Eigen::Index a) const {
    Complex expo = 0.0;
    for (std::size_t b = 0; b < terms_.size(); ++b) {
      const auto& t = terms_[b];
      const Complex eta = t.eta.at(k, k, n_);
      const double ds = coords_.ds[b](a);
      expo -= ds * (eta * coords_.splus[b](a) - std::conj(eta) * coords_.sminus[b](a));
      if (!t.reference.empty()) expo += Complex(0.0, 2.0 * ds * eta.imag() * t.reference[k]);
    }
    return std::exp(expo);
  }

  // m holds the sum over points k+1..n as a map from alpha_k+1 (columns, before
  // the step propagator) to alpha_n (rows); at the top it is the identity.
  void descend(std::size_t k, const Matrix& m, bool top) {
    const Matrix mk = top ? m : Matrix(m * fbU_.steps[k]);
    const Eigen::ArrayXcd later = later_factors(k);

    // Sojourn branch: all diagonal points at once.
    {
      Matrix next = mk;
      for (Eigen::Index a = 0; a < D_; ++a) {
        if (is_blip(a))
          next.col(a).setZero();
        else
          next.col(a) *= later(a);
      }
      finish(k, next);
    }
    if (blips_.size() >= max_blips_) return;
    for (Eigen::Index a = 0; a < D_; ++a) {
      if (!is_blip(a)) continue;
      Matrix next = Matrix::Zero(D_, D_);
      next.col(a) = mk.col(a) * (later(a) * own_factor(k, a));
      blips_.emplace_back(k, a);
      finish(k, next);
      blips_.pop_back();
    }
  }

  void finish(std::size_t k, const Matrix& m) {
    if (k == 0)
      result_ += m;
    else
      descend(k - 1, m, false);
  }

  const ForwardBackwardPropagatorSeries& fbU_;
  const std::vector<InfluenceTerm>& terms_;
  Eigen::Index d_, D_;
  std::size_t max_blips_;
  Coordinates coords_;
  std::size_t n_ = 0;
  Matrix result_;
  std::vector<std::pair<std::size_t, Eigen::Index>> blips_;
};

}  // namespace

AugmentedPropagatorSeries build_augmented_propagator(const ForwardBackwardPropagatorSeries& fbU,
                                                     const std::vector<InfluenceTerm>& terms,
                                                     std::size_t N, const AugmentedArgs& args) {
  const Eigen::Index d = system_dim(fbU, nullptr);
  const Eigen::Index D = d * d;
  if (fbU.steps.size() < N)
    throw DimensionError("build_augmented_propagator: too few step propagators");
  for (const auto& t : terms)
    if (N > 0 && t.eta.N < N && (args.method == AugmentedMethod::Blip || args.memory == 0))
      throw InvalidArgument("build_augmented_propagator: influence coefficients too short");

  if (args.method == AugmentedMethod::Quapi) {
    const std::size_t L = args.memory == 0 ? N : std::min(args.memory, N);
    const double required = checked_power(static_cast<double>(D), std::max<std::size_t>(L, 1));
    if (required > args.quapi.element_budget)
      throw BudgetError("build_augmented_propagator: path tensor needs " +
                            std::to_string(required) + " entries",
                        required, args.quapi.element_budget);
    return augmented_quapi(fbU, terms, d, N, args);
  }

  // Nodes of the blip tree over all path lengths.
  const double branches = static_cast<double>(D - d + 1);
  const double required =
      branches > 1.0 ? D * D * (checked_power(branches, N + 2) - 1.0) / (branches - 1.0)
                     : static_cast<double>(D * D) * static_cast<double>(N + 2);
  if (required > args.quapi.element_budget)
    throw BudgetError("build_augmented_propagator: blip enumeration needs " +
                          std::to_string(required) + " entries",
                      required, args.quapi.element_budget);
  AugmentedPropagatorSeries out;
  out.dt = fbU.dt;
  out.maps.reserve(N + 1);
  out.maps.push_back(Matrix::Identity(D, D));
  BlipSum sum(fbU, terms, d, args.max_blips);
  for (std::size_t n = 1; n <= N; ++n) out.maps.push_back(sum.map(n));
  return out;
}

AugmentedPropagatorSeries build_augmented_propagator(const ForwardBackwardPropagatorSeries& fbU,
                                                     const std::vector<PathBath>& baths,
                                                     double beta, double dt, std::size_t N,
                                                     const AugmentedArgs& args) {
  if (std::abs(fbU.dt - dt) > 1e-12 * dt)
    throw InvalidArgument("build_augmented_propagator: dt differs from the propagator step");
  const std::size_t n_eta =
      (args.method == AugmentedMethod::Quapi && args.memory != 0) ? std::min(args.memory, N) : N;
  return build_augmented_propagator(fbU, make_influence_terms(baths, beta, dt, n_eta), N, args);
}

DensityMatrix brute_force_path_sum(const ForwardBackwardPropagatorSeries& fbU,
                                   const std::vector<InfluenceTerm>& terms,
                                   const DensityMatrix& rho0, std::size_t N,
                                   double element_budget) {
  const Eigen::Index d = system_dim(fbU, &rho0);
  const Eigen::Index D = d * d;
  if (N == 0) return rho0;
  const double required = checked_power(static_cast<double>(D), N + 1);
  if (required > element_budget)
    throw BudgetError("brute_force_path_sum: " + std::to_string(required) + " paths exceed budget",
                      required, element_budget);
  if (fbU.steps.size() < N) throw DimensionError("brute_force_path_sum: too few propagators");
  for (const auto& t : terms)
    if (t.eta.N < N) throw InvalidArgument("brute_force_path_sum: eta table shorter than N");

  const Coordinates c = coordinates(terms, d);
  // exponent(k, k')(a, a') of the pair factor.
  std::vector<std::vector<Eigen::ArrayXXcd>> expo(N + 1);
  for (std::size_t k = 0; k <= N; ++k)
    for (std::size_t kp = 0; kp <= k; ++kp) {
      Eigen::ArrayXXcd e = Eigen::ArrayXXcd::Zero(D, D);
      for (std::size_t b = 0; b < terms.size(); ++b) {
        const Complex eta = terms[b].eta.at(k, kp, N);
        const double ref = terms[b].reference.empty() ? 0.0 : terms[b].reference[kp];
        for (Eigen::Index a = 0; a < D; ++a)
          for (Eigen::Index ap = 0; ap < D; ++ap)
            e(a, ap) += -c.ds[b](a) * (eta * c.splus[b](ap) - std::conj(eta) * c.sminus[b](ap)) +
                        Complex(0.0, 2.0 * c.ds[b](a) * eta.imag() * ref);
      }
      expo[k].push_back(e);
    }

  const Vector v0 = vectorize(rho0);
  Vector out = Vector::Zero(D);
  std::vector<Eigen::Index> path(N + 1, 0);
  const auto total = static_cast<std::size_t>(required);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t k = 0; k <= N; ++k) {
      path[k] = static_cast<Eigen::Index>(rem % static_cast<std::size_t>(D));
      rem /= static_cast<std::size_t>(D);
    }
    Complex amp = v0(path[0]);
    if (amp == 0.0) continue;
    for (std::size_t k = 0; k < N; ++k) amp *= fbU.steps[k](path[k + 1], path[k]);
    Complex e = 0.0;
    for (std::size_t k = 0; k <= N; ++k)
      for (std::size_t kp = 0; kp <= k; ++kp) e += expo[k][kp](path[k], path[kp]);
    out(path[N]) += amp * std::exp(e);
  }
  return unvectorize(out, d);
}

DensityMatrix brute_force_path_sum(const ForwardBackwardPropagatorSeries& fbU,
                                   const EtaCoefficients& eta, const DensityMatrix& rho0,
                                   std::size_t N, const std::vector<double>& svec,
                                   double element_budget) {
  return brute_force_path_sum(fbU, std::vector<InfluenceTerm>{{eta, svec, {}}}, rho0, N,
                              element_budget);
}

}  // namespace qdyn
