#include "qdyn/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdyn/error.hpp"

namespace qdyn {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants.
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

double rms_norm(const Vector& v, const Vector& y, const Vector& ynew, const IntegratorConfig& c) {
  const Eigen::Index n = v.size();
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = c.atol + c.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
    acc += std::norm(v[i]) / (sc * sc);
  }
  return std::sqrt(acc / static_cast<double>(n));
}

double scaled_norm(const Vector& v, const Vector& y, const IntegratorConfig& c) {
  return rms_norm(v, y, y, c);
}

class DormandPrince {
public:
  DormandPrince(const VectorRhs& rhs, Eigen::Index n, const IntegratorConfig& cfg)
      : rhs_(rhs), cfg_(cfg), k1_(n), k2_(n), k3_(n), k4_(n), k5_(n), k6_(n), k7_(n), tmp_(n),
        ynew_(n) {}

  void eval(double t, const Vector& y, Vector& out) {
    rhs_(t, y, out);
    ++stats.rhs_calls;
  }

  // One trial step from (t, y) with k1_ = f(t, y). Leaves the candidate in ynew_ and
  // f(t+h, ynew) in k7_.
  void trial(double t, const Vector& y, double h) {
    tmp_ = y + h * a21 * k1_;
    eval(t + c2 * h, tmp_, k2_);
    tmp_ = y + h * (a31 * k1_ + a32 * k2_);
    eval(t + c3 * h, tmp_, k3_);
    tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    eval(t + c4 * h, tmp_, k4_);
    tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    eval(t + c5 * h, tmp_, k5_);
    tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    eval(t + h, tmp_, k6_);
    ynew_ = y + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
    eval(t + h, ynew_, k7_);
  }

  double error(const Vector& y, double h) {
    tmp_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    return rms_norm(tmp_, y, ynew_, cfg_);
  }

  double initial_step(double t, const Vector& y, double t_end) {
    const double d0 = scaled_norm(y, y, cfg_);
    const double d1 = scaled_norm(k1_, y, cfg_);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min({h0, cfg_.max_step, t_end - t});
    tmp_ = y + h0 * k1_;
    eval(t + h0, tmp_, k2_);
    k3_ = k2_ - k1_;
    const double d2 = scaled_norm(k3_, y, cfg_) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, cfg_.max_step});
  }

  const VectorRhs& rhs_;
  const IntegratorConfig& cfg_;
  Vector k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, ynew_;
  IntegratorStats stats;
};

bool all_finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  return true;
}

}  // namespace

IntegratorStats integrate(const VectorRhs& rhs, const Vector& y0, std::span<const double> t_grid,
                          const IntegratorConfig& config, const GridObserver& observer) {
  if (!(config.rtol > 0.0) || !(config.atol > 0.0))
    throw InvalidArgument("integrate: tolerances must be positive");
  if (config.fixed_step && !(config.initial_step > 0.0))
    throw InvalidArgument("integrate: fixed_step mode needs a positive initial_step");
  if (t_grid.empty()) return {};
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw InvalidArgument("integrate: time grid must be strictly increasing");

  DormandPrince dp(rhs, y0.size(), config);
  Vector y = y0;
  double t = t_grid[0];
  observer(0, y);
  if (t_grid.size() == 1) return dp.stats;

  dp.eval(t, y, dp.k1_);
  if (!all_finite(dp.k1_)) throw IntegratorError("integrate: non-finite right-hand side", t);

  double h = config.initial_step > 0.0 ? config.initial_step
                                       : dp.initial_step(t, y, t_grid.back());
  h = std::min(h, config.max_step);
  double facold = 1e-4;
  bool last_rejected = false;
  std::size_t nsteps = 0;

  for (std::size_t gi = 1; gi < t_grid.size(); ++gi) {
    const double target = t_grid[gi];
    while (t < target) {
      if (config.max_steps != 0 && nsteps >= config.max_steps)
        throw IntegratorError("integrate: maximum number of steps exceeded", t);
      bool landing = false;
      double step = h;
      // Stretch by a small margin so a nearly-landing step does not leave a sliver.
      if (t + 1.01 * step >= target) {
        step = target - t;
        landing = true;
      }
      if (step < 1e-14 * std::max(1.0, std::abs(t)))
        throw IntegratorError("integrate: step size underflow", t);

      dp.trial(t, y, step);
      ++nsteps;

      if (config.fixed_step) {
        if (!all_finite(dp.ynew_)) throw IntegratorError("integrate: non-finite state", t);
        t = landing ? target : t + step;
        y.swap(dp.ynew_);
        dp.k1_.swap(dp.k7_);
        ++dp.stats.accepted;
        continue;
      }

      const double err = dp.error(y, step);
      if (!std::isfinite(err)) throw IntegratorError("integrate: non-finite right-hand side", t);

      const double fac11 = std::pow(err, kExpo);
      if (err <= 1.0) {
        double fac = fac11 / std::pow(facold, kBeta);
        fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
        double hnew = step / fac;
        facold = std::max(err, 1e-4);
        if (last_rejected) hnew = std::min(hnew, step);
        last_rejected = false;
        t = landing ? target : t + step;
        y.swap(dp.ynew_);
        dp.k1_.swap(dp.k7_);
        ++dp.stats.accepted;
        // A landing step may be artificially short; do not let it shrink the next one.
        h = std::min(landing ? std::max(hnew, h) : hnew, config.max_step);
      } else {
        h = step / std::min(1.0 / kFacMin, fac11 / kSafety);
        last_rejected = true;
        ++dp.stats.rejected;
      }
    }
    observer(gi, y);
  }
  return dp.stats;
}

std::vector<Matrix> integrate(const MatrixRhs& rhs, const Matrix& y0,
                              std::span<const double> t_grid, const IntegratorConfig& config) {
  const Eigen::Index rows = y0.rows();
  const Eigen::Index cols = y0.cols();
  VectorRhs vrhs = [&](double t, const Vector& y, Vector& dy) {
    const Matrix m = rhs(t, Eigen::Map<const Matrix>(y.data(), rows, cols));
    dy = Eigen::Map<const Vector>(m.data(), m.size());
  };
  std::vector<Matrix> out(t_grid.size());
  integrate(vrhs, Eigen::Map<const Vector>(y0.data(), y0.size()), t_grid, config,
            [&](std::size_t i, const Vector& y) {
              out[i] = Eigen::Map<const Matrix>(y.data(), rows, cols);
            });
  return out;
}

}  // namespace qdyn
