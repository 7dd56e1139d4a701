#include "qdyn/spectral_density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qdyn/error.hpp"

namespace qdyn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double tabulated_j(const TabulatedSD& t, std::size_t i) {
  return t.mode == TabulatedSD::Mode::J ? t.values[i] : t.values[i] * t.omega_grid[i];
}

}  // namespace

TabulatedSD::TabulatedSD(std::vector<double> omega, std::vector<double> vals, Mode m, double ds)
    : omega_grid(std::move(omega)), values(std::move(vals)), mode(m), delta_s(ds) {
  if (omega_grid.size() != values.size())
    throw InvalidArgument("TabulatedSD: frequency and value columns differ in length");
  if (omega_grid.size() < 2) throw InvalidArgument("TabulatedSD: need at least two points");
  if (!(omega_grid.front() > 0.0))
    throw InvalidArgument("TabulatedSD: frequencies must be positive");
  for (std::size_t i = 1; i < omega_grid.size(); ++i)
    if (!(omega_grid[i] > omega_grid[i - 1]))
      throw InvalidArgument("TabulatedSD: frequencies must be strictly ascending");
  if (!(delta_s > 0.0)) throw InvalidArgument("TabulatedSD: delta_s must be positive");
}

TabulatedSD TabulatedSD::load(const std::filesystem::path& path, double ds) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("TabulatedSD: cannot open " + path.string());
  Mode mode = Mode::J;
  std::vector<double> w, v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream cs(line.substr(first + 1));
      std::string key, val;
      cs >> key >> val;
      if (key == "mode:") {
        if (val == "j")
          mode = Mode::J;
        else if (val == "j_over_omega")
          mode = Mode::JOverOmega;
        else
          throw InvalidArgument(path.string() + ":" + std::to_string(lineno) +
                                ": unknown mode '" + val + "'");
      }
      continue;
    }
    std::istringstream ls(line);
    double a = 0.0, b = 0.0;
    if (!(ls >> a >> b))
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) +
                            ": expected two numeric columns");
    w.push_back(a);
    v.push_back(b);
  }
  return TabulatedSD(std::move(w), std::move(v), mode, ds);
}

double evaluate(const SpectralDensity& sd, double omega) {
  return std::visit(
      overloaded{
          [omega](const ExponentialCutoffSD& s) {
            if (omega <= 0.0) return 0.0;
            return 2.0 * std::numbers::pi / (s.delta_s * s.delta_s) * s.xi *
                   std::pow(omega, s.n) / std::pow(s.omega_c, s.n - 1.0) *
                   std::exp(-omega / s.omega_c);
          },
          [omega](const DrudeLorentzSD& s) {
            if (omega <= 0.0) return 0.0;
            return 2.0 * s.lambda / (s.delta_s * s.delta_s) * s.gamma * omega /
                   (omega * omega + s.gamma * s.gamma);
          },
          [omega](const TabulatedSD& s) {
            const auto& g = s.omega_grid;
            if (omega < g.front() || omega > g.back()) return 0.0;
            auto it = std::upper_bound(g.begin(), g.end(), omega);
            std::size_t hi = static_cast<std::size_t>(it - g.begin());
            if (hi >= g.size()) return tabulated_j(s, g.size() - 1);
            // Interpolate the column as given, then convert.
            const std::size_t lo = hi - 1;
            const double f = (omega - g[lo]) / (g[hi] - g[lo]);
            const double v = (1.0 - f) * s.values[lo] + f * s.values[hi];
            return s.mode == TabulatedSD::Mode::J ? v : v * omega;
          },
      },
      sd);
}

double delta_s(const SpectralDensity& sd) {
  return std::visit([](const auto& s) { return s.delta_s; }, sd);
}

double reorganization_energy(const SpectralDensity& sd) {
  return std::visit(
      overloaded{
          [](const ExponentialCutoffSD& s) {
            return 2.0 * s.xi * s.omega_c * std::tgamma(s.n) / (s.delta_s * s.delta_s);
          },
          [](const DrudeLorentzSD& s) { return s.lambda / (s.delta_s * s.delta_s); },
          [](const TabulatedSD& s) {
            double acc = 0.0;
            for (std::size_t i = 1; i < s.omega_grid.size(); ++i) {
              const double f0 = tabulated_j(s, i - 1) / s.omega_grid[i - 1];
              const double f1 = tabulated_j(s, i) / s.omega_grid[i];
              acc += 0.5 * (f0 + f1) * (s.omega_grid[i] - s.omega_grid[i - 1]);
            }
            return acc / std::numbers::pi;
          },
      },
      sd);
}

double frequency_cutoff(const SpectralDensity& sd) {
  return std::visit(overloaded{
                        [](const ExponentialCutoffSD& s) { return s.omega_c * (s.n + 60.0); },
                        [](const DrudeLorentzSD& s) { return 1000.0 * s.gamma; },
                        [](const TabulatedSD& s) { return s.omega_grid.back(); },
                    },
                    sd);
}

SpectralPeak find_peak(const SpectralDensity& sd) {
  return std::visit(
      overloaded{
          [&](const ExponentialCutoffSD& s) {
            const double w = s.n * s.omega_c;
            return SpectralPeak{w, evaluate(sd, w)};
          },
          [](const DrudeLorentzSD& s) {
            return SpectralPeak{s.gamma, s.lambda / (s.delta_s * s.delta_s)};
          },
          [](const TabulatedSD& s) {
            SpectralPeak p{s.omega_grid.front(), tabulated_j(s, 0)};
            for (std::size_t i = 1; i < s.omega_grid.size(); ++i)
              if (tabulated_j(s, i) > p.value) p = {s.omega_grid[i], tabulated_j(s, i)};
            return p;
          },
      },
      sd);
}

double characteristic_frequency(const SpectralDensity& sd) {
  return std::visit(overloaded{
                        [](const ExponentialCutoffSD& s) { return s.omega_c; },
                        [](const DrudeLorentzSD& s) { return s.gamma; },
                        [&](const TabulatedSD&) { return find_peak(sd).omega; },
                    },
                    sd);
}

std::string describe(const SpectralDensity& sd) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const ExponentialCutoffSD& s) {
                   os << "ExponentialCutoff(xi=" << s.xi << ", omega_c=" << s.omega_c
                      << ", n=" << s.n << ", delta_s=" << s.delta_s << ")";
                 },
                 [&](const DrudeLorentzSD& s) {
                   os << "DrudeLorentz(lambda=" << s.lambda << ", gamma=" << s.gamma
                      << ", delta_s=" << s.delta_s << ")";
                 },
                 [&](const TabulatedSD& s) {
                   os << "Tabulated(" << s.omega_grid.size() << " points)";
                 },
             },
             sd);
  return os.str();
}

}  // namespace qdyn
