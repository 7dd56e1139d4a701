#pragma once

// Harmonic-bath spectral densities J(w). The state separation delta_s is folded
// into J, so the system coordinate values passed to the path-integral methods
// are the bare eigenvalues of the coupling operator.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace qdyn {

/// J(w) = (2 pi / ds^2) xi w^n / wc^(n-1) exp(-w / wc).
struct ExponentialCutoffSD {
  double xi = 0.0;
  double omega_c = 1.0;
  double n = 1.0;
  double delta_s = 2.0;
};

/// J(w) = (2 lambda / ds^2) gamma w / (w^2 + gamma^2).
struct DrudeLorentzSD {
  double lambda = 0.0;
  double gamma = 1.0;
  double delta_s = 2.0;
};

struct TabulatedSD {
  enum class Mode { J, JOverOmega };

  std::vector<double> omega_grid;
  std::vector<double> values;
  Mode mode = Mode::J;
  double delta_s = 1.0;

  TabulatedSD() = default;
  TabulatedSD(std::vector<double> omega, std::vector<double> vals, Mode m = Mode::J,
              double ds = 1.0);

  /// Two-column text; '#' starts a comment. A line "# mode: j_over_omega" (or
  /// "# mode: j", the default) selects what the second column holds.
  static TabulatedSD load(const std::filesystem::path& path, double ds = 1.0);
};

using SpectralDensity = std::variant<ExponentialCutoffSD, DrudeLorentzSD, TabulatedSD>;

double evaluate(const SpectralDensity& sd, double omega);
double delta_s(const SpectralDensity& sd);

/// (1/pi) * integral of J(w)/w over (0, inf).
double reorganization_energy(const SpectralDensity& sd);

/// Frequency beyond which J is treated as negligible by the quadratures.
double frequency_cutoff(const SpectralDensity& sd);

/// Characteristic frequency used to size quadrature panels.
double characteristic_frequency(const SpectralDensity& sd);

/// Location and value of the maximum of J.
struct SpectralPeak {
  double omega;
  double value;
};
SpectralPeak find_peak(const SpectralDensity& sd);

std::string describe(const SpectralDensity& sd);

}  // namespace qdyn
