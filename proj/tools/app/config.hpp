#pragma once

// Run description read from a YAML file.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <qdyn/core.hpp>
#include <qdyn/integrator.hpp>
#include <qdyn/spectral_density.hpp>

namespace qdyn::app {

/// A config problem, already formatted as "file:line:col: message".
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Method { Bare, Lindblad, Brme, Heom, Quapi, Ttm, Eacp, Qcpi };

std::string method_name(Method m);

struct BathConfig {
  SpectralDensity sd;
  Operator coupling;
  std::vector<double> svec;
};

struct MethodConfig {
  Method kind = Method::Bare;
  std::vector<Operator> jump_ops;
  // heom
  std::size_t num_modes = 2;
  std::size_t lmax = 3;
  bool scaled = true;
  // quapi / ttm
  std::size_t memory = 0;
  double filter_cutoff = 0.0;
  double element_budget = 0.0;
  std::size_t rmax = 0;
  bool blip = false;
  // eacp / qcpi
  std::size_t kmax = 3;
  std::size_t n_points = 1000;
  std::size_t n_modes = 100;
  std::size_t classical_substeps = 100;
  std::uint64_t seed = 0;
  bool wigner = false;
  std::size_t threads = 0;
};

struct OutputConfig {
  std::filesystem::path csv;
  std::optional<std::filesystem::path> plot;
  // Diagonal elements drawn in the plot; empty means all.
  std::vector<std::size_t> observables;
};

struct RunConfig {
  std::filesystem::path source;
  // Scale from config energies/times to internal units.
  double energy_unit = 1.0;
  double time_unit = 1.0;
  std::string time_label = "au";

  Operator hamiltonian;
  std::vector<ExternalField> fields;
  DensityMatrix rho0;
  std::vector<BathConfig> baths;
  MethodConfig method;
  double dt = 0.0;
  std::size_t ntimes = 0;
  double beta = 0.0;
  IntegratorConfig integrator;
  OutputConfig output;
};

RunConfig load_config(const std::filesystem::path& path);

/// Parses YAML text; `source` names it in diagnostics and anchors relative paths.
RunConfig parse_config(const std::string& text, const std::filesystem::path& source);

}  // namespace qdyn::app
