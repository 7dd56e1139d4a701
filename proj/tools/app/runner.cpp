#include "runner.hpp"

#include <qdyn/bath.hpp>
#include <qdyn/error.hpp>
#include <qdyn/empirical.hpp>
#include <qdyn/heom.hpp>
#include <qdyn/pathint.hpp>
#include <qdyn/qcpi.hpp>
#include <qdyn/redfield.hpp>
#include <qdyn/ttm.hpp>

#include "csv.hpp"
#include "plot.hpp"

namespace qdyn::app {

namespace {

std::vector<PathBath> path_baths(const RunConfig& cfg) {
  std::vector<PathBath> out;
  for (const auto& b : cfg.baths) out.push_back({b.sd, b.svec});
  return out;
}

QuapiArgs quapi_args(const MethodConfig& m) {
  QuapiArgs a;
  a.filter_cutoff = m.filter_cutoff;
  if (m.element_budget > 0.0) a.element_budget = m.element_budget;
  return a;
}

}  // namespace

Dynamics simulate(const RunConfig& cfg) {
  const auto& m = cfg.method;
  switch (m.kind) {
    case Method::Bare:
    case Method::Lindblad: {
      BarePropagateRequest req;
      req.hamiltonian = cfg.hamiltonian;
      req.rho0 = cfg.rho0;
      req.dt = cfg.dt;
      req.ntimes = cfg.ntimes;
      req.external_fields = cfg.fields;
      req.jump_ops = m.jump_ops;
      req.integrator = cfg.integrator;
      return propagate_bare(req);
    }
    case Method::Brme: {
      if (!cfg.fields.empty()) throw InvalidArgument("brme: external fields are not supported");
      std::vector<SystemBathCoupling> baths;
      for (const auto& b : cfg.baths) baths.push_back({b.sd, b.coupling});
      return propagate_brme(cfg.hamiltonian, baths, cfg.beta, cfg.rho0, cfg.dt, cfg.ntimes,
                            cfg.integrator);
    }
    case Method::Heom: {
      std::vector<HeomBathBinding> baths;
      for (const auto& b : cfg.baths) baths.push_back({std::get<DrudeLorentzSD>(b.sd), b.coupling});
      HeomArgs a;
      a.num_modes = m.num_modes;
      a.lmax = m.lmax;
      a.scaled = m.scaled;
      a.integrator = cfg.integrator;
      return propagate_heom(cfg.hamiltonian, baths, cfg.beta, cfg.rho0, cfg.dt, cfg.ntimes, a,
                            cfg.fields);
    }
    case Method::Quapi: {
      const auto fbU = calculate_bare_propagators(cfg.hamiltonian, cfg.dt, cfg.ntimes, cfg.fields);
      return propagate_quapi(fbU, path_baths(cfg), cfg.beta, cfg.rho0, cfg.dt, cfg.ntimes, m.memory,
                             quapi_args(m));
    }
    case Method::Ttm: {
      const auto fbU =
          calculate_bare_propagators(cfg.hamiltonian, cfg.dt, std::max(cfg.ntimes, m.rmax));
      AugmentedArgs a;
      a.method = m.blip ? AugmentedMethod::Blip : AugmentedMethod::Quapi;
      a.memory = m.memory;
      a.quapi = quapi_args(m);
      return propagate_ttm(fbU, path_baths(cfg), cfg.beta, cfg.rho0, cfg.dt, cfg.ntimes, m.rmax, a);
    }
    case Method::Eacp:
    case Method::Qcpi: {
      const auto& b = cfg.baths.front();
      HarmonicBathSolvent solvent;
      solvent.beta = cfg.beta;
      solvent.modes = discretize(b.sd, m.n_modes);
      solvent.svals = b.svec;
      solvent.n_points = m.n_points;
      solvent.seed = m.seed;
      solvent.sampling = m.wigner ? PhaseSpaceSampling::Wigner : PhaseSpaceSampling::Boltzmann;
      const double cdt = cfg.dt / static_cast<double>(m.classical_substeps);
      if (m.kind == Method::Eacp)
        return propagate_eacp(cfg.hamiltonian, solvent, cfg.rho0, cdt, cfg.dt, cfg.ntimes, m.threads);
      QcpiArgs a;
      a.kmax = m.kmax;
      a.quapi = quapi_args(m);
      a.threads = m.threads;
      return propagate_qcpi(cfg.hamiltonian, b.sd, solvent, cfg.rho0, cdt, cfg.dt, cfg.ntimes, a);
    }
  }
  throw InvalidArgument("unknown method");
}

std::filesystem::path run(const std::filesystem::path& config, const RunOptions& opts,
                          std::ostream& log) {
  RunConfig cfg = load_config(config);
  if (opts.seed) cfg.method.seed = *opts.seed;
  if (opts.output) cfg.output.csv = *opts.output;
  if (opts.plot && !cfg.output.plot)
    cfg.output.plot = std::filesystem::path(cfg.output.csv).replace_extension(".svg");

  Dynamics dyn = simulate(cfg);
  for (auto& t : dyn.times) t /= cfg.time_unit;
  write_csv(cfg.output.csv, dyn);
  log << "wrote " << cfg.output.csv.string() << " (" << dyn.size() << " rows, method "
      << method_name(cfg.method.kind) << ")\n";
  if (cfg.output.plot) {
    write_population_plot(*cfg.output.plot, dyn, cfg.output.observables,
                          "time (" + cfg.time_label + ")");
    log << "wrote " << cfg.output.plot->string() << "\n";
  }
  return cfg.output.csv;
}

}  // namespace qdyn::app
