#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include <qdyn/error.hpp>

namespace qdyn::app {

std::string method_name(Method m) {
  switch (m) {
    case Method::Bare: return "bare";
    case Method::Lindblad: return "lindblad";
    case Method::Brme: return "brme";
    case Method::Heom: return "heom";
    case Method::Quapi: return "quapi";
    case Method::Ttm: return "ttm";
    case Method::Eacp: return "eacp";
    case Method::Qcpi: return "qcpi";
  }
  return "?";
}

namespace {

class Parser {
public:
  explicit Parser(std::filesystem::path source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    std::ostringstream os;
    os << source_.string();
    if (at.IsDefined() && at.Mark().line >= 0)
      os << ':' << at.Mark().line + 1 << ':' << at.Mark().column + 1;
    os << ": " << msg;
    throw ConfigError(os.str());
  }

  YAML::Node require(const YAML::Node& map, const std::string& key, const std::string& where) const {
    const YAML::Node v = map[key];
    if (!v.IsDefined() || v.IsNull()) fail(map, where + ": missing required key '" + key + "'");
    return v;
  }

  void allow_only(const YAML::Node& map, const std::string& where,
                  std::initializer_list<const char*> keys) const {
    if (!map.IsMap()) fail(map, where + ": expected a mapping");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : map) {
      const auto k = kv.first.as<std::string>();
      if (!allowed.count(k)) fail(kv.first, where + ": unknown key '" + k + "'");
    }
  }

  double number(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) fail(n, what + ": expected a number");
    try {
      const double v = n.as<double>();
      if (!std::isfinite(v)) fail(n, what + ": must be finite");
      return v;
    } catch (const YAML::BadConversion&) {
      fail(n, what + ": expected a number, got '" + n.Scalar() + "'");
    }
  }

  double positive(const YAML::Node& n, const std::string& what) const {
    const double v = number(n, what);
    if (!(v > 0.0)) fail(n, what + ": must be positive");
    return v;
  }

  std::size_t count(const YAML::Node& n, const std::string& what) const {
    const double v = number(n, what);
    if (v < 0.0 || v != std::floor(v) || v > 1e15) fail(n, what + ": expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  bool flag(const YAML::Node& n, const std::string& what) const {
    try {
      return n.as<bool>();
    } catch (const YAML::BadConversion&) {
      fail(n, what + ": expected true or false");
    }
  }

  std::string text(const YAML::Node& n, const std::string& what) const {
    if (!n.IsScalar()) fail(n, what + ": expected a string");
    return n.Scalar();
  }

  std::vector<double> numbers(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) fail(n, what + ": expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i)
      out.push_back(number(n[i], what + "[" + std::to_string(i) + "]"));
    return out;
  }

  // Rows of entries; an entry is a number or a [re, im] pair.
  Matrix matrix(const YAML::Node& n, const std::string& what, double scale = 1.0) const {
    if (!n.IsSequence() || n.size() == 0) fail(n, what + ": expected a non-empty list of rows");
    const auto rows = static_cast<Eigen::Index>(n.size());
    Matrix m(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const YAML::Node row = n[static_cast<std::size_t>(i)];
      if (!row.IsSequence() || static_cast<Eigen::Index>(row.size()) != rows)
        fail(row.IsDefined() ? row : n,
             what + ": row " + std::to_string(i) + " must have " + std::to_string(rows) + " entries");
      for (Eigen::Index j = 0; j < rows; ++j) {
        const YAML::Node e = row[static_cast<std::size_t>(j)];
        const std::string at = what + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
        if (e.IsSequence()) {
          if (e.size() != 2) fail(e, at + ": complex entries are written [re, im]");
          m(i, j) = Complex(number(e[0], at), number(e[1], at)) * scale;
        } else {
          m(i, j) = Complex(number(e, at), 0.0) * scale;
        }
      }
    }
    return m;
  }

  RunConfig parse(const YAML::Node& root) {
    if (!root.IsMap()) fail(root, "top level must be a mapping");
    allow_only(root, "config",
               {"units", "system", "initial_state", "baths", "method", "simulation", "integrator",
                "output"});
    RunConfig cfg;
    cfg.source = source_;
    units(root, cfg);
    system(require(root, "system", "config"), cfg);
    const auto d = cfg.hamiltonian.rows();
    initial_state(require(root, "initial_state", "config"), cfg);
    if (cfg.rho0.rows() != d)
      fail(root["initial_state"], "initial_state: dimension " + std::to_string(cfg.rho0.rows()) +
                                      " does not match the Hamiltonian (" + std::to_string(d) + ")");
    simulation(require(root, "simulation", "config"), cfg);
    if (root["baths"].IsDefined()) baths(root["baths"], cfg);
    method(require(root, "method", "config"), cfg);
    if (root["integrator"].IsDefined()) integrator(root["integrator"], cfg);
    output(root["output"], cfg);
    validate(root, cfg);
    return cfg;
  }

private:
  void units(const YAML::Node& root, RunConfig& cfg) const {
    const YAML::Node u = root["units"];
    if (!u.IsDefined()) return;
    const std::string tag = text(u, "units");
    if (tag == "au") return;
    if (tag == "cm^-1,fs") {
      cfg.energy_unit = units::invcm2au;
      cfg.time_unit = 1.0 / units::au2fs;
      cfg.time_label = "fs";
      return;
    }
    fail(u, "units: expected \"au\" or \"cm^-1,fs\", got '" + tag + "'");
  }

  void system(const YAML::Node& s, RunConfig& cfg) const {
    allow_only(s, "system", {"hamiltonian", "tls", "nn", "fields"});
    const int given = s["hamiltonian"].IsDefined() + s["tls"].IsDefined() + s["nn"].IsDefined();
    if (given != 1) fail(s, "system: give exactly one of 'hamiltonian', 'tls', 'nn'");
    const double eu = cfg.energy_unit;
    if (s["hamiltonian"].IsDefined()) {
      cfg.hamiltonian = matrix(s["hamiltonian"], "system.hamiltonian", eu);
    } else if (s["tls"].IsDefined()) {
      const YAML::Node t = s["tls"];
      allow_only(t, "system.tls", {"epsilon", "omega"});
      cfg.hamiltonian = create_tls_hamiltonian(number(require(t, "epsilon", "system.tls"), "epsilon") * eu,
                                               number(require(t, "omega", "system.tls"), "omega") * eu);
    } else {
      const YAML::Node t = s["nn"];
      allow_only(t, "system.nn", {"site_energies", "coupling", "periodic"});
      auto e = numbers(require(t, "site_energies", "system.nn"), "site_energies");
      if (e.empty()) fail(t, "system.nn: site_energies must not be empty");
      for (auto& x : e) x *= eu;
      const double j = number(require(t, "coupling", "system.nn"), "coupling") * eu;
      const bool periodic = t["periodic"].IsDefined() && flag(t["periodic"], "periodic");
      try {
        cfg.hamiltonian = create_nn_hamiltonian(e, j, periodic);
      } catch (const Error& err) {
        fail(t, std::string("system.nn: ") + err.what());
      }
    }
    if (s["fields"].IsDefined()) {
      const YAML::Node fs = s["fields"];
      if (!fs.IsSequence()) fail(fs, "system.fields: expected a list");
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const YAML::Node f = fs[i];
        const std::string where = "system.fields[" + std::to_string(i) + "]";
        allow_only(f, where, {"coupling", "amplitude", "frequency", "phase"});
        ExternalField field;
        field.coupling_op = matrix(require(f, "coupling", where), where + ".coupling");
        if (field.coupling_op.rows() != cfg.hamiltonian.rows())
          fail(f["coupling"], where + ".coupling: dimension mismatch with the Hamiltonian");
        if (!is_hermitian(field.coupling_op)) fail(f["coupling"], where + ".coupling: must be Hermitian");
        const double a = number(require(f, "amplitude", where), where + ".amplitude") * eu;
        const double w = f["frequency"].IsDefined() ? number(f["frequency"], where + ".frequency") * eu : 0.0;
        const double ph = f["phase"].IsDefined() ? number(f["phase"], where + ".phase") : 0.0;
        field.amplitude = [a, w, ph](double t) { return a * std::cos(w * t + ph); };
        cfg.fields.push_back(std::move(field));
      }
    }
  }

  void initial_state(const YAML::Node& n, RunConfig& cfg) const {
    const auto d = cfg.hamiltonian.rows();
    if (n.IsMap()) {
      allow_only(n, "initial_state", {"state"});
      const std::size_t k = count(require(n, "state", "initial_state"), "initial_state.state");
      if (static_cast<Eigen::Index>(k) >= d) fail(n["state"], "initial_state.state: index out of range");
      cfg.rho0 = DensityMatrix::Zero(d, d);
      cfg.rho0(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
      return;
    }
    cfg.rho0 = matrix(n, "initial_state");
  }

  void simulation(const YAML::Node& s, RunConfig& cfg) const {
    allow_only(s, "simulation", {"dt", "ntimes", "beta", "temperature"});
    cfg.dt = positive(require(s, "dt", "simulation"), "simulation.dt") * cfg.time_unit;
    cfg.ntimes = count(require(s, "ntimes", "simulation"), "simulation.ntimes");
    if (s["beta"].IsDefined() && s["temperature"].IsDefined())
      fail(s, "simulation: give either 'beta' or 'temperature', not both");
    if (s["beta"].IsDefined())
      cfg.beta = positive(s["beta"], "simulation.beta") / cfg.energy_unit;
    else if (s["temperature"].IsDefined())
      cfg.beta = 1.0 / (positive(s["temperature"], "simulation.temperature") * units::kelvin2au);
  }

  void baths(const YAML::Node& bs, RunConfig& cfg) const {
    if (!bs.IsSequence()) fail(bs, "baths: expected a list");
    const auto d = cfg.hamiltonian.rows();
    const double eu = cfg.energy_unit;
    for (std::size_t i = 0; i < bs.size(); ++i) {
      const YAML::Node b = bs[i];
      const std::string where = "baths[" + std::to_string(i) + "]";
      allow_only(b, where,
                 {"type", "xi", "omega_c", "n", "lambda", "gamma", "tau", "delta_s", "file", "mode",
                  "coupling", "svec"});
      const std::string type = text(require(b, "type", where), where + ".type");
      BathConfig bath;
      const double ds = b["delta_s"].IsDefined() ? positive(b["delta_s"], where + ".delta_s") : -1.0;
      try {
        if (type == "exponential_cutoff") {
          ExponentialCutoffSD sd;
          sd.xi = number(require(b, "xi", where), where + ".xi");
          sd.omega_c = positive(require(b, "omega_c", where), where + ".omega_c") * eu;
          if (b["n"].IsDefined()) sd.n = positive(b["n"], where + ".n");
          if (ds > 0) sd.delta_s = ds;
          if (sd.xi < 0) fail(b["xi"], where + ".xi: must be non-negative");
          bath.sd = sd;
        } else if (type == "drude_lorentz") {
          DrudeLorentzSD sd;
          sd.lambda = number(require(b, "lambda", where), where + ".lambda") * eu;
          if (sd.lambda < 0) fail(b["lambda"], where + ".lambda: must be non-negative");
          if (b["gamma"].IsDefined() == b["tau"].IsDefined())
            fail(b, where + ": give exactly one of 'gamma' or 'tau'");
          sd.gamma = b["gamma"].IsDefined() ? positive(b["gamma"], where + ".gamma") * eu
                                            : 1.0 / (positive(b["tau"], where + ".tau") * cfg.time_unit);
          if (ds > 0) sd.delta_s = ds;
          bath.sd = sd;
        } else if (type == "tabulated") {
          auto file = std::filesystem::path(text(require(b, "file", where), where + ".file"));
          if (file.is_relative()) file = source_.parent_path() / file;
          TabulatedSD sd = TabulatedSD::load(file, ds > 0 ? ds : 1.0);
          if (b["mode"].IsDefined()) {
            const std::string mode = text(b["mode"], where + ".mode");
            if (mode == "j") sd.mode = TabulatedSD::Mode::J;
            else if (mode == "j_over_omega") sd.mode = TabulatedSD::Mode::JOverOmega;
            else fail(b["mode"], where + ".mode: expected 'j' or 'j_over_omega'");
          }
          for (auto& w : sd.omega_grid) w *= eu;
          if (sd.mode == TabulatedSD::Mode::J)
            for (auto& v : sd.values) v *= eu;
          bath.sd = sd;
        } else {
          fail(b["type"], where + ".type: expected exponential_cutoff, drude_lorentz or tabulated");
        }
      } catch (const Error& err) {
        fail(b, where + ": " + err.what());
      }
      if (b["svec"].IsDefined()) {
        bath.svec = numbers(b["svec"], where + ".svec");
        if (static_cast<Eigen::Index>(bath.svec.size()) != d)
          fail(b["svec"], where + ".svec: length must equal the system dimension");
      }
      if (b["coupling"].IsDefined()) {
        bath.coupling = matrix(b["coupling"], where + ".coupling");
        if (bath.coupling.rows() != d) fail(b["coupling"], where + ".coupling: dimension mismatch");
        if (!is_hermitian(bath.coupling)) fail(b["coupling"], where + ".coupling: must be Hermitian");
        if (bath.svec.empty() && is_diagonal(bath.coupling))
          for (Eigen::Index k = 0; k < d; ++k) bath.svec.push_back(bath.coupling(k, k).real());
      } else if (!bath.svec.empty()) {
        bath.coupling = Operator::Zero(d, d);
        for (Eigen::Index k = 0; k < d; ++k) bath.coupling(k, k) = bath.svec[static_cast<std::size_t>(k)];
      } else {
        fail(b, where + ": give 'coupling' or 'svec'");
      }
      cfg.baths.push_back(std::move(bath));
    }
  }

  void method(const YAML::Node& m, RunConfig& cfg) const {
    allow_only(m, "method",
               {"name", "jump_operators", "num_modes", "lmax", "scaled", "L", "filter_cutoff",
                "element_budget", "rmax", "backend", "memory", "kmax", "n_points", "n_modes",
                "classical_substeps", "seed", "sampling", "threads"});
    const YAML::Node nm = require(m, "name", "method");
    const std::string name = text(nm, "method.name");
    auto& mc = cfg.method;
    static const std::pair<const char*, Method> names[] = {
        {"bare", Method::Bare}, {"lindblad", Method::Lindblad}, {"brme", Method::Brme},
        {"heom", Method::Heom}, {"quapi", Method::Quapi},       {"ttm", Method::Ttm},
        {"eacp", Method::Eacp}, {"qcpi", Method::Qcpi}};
    bool found = false;
    for (const auto& [s, k] : names)
      if (name == s) {
        mc.kind = k;
        found = true;
      }
    if (!found) fail(nm, "method.name: unknown method '" + name + "'");

    // Keys that belong to another method are rejected rather than ignored.
    std::set<std::string> own{"name"};
    switch (mc.kind) {
      case Method::Bare:
      case Method::Brme: break;
      case Method::Lindblad: own.insert("jump_operators"); break;
      case Method::Heom: own.insert({"num_modes", "lmax", "scaled"}); break;
      case Method::Quapi: own.insert({"L", "memory", "filter_cutoff", "element_budget"}); break;
      case Method::Ttm:
        own.insert({"rmax", "L", "memory", "backend", "filter_cutoff", "element_budget"});
        break;
      case Method::Qcpi: own.insert({"kmax", "filter_cutoff", "element_budget"}); [[fallthrough]];
      case Method::Eacp:
        own.insert({"n_points", "n_modes", "classical_substeps", "seed", "sampling", "threads"});
        break;
    }
    for (const auto& kv : m) {
      const auto key = kv.first.as<std::string>();
      if (!own.count(key)) fail(kv.first, "method." + key + ": not used by method '" + name + "'");
    }

    const auto d = cfg.hamiltonian.rows();
    if (m["jump_operators"].IsDefined()) {
      const YAML::Node js = m["jump_operators"];
      if (!js.IsSequence()) fail(js, "method.jump_operators: expected a list of matrices");
      // Jump operators carry sqrt(rate).
      const double scale = std::sqrt(cfg.energy_unit);
      for (std::size_t i = 0; i < js.size(); ++i) {
        Operator op = matrix(js[i], "method.jump_operators[" + std::to_string(i) + "]", scale);
        if (op.rows() != d) fail(js[i], "method.jump_operators: dimension mismatch");
        mc.jump_ops.push_back(std::move(op));
      }
    }
    if (m["num_modes"].IsDefined()) mc.num_modes = count(m["num_modes"], "method.num_modes");
    if (m["lmax"].IsDefined()) mc.lmax = count(m["lmax"], "method.lmax");
    if (m["scaled"].IsDefined()) mc.scaled = flag(m["scaled"], "method.scaled");
    if (m["L"].IsDefined()) mc.memory = count(m["L"], "method.L");
    if (m["memory"].IsDefined()) mc.memory = count(m["memory"], "method.memory");
    if (m["filter_cutoff"].IsDefined()) {
      mc.filter_cutoff = number(m["filter_cutoff"], "method.filter_cutoff");
      if (mc.filter_cutoff < 0) fail(m["filter_cutoff"], "method.filter_cutoff: must be non-negative");
    }
    if (m["element_budget"].IsDefined())
      mc.element_budget = positive(m["element_budget"], "method.element_budget");
    if (m["rmax"].IsDefined()) mc.rmax = count(m["rmax"], "method.rmax");
    if (m["backend"].IsDefined()) {
      const std::string b = text(m["backend"], "method.backend");
      if (b == "blip") mc.blip = true;
      else if (b != "quapi") fail(m["backend"], "method.backend: expected 'quapi' or 'blip'");
    }
    if (m["kmax"].IsDefined()) mc.kmax = count(m["kmax"], "method.kmax");
    if (m["n_points"].IsDefined()) mc.n_points = count(m["n_points"], "method.n_points");
    if (m["n_modes"].IsDefined()) mc.n_modes = count(m["n_modes"], "method.n_modes");
    if (m["classical_substeps"].IsDefined())
      mc.classical_substeps = count(m["classical_substeps"], "method.classical_substeps");
    if (m["seed"].IsDefined()) mc.seed = static_cast<std::uint64_t>(count(m["seed"], "method.seed"));
    if (m["sampling"].IsDefined()) {
      const std::string s = text(m["sampling"], "method.sampling");
      if (s == "wigner") mc.wigner = true;
      else if (s != "boltzmann") fail(m["sampling"], "method.sampling: expected 'boltzmann' or 'wigner'");
    }
    if (m["threads"].IsDefined()) mc.threads = count(m["threads"], "method.threads");

    const auto need = [&](const char* key) { require(m, key, "method (" + name + ")"); };
    switch (mc.kind) {
      case Method::Lindblad: need("jump_operators"); break;
      case Method::Quapi:
        if (!m["L"].IsDefined() && !m["memory"].IsDefined()) need("L");
        if (mc.memory < 1) fail(m, "method.L: must be at least 1");
        break;
      case Method::Ttm: need("rmax"); if (mc.rmax < 1) fail(m["rmax"], "method.rmax: must be at least 1"); break;
      case Method::Qcpi:
      case Method::Eacp:
        if (mc.kmax < 1) fail(m["kmax"], "method.kmax: must be at least 1");
        if (mc.n_points < 1) fail(m["n_points"], "method.n_points: must be at least 1");
        if (mc.n_modes < 1) fail(m["n_modes"], "method.n_modes: must be at least 1");
        if (mc.classical_substeps < 1)
          fail(m["classical_substeps"], "method.classical_substeps: must be at least 1");
        break;
      default: break;
    }
  }

  void integrator(const YAML::Node& n, RunConfig& cfg) const {
    allow_only(n, "integrator", {"rtol", "atol", "initial_step", "max_step"});
    if (n["rtol"].IsDefined()) cfg.integrator.rtol = positive(n["rtol"], "integrator.rtol");
    if (n["atol"].IsDefined()) cfg.integrator.atol = positive(n["atol"], "integrator.atol");
    if (n["initial_step"].IsDefined())
      cfg.integrator.initial_step = positive(n["initial_step"], "integrator.initial_step") * cfg.time_unit;
    if (n["max_step"].IsDefined())
      cfg.integrator.max_step = positive(n["max_step"], "integrator.max_step") * cfg.time_unit;
  }

  void output(const YAML::Node& n, RunConfig& cfg) const {
    cfg.output.csv = source_.parent_path() / (source_.stem().string() + ".csv");
    if (!n.IsDefined()) return;
    allow_only(n, "output", {"csv", "plot", "observables"});
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_relative() ? source_.parent_path() / path : path;
    };
    if (n["csv"].IsDefined()) cfg.output.csv = resolve(text(n["csv"], "output.csv"));
    if (n["plot"].IsDefined()) {
      const YAML::Node p = n["plot"];
      bool as_flag = false;
      if (p.IsScalar() && (p.Scalar() == "true" || p.Scalar() == "false")) as_flag = true;
      if (as_flag) {
        if (flag(p, "output.plot")) cfg.output.plot = std::filesystem::path(cfg.output.csv).replace_extension(".svg");
      } else {
        cfg.output.plot = resolve(text(p, "output.plot"));
      }
    }
    if (n["observables"].IsDefined()) {
      const YAML::Node o = n["observables"];
      if (!o.IsSequence()) fail(o, "output.observables: expected a list of state indices");
      for (std::size_t i = 0; i < o.size(); ++i) {
        const std::size_t k = count(o[i], "output.observables");
        if (static_cast<Eigen::Index>(k) >= cfg.hamiltonian.rows())
          fail(o[i], "output.observables: index out of range");
        cfg.output.observables.push_back(k);
      }
    }
  }

  void validate(const YAML::Node& root, RunConfig& cfg) const {
    const Method k = cfg.method.kind;
    const YAML::Node m = root["method"];
    const bool uses_baths = k == Method::Brme || k == Method::Heom || k == Method::Quapi ||
                            k == Method::Ttm || k == Method::Eacp || k == Method::Qcpi;
    if (uses_baths && cfg.baths.empty()) fail(m, "method " + method_name(k) + ": needs at least one bath");
    if (!uses_baths && !cfg.baths.empty())
      fail(root["baths"], "baths: method " + method_name(k) + " does not use baths");
    if (uses_baths && !(cfg.beta > 0.0))
      fail(root["simulation"], "simulation: method " + method_name(k) + " needs 'beta' or 'temperature'");
    if (k == Method::Heom)
      for (std::size_t i = 0; i < cfg.baths.size(); ++i)
        if (!std::holds_alternative<DrudeLorentzSD>(cfg.baths[i].sd))
          fail(root["baths"][i], "baths[" + std::to_string(i) + "]: heom supports drude_lorentz baths only");
    if (k == Method::Quapi || k == Method::Ttm || k == Method::Eacp || k == Method::Qcpi)
      for (std::size_t i = 0; i < cfg.baths.size(); ++i)
        if (cfg.baths[i].svec.empty())
          fail(root["baths"][i], "baths[" + std::to_string(i) +
                                     "]: path-integral methods need a diagonal coupling or 'svec'");
    if ((k == Method::Eacp || k == Method::Qcpi) && cfg.baths.size() != 1)
      fail(root["baths"], "baths: " + method_name(k) + " takes exactly one bath");
    if (k == Method::Ttm && !cfg.fields.empty())
      fail(root["system"]["fields"], "system.fields: ttm does not support external fields");
    if ((k == Method::Eacp || k == Method::Qcpi) && !cfg.fields.empty())
      fail(root["system"]["fields"], "system.fields: " + method_name(k) + " does not support external fields");
    if (k != Method::Lindblad && !cfg.method.jump_ops.empty())
      fail(m["jump_operators"], "method.jump_operators: only used by lindblad");
  }

  std::filesystem::path source_;
};

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source.string() << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
    throw ConfigError(os.str());
  }
  return Parser(source).parse(root);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace qdyn::app
