#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <qdyn/error.hpp>

#include "app/config.hpp"
#include "app/csv.hpp"
#include "app/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

qdyn::Dynamics load_series(const std::string& path) {
  if (std::filesystem::path(path).extension() == ".csv") return qdyn::app::read_csv(path);
  const auto cfg = qdyn::app::load_config(path);
  auto dyn = qdyn::app::simulate(cfg);
  for (auto& t : dyn.times) t /= cfg.time_unit;
  return dyn;
}

int compare(const std::string& a, const std::string& b, double tol) {
  const auto da = load_series(a);
  const auto db = load_series(b);
  const auto dev = qdyn::app::compare_series(da, db);
  const auto d = da.states.front().rows();
  std::printf("%-10s %-24s %-24s\n", "element", "max_abs", "rms");
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto k = static_cast<std::size_t>(i * d + j);
      const std::string name = "rho_" + std::to_string(i) + "_" + std::to_string(j);
      std::printf("%-10s %-24.17g %-24.17g\n", name.c_str(), dev.max_abs[k], dev.rms[k]);
    }
  const bool ok = dev.overall_max <= tol;
  std::printf("max deviation %.17g %s tolerance %.17g\n", dev.overall_max, ok ? "<=" : ">", tol);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open quantum system dynamics runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Simulate a config and write the CSV time series");
  std::string config;
  std::string output;
  bool plot = false;
  std::uint64_t seed = 0;
  run->add_option("config", config, "Run description (YAML)")->required();
  run->add_option("--output,-o", output, "CSV path (overrides output.csv)");
  run->add_flag("--plot", plot, "Also write an SVG population plot");
  auto* seed_opt = run->add_option("--seed", seed, "Monte Carlo seed (overrides method.seed)");

  auto* cmp = app.add_subcommand("compare", "Compare two runs (configs or CSV files)");
  std::string a, b;
  double tol = 0.0;
  cmp->add_option("a", a, "First config or CSV")->required();
  cmp->add_option("b", b, "Second config or CSV")->required();
  cmp->add_option("--tol", tol, "Maximum allowed absolute deviation")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      qdyn::app::RunOptions opts;
      if (!output.empty()) opts.output = output;
      opts.plot = plot;
      if (*seed_opt) opts.seed = seed;
      qdyn::app::run(config, opts, std::cerr);
      return 0;
    }
    return compare(a, b, tol);
  } catch (const qdyn::app::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qdyn::BudgetError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
