#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "app/config.hpp"
#include "app/csv.hpp"
#include "app/runner.hpp"

namespace fs = std::filesystem;
using namespace qdyn;

namespace {

struct Outcome {
  int status = -1;
  std::string output;
};

// Runs the installed binary, folding stderr into the captured text.
Outcome cli(const std::string& args) {
  const std::string cmd = std::string(QDYN_CLI_PATH) + " " + args + " 2>&1";
  Outcome out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) out.output += buf.data();
  const int raw = pclose(pipe);
  out.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qdyn_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const fs::path kConfigs = QDYN_CONFIG_DIR;
const fs::path kData = QDYN_TEST_DATA_DIR;

}  // namespace

TEST(Cli, RabiConfig) {
  const fs::path out = scratch("rabi.csv");
  const auto r = cli("run " + (kConfigs / "rabi_bare.yaml").string() + " --output " + out.string());
  ASSERT_EQ(r.status, 0) << r.output;
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, app::csv_header(2));
  const auto dyn = app::read_csv(out);
  ASSERT_EQ(dyn.size(), 101u);
  for (std::size_t k = 0; k < dyn.size(); ++k)
    EXPECT_NEAR(dyn.states[k](0, 0).real(), std::pow(std::cos(dyn.times[k]), 2), 1e-8);
}

TEST(Cli, HeaderLayout) {
  EXPECT_EQ(app::csv_header(2),
            "time,re_rho_0_0,im_rho_0_0,re_rho_0_1,im_rho_0_1,re_rho_1_0,im_rho_1_0,re_rho_1_1,"
            "im_rho_1_1");
}

TEST(Cli, MissingDtNamesKey) {
  const auto r = cli("run " + (kData / "missing_dt.yaml").string());
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("'dt'"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("missing_dt.yaml:5:"), std::string::npos) << r.output;
}

TEST(Cli, ParseErrorsCarryLines) {
  try {
    app::parse_config("system:\n  tls: {epsilon: 0, omega: 1}\nsimulation: {dt: 0.1, ntimes: 4}\n"
                      "initial_state: {state: 7}\nmethod: {name: bare}\n",
                      "inline.yaml");
    FAIL();
  } catch (const app::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("inline.yaml:4:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(app::parse_config("system: [oops\n", "broken.yaml"), app::ConfigError);
  EXPECT_THROW(app::parse_config("system:\n  tls: {epsilon: 0, omega: 1}\n"
                                 "simulation: {dt: 0.1, ntimes: 4}\ninitial_state: {state: 0}\n"
                                 "method: {name: bare, lmax: 3}\n",
                                 "extra.yaml"),
               app::ConfigError);
}

TEST(Cli, BudgetRefusedBeforeCompute) {
  const auto r = cli("run " + (kData / "huge_memory.yaml").string() + " --output " +
                     scratch("huge.csv").string());
  EXPECT_EQ(r.status, 3) << r.output;
  EXPECT_NE(r.output.find("refused"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(scratch("huge.csv")));
}

TEST(Cli, CsvRoundTripIsBitExact) {
  const auto cfg = app::load_config(kConfigs / "lindblad_dimer_emission.yaml");
  const auto dyn = simulate(cfg);
  const fs::path p = scratch("roundtrip.csv");
  app::write_csv(p, dyn);
  const auto back = app::read_csv(p);
  ASSERT_EQ(back.size(), dyn.size());
  for (std::size_t k = 0; k < dyn.size(); ++k) {
    EXPECT_EQ(back.times[k], dyn.times[k]);
    EXPECT_EQ(back.states[k], dyn.states[k]);
  }
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 5e-324})
    EXPECT_EQ(std::strtod(app::format_double(v).c_str(), nullptr), v);
}

TEST(Cli, CompareIdentical) {
  const auto cfg = (kConfigs / "rabi_bare.yaml").string();
  const auto r = cli("compare " + cfg + " " + cfg + " --tol 0");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("max deviation 0 <="), std::string::npos) << r.output;
}

TEST(Cli, CompareCsvAgainstConfig) {
  const fs::path out = scratch("rabi_cmp.csv");
  ASSERT_EQ(cli("run " + (kConfigs / "rabi_bare.yaml").string() + " -o " + out.string()).status, 0);
  const auto r = cli("compare " + out.string() + " " + (kConfigs / "rabi_bare.yaml").string() +
                     " --tol 0");
  EXPECT_EQ(r.status, 0) << r.output;
}

TEST(Cli, BrmeMissesExactAtTightTolerance) {
  const auto r = cli("compare " + (kConfigs / "brme_spin_boson.yaml").string() + " " +
                     (kConfigs / "quapi_spin_boson.yaml").string() + " --tol 5e-3");
  EXPECT_EQ(r.status, 1) << r.output;
}

TEST(Cli, HeomMatchesQuapi) {
  const auto r = cli("compare " + (kConfigs / "heom_spin_boson.yaml").string() + " " +
                     (kConfigs / "quapi_drude_lorentz.yaml").string() + " --tol 5e-3");
  EXPECT_EQ(r.status, 0) << r.output;
}

TEST(Cli, SeededRunsAreByteIdentical) {
  const fs::path a = scratch("seed_a.csv"), b = scratch("seed_b.csv"), c = scratch("seed_c.csv");
  const auto cfg = (kData / "qcpi_small.yaml").string();
  ASSERT_EQ(cli("run " + cfg + " --seed 5 -o " + a.string()).status, 0);
  ASSERT_EQ(cli("run " + cfg + " --seed 5 -o " + b.string()).status, 0);
  ASSERT_EQ(cli("run " + cfg + " --seed 6 -o " + c.string()).status, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NE(slurp(a), slurp(c));
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  const fs::path a = scratch("thr_1.csv"), b = scratch("thr_3.csv");
  const auto cfg = (kData / "qcpi_small.yaml").string();
  // The config pins threads: 2; the environment only applies when it is 0.
  auto text = slurp(cfg);
  text.replace(text.find("threads: 2"), 10, "threads: 0");
  const fs::path unpinned = scratch("qcpi_unpinned.yaml");
  std::ofstream(unpinned) << text;
  ASSERT_EQ(cli("run " + unpinned.string() + " -o " + a.string()).status, 0);
  const std::string env = "QDYN_NUM_THREADS=3 ";
  const std::string cmd = env + QDYN_CLI_PATH + " run " + unpinned.string() + " -o " + b.string();
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Cli, PlotWritten) {
  const fs::path out = scratch("plot.csv");
  const auto r = cli("run " + (kConfigs / "rabi_bare.yaml").string() + " --plot -o " + out.string());
  ASSERT_EQ(r.status, 0) << r.output;
  const auto svg = slurp(scratch("plot.svg"));
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli("").status, 2);
  EXPECT_EQ(cli("compare a.yaml").status, 2);
  EXPECT_NE(cli("run /nonexistent/config.yaml").status, 0);
}
