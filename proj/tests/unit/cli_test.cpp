#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qdiel_cli/config.hpp"
#include "qdiel_cli/run.hpp"

using namespace qdiel::cli;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qdiel_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(QDIEL_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, ParsesSectionsAndTopLevelKeys) {
  const RunConfig c = parse(
      "command = energy\n"
      "seed = 7\n"
      "; comment\n"
      "[medium]\nomega_p = 0.25\ngamma = 0.05\n"
      "[oscillator]\ninclude_shift = false\nn_modes = 500\n"
      "[quadrature]\ntail_cut = 300\n"
      "[grid]\npoints = 12\n"
      "[energy]\nroute = quadrature\nomega_max = 40\n"
      "[sweep]\nparameter = gamma\nvalues = 0.01, 0.1,0.5\n");
  EXPECT_EQ(c.command, Command::energy);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.medium.omega_p, 0.25);
  EXPECT_EQ(c.medium.gamma, 0.05);
  EXPECT_FALSE(c.oscillator.include_shift);
  EXPECT_EQ(c.n_modes, 500);
  EXPECT_EQ(c.quadrature.tail_cut, 300.0);
  EXPECT_EQ(c.grid.points, 12);
  EXPECT_EQ(c.energy.route, qdiel::KRoute::quadrature);
  EXPECT_EQ(c.energy.omega_max, 40.0);
  ASSERT_TRUE(c.sweep.has_value());
  EXPECT_EQ(c.sweep->parameter, "gamma");
  EXPECT_EQ(c.sweep->values, (std::vector<double>{0.01, 0.1, 0.5}));
}

TEST(Config, UnknownKeyNamesFieldAndLine) {
  try {
    parse("[medium]\ngamma = 0.1\ncolour = red\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "medium.colour");
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Config, BadNumber) {
  try {
    parse("[grid]\npoints = 4.5\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "grid.points");
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse("[medium]\ngamma = 0.1x\n"), ConfigError);
  EXPECT_THROW(parse("command = plot\n"), ConfigError);
  EXPECT_THROW(parse("[nonsense]\na = 1\n"), ConfigError);
}

TEST(Config, SyntaxErrorCarriesLine) {
  try {
    parse("[medium]\ngamma 0.1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Config, ValidationNamesTheField) {
  RunConfig c;
  c.medium.gamma = 0.0;
  try {
    validate(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "medium.gamma");
  }
  c = RunConfig{};
  c.oscillator.gamma = 0.5;
  try {
    validate(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "oscillator.gamma");
  }
  c = RunConfig{};
  c.energy.omega_max = 1.0;
  try {
    validate(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "energy.omega_max");
  }
  c = RunConfig{};
  c.sweep = Sweep{"colour", {1.0}};
  EXPECT_THROW(validate(c), ConfigError);
  EXPECT_NO_THROW(validate(RunConfig{}));
}

TEST(Run, PermittivityCsvShape) {
  RunConfig c;
  c.command = Command::permittivity;
  c.output_dir = scratch("perm");
  std::ostringstream log;
  const RunResult r = run(c, log);
  EXPECT_EQ(r.status, 0);
  const std::string csv = slurp(c.output_dir / "permittivity.csv");
  EXPECT_EQ(csv.rfind("omega,eps_r,eps_i,n_r,n_i\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 401);
  EXPECT_TRUE(fs::exists(c.output_dir / "report.txt"));
  EXPECT_FALSE(fs::exists(c.output_dir / "permittivity.csv.tmp"));
}

TEST(Run, EnergySweepKeepsInputOrder) {
  RunConfig c;
  c.command = Command::energy;
  c.output_dir = scratch("sweep");
  c.sweep = Sweep{"gamma", {0.5, 0.01, 0.1}};
  std::ostringstream log;
  const RunResult r = run(c, log);
  EXPECT_EQ(r.status, 0);
  std::istringstream csv(slurp(c.output_dir / "energy_report.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, energy_csv_header());
  std::vector<std::string> gammas;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string cell;
    for (int i = 0; i < 3; ++i) std::getline(row, cell, ',');
    gammas.push_back(cell);
  }
  EXPECT_EQ(gammas, (std::vector<std::string>{"0.5", "0.01", "0.10000000000000001"}));
  EXPECT_NE(log.str().find("W mode sum"), std::string::npos);
}

TEST(Run, VerifyAllIsDeterministicAndPasses) {
  RunConfig c;
  c.output_dir = scratch("va1");
  std::ostringstream log;
  const RunResult a = run(c, log);
  EXPECT_EQ(a.status, 0);
  EXPECT_GE(a.report.passed(), 12);
  RunConfig d = c;
  d.output_dir = scratch("va2");
  const RunResult b = run(d, log);
  for (const char* name : {"permittivity.csv", "spectra_E.csv", "spectra_H.csv", "oscillator_compare.csv",
                           "energy_report.csv", "report.txt"}) {
    EXPECT_EQ(slurp(c.output_dir / name), slurp(d.output_dir / name)) << name;
  }
  const std::string report = slurp(c.output_dir / "report.txt");
  EXPECT_NE(report.find("PASS  secular cancellation"), std::string::npos);
  EXPECT_EQ(report.find("FAIL"), std::string::npos);
}

TEST(Binary, ExitCodes) {
  const fs::path dir = scratch("bin");
  fs::create_directories(dir);
  EXPECT_EQ(run_binary("permittivity --omega-min 0.01 --omega-max 100 --points 400 --out " + (dir / "p").string()), 0);
  const std::string csv = slurp(dir / "p" / "permittivity.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 401);

  {
    std::ofstream bad(dir / "bad.ini");
    bad << "[medium]\ngamma = 0\n";
  }
  EXPECT_EQ(run_binary("energy --config " + (dir / "bad.ini").string() + " --out " + (dir / "e").string()), 2);
  EXPECT_EQ(run_binary("frobnicate"), 2);
  EXPECT_EQ(run_binary("permittivity --points x"), 2);
  // 200 modes put the recurrence before 2/gamma: a failed check, status 1.
  EXPECT_EQ(run_binary("oscillator --n-modes 200 --out " + (dir / "q").string()), 1);
}
