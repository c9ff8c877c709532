#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "qdiel_cli/config.hpp"
#include "qdiel_cli/run.hpp"

namespace {

template <class T>
void override(std::optional<T>& flag, T& target) {
  if (flag) target = *flag;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized fields in absorbing dielectrics: verification suites and spectra"};
  app.set_version_flag("--version", "qdiel 0.1.0");

  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
  std::optional<double> omega_min;
  std::optional<double> omega_max;
  std::optional<int> points;
  std::optional<double> tail_cut;
  bool no_shift = false;
  std::optional<int> n_modes;
  std::optional<double> omega_max_bath;
  std::optional<double> temperature;

  app.add_option("command", command, "permittivity, dielectric, oscillator, energy or verify-all")->required();
  app.add_option("--config", config_path, "INI config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--omega-min", omega_min, "lower end of the spectral grid");
  app.add_option("--omega-max", omega_max, "upper end of the spectral grid");
  app.add_option("--points", points, "number of grid points");
  app.add_option("--tail-cut", tail_cut, "upper limit for semi-infinite frequency integrals");
  app.add_flag("--no-shift", no_shift, "zero the reservoir frequency shift");
  app.add_option("--n-modes", n_modes, "reservoir modes in the discretised bath");
  app.add_option("--omega-max-bath", omega_max_bath, "band edge of the discretised bath");
  app.add_option("--temperature", temperature, "oscillator temperature, k_B T / hbar omega_ref");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    qdiel::cli::RunConfig cfg;
    if (config_path) cfg = qdiel::cli::load_config(*config_path, cfg);
    const auto cmd = qdiel::cli::parse_command(command);
    if (!cmd) {
      std::cerr << "error: unknown command '" << command << "'\n";
      return 2;
    }
    cfg.command = *cmd;
    if (out_dir) cfg.output_dir = *out_dir;
    override(omega_min, cfg.grid.omega_min);
    override(omega_max, cfg.grid.omega_max);
    override(points, cfg.grid.points);
    override(tail_cut, cfg.quadrature.tail_cut);
    if (no_shift) cfg.oscillator.include_shift = false;
    override(n_modes, cfg.n_modes);
    override(omega_max_bath, cfg.omega_max_bath);
    override(temperature, cfg.oscillator.temperature);

    const qdiel::cli::RunResult result = qdiel::cli::run(cfg, std::cout);
    const auto& rep = result.report;
    std::cout << rep.passed() << " passed, " << rep.failed() << " failed; report in "
              << (cfg.output_dir / "report.txt").string() << '\n';
    if (result.status != 0) {
      for (const auto& c : rep.checks()) {
        if (!c.passed) std::cerr << "check failed: " << c.name << '\n';
      }
    }
    return result.status;
  } catch (const qdiel::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return 1;
  }
}
