#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qdiel/energy.hpp"
#include "qdiel/medium.hpp"
#include "qdiel/oscillator.hpp"
#include "qdiel/quadrature.hpp"

namespace qdiel::cli {

enum class Command { permittivity, oscillator, dielectric, energy, verify_all };

const char* to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name);

struct GridSpec {
  double omega_min = 0.01;
  double omega_max = 100.0;
  int points = 400;
};

// Energy sweep over one medium parameter: omega0, omega_p, gamma or omega_max.
struct Sweep {
  std::string parameter;
  std::vector<double> values;
};

struct RunConfig {
  Command command = Command::verify_all;
  MediumParams medium;
  OscillatorParams oscillator{1.0, 0.01, 101.0, 1.0, true, 1e-3};
  int n_modes = 4000;
  double omega_max_bath = 4.0;
  QuadSpec quadrature;
  GridSpec grid;
  EnergyOptions energy;
  std::optional<Sweep> sweep;
  std::filesystem::path output_dir = ".";
  // Reserved; every computation is deterministic.
  std::uint64_t seed = 0;
};

class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, int line, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  // 0 when the error is not tied to a line of the config file.
  int line() const noexcept { return line_; }

private:
  std::string field_;
  int line_;
};

// INI text: [medium], [oscillator], [quadrature], [grid], [energy], [sweep]
// sections plus top-level command, output_dir and seed. Values override `base`.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

// Checks every module invariant the command relies on; throws ConfigError
// with a dotted field name ("medium.gamma").
void validate(const RunConfig& cfg);

}  // namespace qdiel::cli
