#include "qdiel_cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "qdiel/errors.hpp"

namespace qdiel::cli {

namespace pt = boost::property_tree;

namespace {

// "section.key" -> line, so that errors found after parsing can point back.
std::map<std::string, int> key_lines(const std::string& text) {
  std::map<std::string, int> lines;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int number = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(t.substr(0, eq));
    lines.emplace(section.empty() ? key : section + "." + key, number);
  }
  return lines;
}

class Reader {
public:
  explicit Reader(std::map<std::string, int> lines) : lines_(std::move(lines)) {}

  int line_of(const std::string& field) const {
    const auto it = lines_.find(field);
    return it == lines_.end() ? 0 : it->second;
  }

  [[noreturn]] void fail(const std::string& field, const std::string& why) const {
    const int line = line_of(field);
    std::string msg = "config";
    if (line > 0) msg += " line " + std::to_string(line);
    msg += ": " + field + ": " + why;
    throw ConfigError(field, line, msg);
  }

  double number(const std::string& field, const std::string& text) const {
    double v = 0.0;
    const char* b = text.data();
    const char* e = b + text.size();
    const auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail(field, "expected a number, got '" + text + "'");
    return v;
  }

  template <class Int>
  Int integer(const std::string& field, const std::string& text) const {
    Int v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    const auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail(field, "expected an integer, got '" + text + "'");
    return v;
  }

  bool boolean(const std::string& field, const std::string& text) const {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    fail(field, "expected true/false, got '" + text + "'");
  }

private:
  std::map<std::string, int> lines_;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
  }
  return out;
}

void apply(RunConfig& cfg, const Reader& r, const std::string& section, const std::string& key,
           const std::string& value) {
  const std::string field = section.empty() ? key : section + "." + key;
  auto num = [&] { return r.number(field, value); };
  auto unknown = [&]() { r.fail(field, "unknown key"); };

  if (section.empty()) {
    if (key == "command") {
      const auto c = parse_command(value);
      if (!c) r.fail(field, "unknown command '" + value + "'");
      cfg.command = *c;
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "seed") {
      cfg.seed = r.integer<std::uint64_t>(field, value);
    } else {
      unknown();
    }
  } else if (section == "medium") {
    if (key == "omega0") cfg.medium.omega0 = num();
    else if (key == "omega_p") cfg.medium.omega_p = num();
    else if (key == "gamma") cfg.medium.gamma = num();
    else if (key == "temperature") cfg.medium.temperature = num();
    else unknown();
  } else if (section == "oscillator") {
    auto& o = cfg.oscillator;
    if (key == "omega0") o.omega0 = num();
    else if (key == "gamma") o.gamma = num();
    else if (key == "omega_cut") o.omega_cut = num();
    else if (key == "temperature") o.temperature = num();
    else if (key == "include_shift") o.include_shift = r.boolean(field, value);
    else if (key == "omega_floor") o.omega_floor = num();
    else if (key == "n_modes") cfg.n_modes = r.integer<int>(field, value);
    else if (key == "omega_max_bath") cfg.omega_max_bath = num();
    else unknown();
  } else if (section == "quadrature") {
    auto& q = cfg.quadrature;
    if (key == "rel_tol") q.rel_tol = num();
    else if (key == "abs_tol") q.abs_tol = num();
    else if (key == "max_subdivisions") q.max_subdivisions = r.integer<int>(field, value);
    else if (key == "tail_cut") q.tail_cut = num();
    else unknown();
  } else if (section == "grid") {
    if (key == "omega_min") cfg.grid.omega_min = num();
    else if (key == "omega_max") cfg.grid.omega_max = num();
    else if (key == "points") cfg.grid.points = r.integer<int>(field, value);
    else unknown();
  } else if (section == "energy") {
    if (key == "omega_max") {
      cfg.energy.omega_max = num();
    } else if (key == "route") {
      if (value == "closed-form") cfg.energy.route = KRoute::closed_form;
      else if (value == "quadrature") cfg.energy.route = KRoute::quadrature;
      else r.fail(field, "expected closed-form or quadrature, got '" + value + "'");
    } else {
      unknown();
    }
  } else if (section == "sweep") {
    if (!cfg.sweep) cfg.sweep = Sweep{};
    if (key == "parameter") {
      cfg.sweep->parameter = value;
    } else if (key == "values") {
      cfg.sweep->values.clear();
      for (const auto& item : split_list(value)) cfg.sweep->values.push_back(r.number(field, item));
    } else {
      unknown();
    }
  } else {
    r.fail(section, "unknown section");
  }
}

}  // namespace

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::permittivity: return "permittivity";
    case Command::oscillator: return "oscillator";
    case Command::dielectric: return "dielectric";
    case Command::energy: return "energy";
    case Command::verify_all: return "verify-all";
  }
  return "?";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::permittivity, Command::oscillator, Command::dielectric, Command::energy,
                    Command::verify_all}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  pt::ptree tree;
  try {
    std::istringstream parse(text);
    pt::read_ini(parse, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", static_cast<int>(e.line()),
                      "config line " + std::to_string(e.line()) + ": " + e.message());
  }

  const Reader reader(key_lines(text));
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      apply(base, reader, "", name, node.data());
      continue;
    }
    for (const auto& [key, leaf] : node) apply(base, reader, name, key, leaf.data());
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", 0, "cannot read config file " + path.string());
  return parse_config(in, std::move(base));
}

void validate(const RunConfig& cfg) {
  auto rethrow = [](const std::string& prefix, const InvariantError& e) {
    throw ConfigError(prefix + e.field(), 0, prefix + e.field() + ": " + e.what());
  };
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError(field, 0, field + ": " + why);
  };

  auto check_medium = [&](const MediumParams& p) {
    try {
      Medium m(p);
    } catch (const InvariantError& e) {
      rethrow("medium.", e);
    }
  };
  check_medium(cfg.medium);

  try {
    OscillatorModel m(cfg.oscillator);
  } catch (const InvariantError& e) {
    rethrow("oscillator.", e);
  }
  if (cfg.n_modes < 2) fail("oscillator.n_modes", "must be >= 2");
  if (!(cfg.omega_max_bath >= 4.0 * cfg.oscillator.omega0)) {
    fail("oscillator.omega_max_bath", "must be >= 4 omega0");
  }

  try {
    cfg.quadrature.validate();
  } catch (const InvariantError& e) {
    rethrow("quadrature.", e);
  }

  if (!(cfg.grid.omega_min > 0.0)) fail("grid.omega_min", "must be > 0");
  if (!(cfg.grid.omega_max > cfg.grid.omega_min)) fail("grid.omega_max", "must exceed grid.omega_min");
  if (cfg.grid.points < 2) fail("grid.points", "must be >= 2");

  auto check_band = [&](const MediumParams& p, double omega_max) {
    const Medium m(p);
    const double need = 2.0 * std::max(m.omega0(), m.longitudinal_frequency());
    if (!(omega_max >= need)) {
      fail("energy.omega_max", "must be >= " + std::to_string(need) +
                                   " to contain the absorption band");
    }
  };
  check_band(cfg.medium, cfg.energy.omega_max);

  if (cfg.sweep) {
    const Sweep& s = *cfg.sweep;
    if (s.values.empty()) fail("sweep.values", "empty list");
    for (double v : s.values) {
      MediumParams p = cfg.medium;
      double omega_max = cfg.energy.omega_max;
      if (s.parameter == "omega0") p.omega0 = v;
      else if (s.parameter == "omega_p") p.omega_p = v;
      else if (s.parameter == "gamma") p.gamma = v;
      else if (s.parameter == "omega_max") omega_max = v;
      else fail("sweep.parameter", "expected omega0, omega_p, gamma or omega_max, got '" + s.parameter + "'");
      check_medium(p);
      check_band(p, omega_max);
    }
  }
}

}  // namespace qdiel::cli
