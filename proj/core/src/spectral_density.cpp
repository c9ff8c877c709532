#include "qdiel/spectral_density.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "qdiel/errors.hpp"

namespace qdiel {

namespace {

std::vector<std::pair<std::string, std::string>> medium_metadata(const Medium& m) {
  return {{"omega0", format_double(m.omega0())},
          {"omega_p", format_double(m.omega_p())},
          {"gamma", format_double(m.gamma())},
          {"temperature", format_double(m.temperature())}};
}

}  // namespace

const char* to_string(DensityKind kind) noexcept {
  switch (kind) {
    case DensityKind::electric: return "electric";
    case DensityKind::magnetic: return "magnetic";
    case DensityKind::noise_k: return "noise-K";
    case DensityKind::integrand_w1: return "integrand-W1";
    case DensityKind::integrand_w2: return "integrand-W2";
  }
  return "unknown";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void SpectralDensity::validate() const {
  if (grid.size() != values.size()) throw InvariantError("values", "grid and values differ in length");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw InvariantError("grid", "grid points must be finite and > 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InvariantError("grid", "grid must be strictly ascending");
    if (!std::isfinite(values[i])) throw InvariantError("values", "non-finite value");
    const bool signed_ok = kind != DensityKind::electric && kind != DensityKind::noise_k;
    if (!signed_ok && values[i] < 0.0) throw InvariantError("values", "negative spectral density");
  }
}

void SpectralDensity::write_csv(std::ostream& os) const {
  os << "omega,value,kind\n";
  const char* label = to_string(kind);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << format_double(grid[i]) << ',' << format_double(values[i]) << ',' << label << '\n';
  }
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw DomainError("log_grid: need 0 < lo < hi and points >= 2");
  }
  std::vector<double> g(points);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < points; ++i) g[i] = std::exp(a + (b - a) * i / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (!(hi > lo) || points < 2) throw DomainError("linear_grid: need lo < hi and points >= 2");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  g.back() = hi;
  return g;
}

SpectralDensity tabulate_electric(const Medium& m, const std::vector<double>& grid) {
  SpectralDensity s;
  s.kind = DensityKind::electric;
  s.grid = grid;
  s.metadata = medium_metadata(m);
  s.metadata.emplace_back("route", "closed form w^3 n_R / pi");
  for (double w : grid) s.values.push_back(electric_density_closed(m, w));
  s.validate();
  return s;
}

SpectralDensity tabulate_magnetic(const Medium& m, const std::vector<double>& grid) {
  SpectralDensity s;
  s.kind = DensityKind::magnetic;
  s.grid = grid;
  s.metadata = medium_metadata(m);
  s.metadata.emplace_back("route", "closed form w^3 Re eps^(3/2) / pi");
  for (double w : grid) s.values.push_back(magnetic_density_closed(m, w));
  s.validate();
  return s;
}

SpectralDensity tabulate_noise(const Medium& m, const std::vector<double>& grid, Ordering ordering) {
  SpectralDensity s;
  s.kind = DensityKind::noise_k;
  s.grid = grid;
  s.metadata = medium_metadata(m);
  s.metadata.emplace_back("ordering", ordering == Ordering::normal ? "normal" : "antinormal");
  for (double w : grid) s.values.push_back(noise_correlator(m, w, ordering).amplitude);
  s.validate();
  return s;
}

}  // namespace qdiel
