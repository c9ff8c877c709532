#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qdiel/fields.hpp"
#include "qdiel/medium.hpp"
#include "qdiel/quadrature.hpp"

namespace qdiel {

enum class DensityKind { electric, magnetic, noise_k, integrand_w1, integrand_w2 };

// "electric", "magnetic", "noise-K", "integrand-W1", "integrand-W2".
const char* to_string(DensityKind kind) noexcept;

struct SpectralDensity {
  std::vector<double> grid;
  std::vector<double> values;
  DensityKind kind = DensityKind::electric;
  std::vector<std::pair<std::string, std::string>> metadata;

  // Throws InvariantError: sizes match, grid strictly ascending and positive,
  // values finite, and non-negative for electric and noise-K densities (the
  // magnetic density and the energy integrands change sign in absorbing bands).
  void validate() const;

  // Header `omega,value,kind`, 17 significant digits.
  void write_csv(std::ostream& os) const;
};

std::vector<double> log_grid(double lo, double hi, int points);
std::vector<double> linear_grid(double lo, double hi, int points);

// Closed-form S_E, S_H on the grid (the k-integral route is the cross-check).
SpectralDensity tabulate_electric(const Medium& m, const std::vector<double>& grid);
SpectralDensity tabulate_magnetic(const Medium& m, const std::vector<double>& grid);
SpectralDensity tabulate_noise(const Medium& m, const std::vector<double>& grid, Ordering ordering);

// "%.17g"
std::string format_double(double v);

}  // namespace qdiel
