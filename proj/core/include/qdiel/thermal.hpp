#pragma once

#include <cmath>

namespace qdiel {

// Bose-Einstein occupation 1/(exp(omega/T) - 1); exactly 0 at T = 0.
inline double bose_einstein(double omega, double temperature) noexcept {
  if (temperature <= 0.0) return 0.0;
  return 1.0 / std::expm1(omega / temperature);
}

}  // namespace qdiel
