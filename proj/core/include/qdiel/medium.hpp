#pragma once

#include <complex>

namespace qdiel {

using cdouble = std::complex<double>;

// Single-resonance Lorentz medium. All frequencies are in units of a reference
// frequency omega_ref (omega0 = 1 by default), hbar = c = 1, and temperature is
// k_B T / (hbar omega_ref).
struct MediumParams {
  double omega0 = 1.0;
  double omega_p = 0.5;
  double gamma = 0.1;
  double temperature = 0.0;
};

// Validated medium. Construction checks the parameter invariants and samples
// Im eps > 0 on a log grid (passivity); throws InvariantError naming the field.
class Medium {
public:
  explicit Medium(const MediumParams& params);

  const MediumParams& params() const noexcept { return params_; }
  double omega0() const noexcept { return params_.omega0; }
  double omega_p() const noexcept { return params_.omega_p; }
  double gamma() const noexcept { return params_.gamma; }
  double temperature() const noexcept { return params_.temperature; }

  // Frequency where eps_R crosses zero for weak damping, sqrt(omega0^2 + omega_p^2).
  double longitudinal_frequency() const noexcept;

private:
  MediumParams params_;
};

struct ComplexIndex {
  double n_r = 1.0;
  double n_i = 0.0;

  cdouble value() const noexcept { return {n_r, n_i}; }
};

/// eps(omega) = 1 - omega_p^2 / (omega^2 - omega0^2 + i gamma omega).
/// Real and imaginary parts are assembled separately so that tiny eps_I far
/// from resonance keeps full relative precision. Throws DomainError for omega <= 0.
cdouble permittivity(const Medium& m, double omega);

// omega -> 0 limit, 1 + omega_p^2 / omega0^2.
double static_permittivity(const Medium& m) noexcept;

/// d eps / d omega = omega_p^2 (2 omega + i gamma) / (omega^2 - omega0^2 + i gamma omega)^2.
cdouble permittivity_derivative(const Medium& m, double omega);

/// n = sqrt(eps) on the branch with n_i >= 0.
ComplexIndex refractive_index(const Medium& m, double omega);

/// Complex dn/domega = (d eps/d omega) / (2 n).
cdouble refractive_index_derivative(const Medium& m, double omega);

// d n_R / d omega, analytic.
double d_omega_n_r(const Medium& m, double omega);

// d/domega [omega eps_R(omega)] = eps_R + omega d eps_R/domega.
double d_omega_omega_eps_r(const Medium& m, double omega);

// Principal square root with the sign flipped if Im < 0 (passive branch).
cdouble passive_sqrt(cdouble z) noexcept;

}  // namespace qdiel
