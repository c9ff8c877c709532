#include "qdiel/medium.hpp"

#include <cmath>
#include <string>

#include "qdiel/errors.hpp"

namespace qdiel {

namespace {

void require_positive_frequency(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("frequency must be finite and > 0, got " + std::to_string(omega));
  }
}

// omega^2 - omega0^2, factored to keep precision near resonance.
double detuning(double omega, double omega0) { return (omega - omega0) * (omega + omega0); }

}  // namespace

Medium::Medium(const MediumParams& params) : params_(params) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(params.omega0) || !(params.omega0 > 0.0)) {
    throw InvariantError("omega0", "omega0 must be > 0");
  }
  if (!finite(params.omega_p) || params.omega_p < 0.0) {
    throw InvariantError("omega_p", "omega_p must be >= 0");
  }
  if (!finite(params.gamma) || !(params.gamma > 0.0)) {
    throw InvariantError("gamma", "gamma must be > 0");
  }
  if (!finite(params.temperature) || params.temperature < 0.0) {
    throw InvariantError("temperature", "temperature must be >= 0");
  }
  if (params.omega_p > 0.0) {
    for (int k = 0; k <= 64; ++k) {
      const double omega = params.omega0 * std::pow(10.0, -2.0 + 4.0 * k / 64.0);
      if (!(permittivity(*this, omega).imag() > 0.0)) {
        throw InvariantError("gamma", "medium is not passive: Im eps <= 0 at omega = " +
                                          std::to_string(omega));
      }
    }
  }
}

double Medium::longitudinal_frequency() const noexcept {
  return std::hypot(params_.omega0, params_.omega_p);
}

cdouble permittivity(const Medium& m, double omega) {
  require_positive_frequency(omega);
  const double wp2 = m.omega_p() * m.omega_p();
  const double a = detuning(omega, m.omega0());
  const double b = m.gamma() * omega;
  const double denom = a * a + b * b;
  return {1.0 - wp2 * a / denom, wp2 * b / denom};
}

double static_permittivity(const Medium& m) noexcept {
  const double r = m.omega_p() / m.omega0();
  return 1.0 + r * r;
}

cdouble permittivity_derivative(const Medium& m, double omega) {
  require_positive_frequency(omega);
  const double wp2 = m.omega_p() * m.omega_p();
  const cdouble d{detuning(omega, m.omega0()), m.gamma() * omega};
  return wp2 * cdouble{2.0 * omega, m.gamma()} / (d * d);
}

cdouble passive_sqrt(cdouble z) noexcept {
  cdouble n = std::sqrt(z);
  if (n.imag() < 0.0) n = -n;
  return n;
}

ComplexIndex refractive_index(const Medium& m, double omega) {
  const cdouble n = passive_sqrt(permittivity(m, omega));
  return {n.real(), n.imag()};
}

cdouble refractive_index_derivative(const Medium& m, double omega) {
  const cdouble n = refractive_index(m, omega).value();
  return permittivity_derivative(m, omega) / (2.0 * n);
}

double d_omega_n_r(const Medium& m, double omega) {
  return refractive_index_derivative(m, omega).real();
}

double d_omega_omega_eps_r(const Medium& m, double omega) {
  return permittivity(m, omega).real() + omega * permittivity_derivative(m, omega).real();
}

}  // namespace qdiel
