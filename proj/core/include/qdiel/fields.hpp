#pragma once

#include <complex>

#include "qdiel/medium.hpp"
#include "qdiel/quadrature.hpp"

namespace qdiel {

struct XPCommutatorResult {
  // [x(t), p(t')] in units of i hbar.
  double quadrature_value = 0.0;
  double closed_form_value = 0.0;
  double omega1 = 0.0;
  double tau = 0.0;
  double quadrature_error = 0.0;
};

/// (2 gamma / pi) int_0^inf w^2 cos(w tau) dw / ((omega0^2 - w^2)^2 + gamma^2 w^2)
/// against [cos(w1 tau) - (gamma / 2 w1) sin(w1 |tau|)] exp(-gamma |tau| / 2),
/// w1 = sqrt(omega0^2 - gamma^2/4). The 1/(w^2 + omega0^2) asymptote is
/// integrated in closed form and the remainder numerically up to
/// omega_max_factor * omega0. Throws UnsupportedError for gamma >= 2 omega0.
XPCommutatorResult xp_commutator(const Medium& m, double tau, double omega_max_factor = 1e3);

enum class Ordering { normal, antinormal };

struct NoiseCorrelator {
  // 4 hbar eps_I nbar (normal) or 4 hbar eps_I (nbar + 1) (antinormal).
  double amplitude = 0.0;
  Ordering ordering = Ordering::normal;
  double temperature = 0.0;
  double omega = 0.0;
  double eps_i = 0.0;
};

NoiseCorrelator noise_correlator(const Medium& m, double omega, Ordering ordering);

struct KIntegral {
  double closed_form = 0.0;
  double quadrature = 0.0;
  double quadrature_error = 0.0;
};

/// int d^3k / |k^2 - eps w^2|^2 = pi^2 / (w n_I). The radial quadrature runs to
/// K = 50 max(1, |n|) w and adds the large-k series of the tail. Throws
/// DivergenceError when n_I = 0.
KIntegral k_integral(const Medium& m, double omega, const QuadSpec& q = {});
KIntegral k_integral(cdouble eps, double omega, const QuadSpec& q = {});

/// Finite part of int d^3k k^2 / |k^2 - eps w^2|^2: the linearly divergent
/// 4 pi int dk is removed. Closed form pi^2 w (n_R^2 - 3 n_I^2) / n_I.
KIntegral magnetic_k_integral(const Medium& m, double omega, const QuadSpec& q = {});
KIntegral magnetic_k_integral(cdouble eps, double omega, const QuadSpec& q = {});

struct ComplexKIntegral {
  cdouble closed_form;
  cdouble quadrature;
};

/// Finite part of int d^3k 1 / (k^2 - eps w^2) = 4 pi int dk z / (k^2 - z),
/// z = eps w^2; equals 2 pi^2 i w n with Im n > 0.
ComplexKIntegral resolvent_k_integral(const Medium& m, double omega, const QuadSpec& q = {});

// d/dw of the above, 4 pi int dk z' k^2 / (k^2 - z)^2 = 2 pi z' int dk / (k^2 - z);
// equals 2 pi^2 i (n + w n').
ComplexKIntegral resolvent_k_integral_derivative(const Medium& m, double omega,
                                                 const QuadSpec& q = {});

struct DensityValue {
  // From the k-integral quadrature.
  double via_k_integral = 0.0;
  // Residue closed form.
  double closed_form = 0.0;
};

/// S_E(w) = (1 / 2 pi^3) eps_I w^4 int d^3k |k^2 - eps w^2|^-2 = w^3 n_R / pi, per
/// polarization. In a lossless medium both fields hold the limit w^3 n_R / pi.
DensityValue electric_spectral_density(const Medium& m, double omega, const QuadSpec& q = {});

/// S_H(w) = (1 / 2 pi^3) eps_I w^2 (finite part of int d^3k k^2 |k^2 - eps w^2|^-2)
///        = (w^3 / pi) n_R (n_R^2 - 3 n_I^2) = (w^3 / pi) Re eps^{3/2}.
/// Negative where n_R^2 < 3 n_I^2 (near resonance in a strongly absorbing medium).
DensityValue magnetic_spectral_density(const Medium& m, double omega, const QuadSpec& q = {});

// Closed forms only, without the k-space quadrature.
double electric_density_closed(const Medium& m, double omega);
double magnetic_density_closed(const Medium& m, double omega);

}  // namespace qdiel
