#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "qdiel/arrowhead.hpp"
#include "qdiel/quadrature.hpp"

namespace qdiel {

using cdouble = std::complex<double>;

// Single oscillator (frequency omega0) coupled with strength sqrt(gamma/pi) to a
// flat reservoir on (0, omega_cut), rotating-wave couplings only.
struct OscillatorParams {
  double omega0 = 1.0;
  double gamma = 0.01;
  double omega_cut = 101.0;
  double temperature = 0.0;
  // false zeroes the frequency shift Delta (shift absorbed into omega0).
  bool include_shift = true;
  // Lower limit of thermal integrals. n(w) ~ T/w makes them diverge
  // logarithmically at w -> 0, so T > 0 needs a positive floor.
  double omega_floor = 0.0;
};

class OscillatorModel {
public:
  // Throws InvariantError: omega0 > 0, 0 < gamma <= omega0/10,
  // omega_cut > 10 omega0, temperature >= 0, 0 <= omega_floor < omega0.
  explicit OscillatorModel(const OscillatorParams& params);

  const OscillatorParams& params() const noexcept { return params_; }
  double omega0() const noexcept { return params_.omega0; }
  double gamma() const noexcept { return params_.gamma; }
  double omega_cut() const noexcept { return params_.omega_cut; }
  double temperature() const noexcept { return params_.temperature; }
  bool include_shift() const noexcept { return params_.include_shift; }

private:
  OscillatorParams params_;
};

/// Delta(Omega) = (gamma/pi) P int_0^omega_cut dw / (w - Omega)
///              = (gamma/pi) ln((omega_cut - Omega) / Omega).
/// Always the closed form, independent of include_shift. Throws DomainError
/// unless 0 < Omega < omega_cut.
double frequency_shift(const OscillatorModel& m, double omega);

// Same integral by principal-value quadrature.
double frequency_shift_quadrature(const OscillatorModel& m, double omega, const QuadSpec& q = {});

// Delta(Omega) if include_shift, else 0.
double applied_shift(const OscillatorModel& m, double omega);

/// A(Omega) = sqrt(gamma/pi) / (Omega - omega0 + Delta(Omega) + i gamma).
cdouble langevin_amplitude(const OscillatorModel& m, double omega);

// Root of Omega - omega0 + Delta(Omega) near omega0, by bisection to 1e-12 omega0.
double shifted_resonance(const OscillatorModel& m);

/// (gamma/pi) int dw / ((w - omega0 + Delta)^2 + gamma^2), the equal-time
/// commutator [a(t), a^dag(t)]. With the shift included the integral runs over
/// (0, omega_cut); without it the exact Lorentzian tail beyond omega_cut is
/// added, giving the (0, inf) integral.
double commutator_norm(const OscillatorModel& m, const QuadSpec& q = {});

struct FanoCoefficients {
  double omega = 0.0;
  cdouble alpha;
  // Coefficient of delta(w - Omega) in beta(Omega, w), alpha f.
  cdouble beta_singular;
  // beta's principal-value part is beta_smooth_prefactor / (w - Omega).
  cdouble beta_smooth_prefactor;
  double delta_shift = 0.0;
  // f(Omega) = sqrt(pi/gamma) (Omega - omega0 + Delta).
  double f = 0.0;

  cdouble beta_smooth(double w) const { return beta_smooth_prefactor / (w - omega); }
};

FanoCoefficients fano_coefficients(const OscillatorModel& m, double omega);

// Discretised reservoir: midpoint grid w_k = (k - 1/2) dw, couplings
// g_k = sqrt(gamma dw / pi), arrowhead Hamiltonian in the basis (a, b_1..b_N).
struct DiscretizedBath {
  double omega0 = 0.0;
  double gamma = 0.0;
  double omega_max = 0.0;
  double spacing = 0.0;
  std::vector<double> frequencies;
  std::vector<double> couplings;
  ArrowheadMatrix hamiltonian;
  std::vector<std::string> warnings;

  double recurrence_time() const noexcept;
};

// Throws InvariantError for n_modes < 2 or omega_max < 4 omega0. Records a
// warning when dw > gamma/5.
DiscretizedBath build_bath(const OscillatorModel& m, int n_modes, double omega_max);

ArrowheadSpectrum diagonalize(const DiscretizedBath& bath);

// a(t) = u_0(t) a(0) + sum_k u_k(t) b_k(0).
struct HeisenbergState {
  double t = 0.0;
  std::vector<cdouble> u;
  std::vector<std::string> warnings;

  double norm() const;
};

// Throws DomainError for t < 0; warns past half the recurrence time.
HeisenbergState evolve_heisenberg(const DiscretizedBath& bath, const ArrowheadSpectrum& spectrum,
                                  double t);
HeisenbergState evolve_heisenberg(const DiscretizedBath& bath, double t);

// u_0(t) alone, O(N).
cdouble survival_amplitude(const ArrowheadSpectrum& spectrum, double t);

// sum_n c_n^2 nbar(lambda_n), the thermal <a^dag a> of the discretised model.
double eigen_thermal_occupation(const ArrowheadSpectrum& spectrum, double temperature);

/// <a^dag a> = (gamma/pi) int nbar(w) dw / ((w - omega0 + Delta)^2 + gamma^2)
/// over (omega_floor, omega_cut). Returns 0 at T = 0; throws DivergenceError for
/// T > 0 with omega_floor = 0.
double steady_state_occupation(const OscillatorModel& m, const QuadSpec& q = {});

struct DecayRow {
  double t = 0.0;
  double exact = 0.0;
  double continuum = 0.0;
  // exp(-gamma t)
  double exp_gamma = 0.0;
  // exp(-2 gamma t)
  double exp_two_gamma = 0.0;
  bool in_window = false;
};

struct LangevinFanoReport {
  std::vector<DecayRow> rows;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double recurrence_time = 0.0;
  double max_dev_exp_gamma = 0.0;
  double max_dev_exp_two_gamma = 0.0;
  double max_dev_continuum = 0.0;
  double thermal_exact = 0.0;
  double thermal_continuum = 0.0;
  double thermal_bose = 0.0;
  double thermal_dev_bose = 0.0;
  double thermal_dev_routes = 0.0;
  double omega_ir = 0.0;
  double orthogonality_error = 0.0;
  std::vector<std::string> warnings;
};

/// Compares exact diagonalisation of the discretised model with the continuum
/// (Fano) description: survival probability |u_0(t)|^2 against the continuum
/// integral |int |alpha|^2 e^{-i W t} dW|^2 over the same band and against
/// exponential laws, and thermal occupations of both routes. The continuum
/// thermal integral starts at w_ir = dw exp(psi(1/2)), where its logarithmic
/// infrared part equals the discrete harmonic sum. Deviations are taken over
/// the window [2/gamma, 0.4 * 2 pi / dw].
LangevinFanoReport compare_langevin_fano(const OscillatorModel& m, int n_modes, double omega_max,
                                         const std::vector<double>& times);

// |u_0(t)|^2 of the continuum model on (0, cut) with the band's own shift.
double continuum_survival(double omega0, double gamma, double cut, double t);

struct TrialTrajectory {
  std::function<double(double)> x;
  std::function<double(double)> xdot;
  std::function<double(double)> xddot;
};

// x(t) = sin(w t) exp(-(t - center)^2 / (2 width^2)).
TrialTrajectory windowed_sinusoid(double omega, double center, double width);

struct DampingKernelResult {
  double raw = 0.0;
  // (2 gamma W / pi) x(t): cutoff-dependent shift absorbed into omega0.
  double frequency_shift_term = 0.0;
  // -(2 gamma / pi) x(0) sin(W t) / t: transient from the sharp start at t = 0.
  double initial_slip_term = 0.0;
  double memory = 0.0;
  double target = 0.0;
  double deviation = 0.0;
  double omega_max = 0.0;
};

/// -(2 gamma / pi) int_0^W dw w int_0^t dt' x(t') sin w(t' - t), with the w
/// integral done in closed form, compared with -gamma xdot(t) after removing
/// the shift and slip terms. The remaining deviation is O(xddot / W).
DampingKernelResult damping_kernel_check(const OscillatorModel& m, const TrialTrajectory& trial,
                                         double t_eval, double omega_max);

}  // namespace qdiel
