#include "qdiel/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdiel/errors.hpp"
#include "qdiel/thermal.hpp"

namespace qdiel {

namespace {

// Digamma(1/2) = -gamma_E - 2 ln 2.
constexpr double kDigammaHalf = -1.9635100260214235;

// Oscillator on a band (0, cut) with a flat coupling sqrt(gamma/pi).
struct Band {
  double omega0;
  double gamma;
  double cut;
  bool shift;

  double delta(double w) const {
    if (!shift) return 0.0;
    return (gamma / M_PI) * std::log((cut - w) / w);
  }
  double detuning(double w) const { return w - omega0 + delta(w); }
  double lorentz(double w) const {
    const double d = detuning(w);
    return (gamma / M_PI) / (d * d + gamma * gamma);
  }

  double resonance() const {
    if (!shift) return omega0;
    double s = std::max(4.0 * std::abs(delta(omega0)), gamma);
    double lo = std::max(omega0 - s, 0.5 * omega0);
    double hi = std::min(omega0 + s, 0.5 * (omega0 + cut));
    while (detuning(lo) > 0.0 && lo > 1e-6 * omega0) {
      s *= 2.0;
      lo = std::max(omega0 - s, 0.5 * lo);
    }
    while (detuning(hi) < 0.0 && hi < cut) {
      s *= 2.0;
      hi = std::min(omega0 + s, 0.5 * (hi + cut));
    }
    if (detuning(lo) > 0.0 || detuning(hi) < 0.0) {
      throw ConvergenceError("shifted_resonance: no sign change near omega0", omega0, s);
    }
    const double tol = 1e-12 * omega0;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (detuning(mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
};

Band band_of(const OscillatorModel& m) {
  return {m.omega0(), m.gamma(), m.omega_cut(), m.include_shift()};
}

void require_inside(const OscillatorModel& m, double omega) {
  if (!(omega > 0.0 && omega < m.omega_cut())) {
    throw DomainError("frequency " + std::to_string(omega) + " outside (0, omega_cut = " +
                      std::to_string(m.omega_cut()) + ")");
  }
}

double thermal_integral(const Band& b, double floor, double temperature, const QuadSpec& q) {
  auto f = [&](double w) { return bose_einstein(w, temperature) * b.lorentz(w); };
  const double peak = b.resonance();
  const double points[] = {peak - 10.0 * b.gamma, peak, peak + 10.0 * b.gamma};
  return integrate(f, floor, b.cut, q, points).value;
}

}  // namespace

OscillatorModel::OscillatorModel(const OscillatorParams& p) : params_(p) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(p.omega0) || !(p.omega0 > 0.0)) throw InvariantError("omega0", "omega0 must be > 0");
  if (!finite(p.gamma) || !(p.gamma > 0.0)) throw InvariantError("gamma", "gamma must be > 0");
  if (p.gamma > p.omega0 / 10.0) {
    throw InvariantError("gamma", "gamma must be <= omega0/10 for the rotating-wave model");
  }
  if (!finite(p.omega_cut) || !(p.omega_cut > 10.0 * p.omega0)) {
    throw InvariantError("omega_cut", "omega_cut must be > 10 omega0");
  }
  if (!finite(p.temperature) || p.temperature < 0.0) {
    throw InvariantError("temperature", "temperature must be >= 0");
  }
  if (!finite(p.omega_floor) || p.omega_floor < 0.0 || p.omega_floor >= p.omega0) {
    throw InvariantError("omega_floor", "omega_floor must lie in [0, omega0)");
  }
}

double frequency_shift(const OscillatorModel& m, double omega) {
  require_inside(m, omega);
  return (m.gamma() / M_PI) * std::log((m.omega_cut() - omega) / omega);
}

double frequency_shift_quadrature(const OscillatorModel& m, double omega, const QuadSpec& q) {
  require_inside(m, omega);
  const double k = m.gamma() / M_PI;
  auto one = [](double) { return 1.0; };
  return k * integrate_pv(one, omega, 0.0, m.omega_cut(), q).value;
}

double applied_shift(const OscillatorModel& m, double omega) {
  return m.include_shift() ? frequency_shift(m, omega) : 0.0;
}

cdouble langevin_amplitude(const OscillatorModel& m, double omega) {
  require_inside(m, omega);
  const double d = omega - m.omega0() + applied_shift(m, omega);
  return std::sqrt(m.gamma() / M_PI) / cdouble(d, m.gamma());
}

double shifted_resonance(const OscillatorModel& m) { return band_of(m).resonance(); }

double commutator_norm(const OscillatorModel& m, const QuadSpec& q) {
  const Band b = band_of(m);
  const double peak = b.resonance();
  const double points[] = {peak - 10.0 * b.gamma, peak, peak + 10.0 * b.gamma};
  auto f = [&](double w) { return b.lorentz(w); };
  const double body = integrate(f, 0.0, b.cut, q, points).value;
  if (b.shift) return body;
  return body + (0.5 - std::atan((b.cut - b.omega0) / b.gamma) / M_PI);
}

FanoCoefficients fano_coefficients(const OscillatorModel& m, double omega) {
  require_inside(m, omega);
  const double root = std::sqrt(m.gamma() / M_PI);
  FanoCoefficients c;
  c.omega = omega;
  c.delta_shift = applied_shift(m, omega);
  const double d = omega - m.omega0() + c.delta_shift;
  c.alpha = root / cdouble(d, -m.gamma());
  c.f = d / root;
  c.beta_singular = c.alpha * c.f;
  c.beta_smooth_prefactor = -root * c.alpha;
  return c;
}

double DiscretizedBath::recurrence_time() const noexcept { return 2.0 * M_PI / spacing; }

DiscretizedBath build_bath(const OscillatorModel& m, int n_modes, double omega_max) {
  if (n_modes < 2) throw InvariantError("n_modes", "n_modes must be >= 2");
  if (!std::isfinite(omega_max) || omega_max < 4.0 * m.omega0()) {
    throw InvariantError("omega_max_bath", "bath omega_max must be >= 4 omega0");
  }
  DiscretizedBath b;
  b.omega0 = m.omega0();
  b.gamma = m.gamma();
  b.omega_max = omega_max;
  b.spacing = omega_max / n_modes;
  const double g = std::sqrt(m.gamma() * b.spacing / M_PI);
  b.frequencies.resize(n_modes);
  b.couplings.assign(n_modes, g);
  for (int k = 0; k < n_modes; ++k) b.frequencies[k] = (k + 0.5) * b.spacing;
  b.hamiltonian.apex = m.omega0();
  b.hamiltonian.diagonal = b.frequencies;
  b.hamiltonian.border = b.couplings;
  if (b.spacing > m.gamma() / 5.0) {
    b.warnings.push_back("grid spacing " + std::to_string(b.spacing) +
                         " exceeds gamma/5; the Lorentzian is under-resolved");
  }
  return b;
}

ArrowheadSpectrum diagonalize(const DiscretizedBath& bath) { return solve_arrowhead(bath.hamiltonian); }

double HeisenbergState::norm() const {
  double s = 0.0;
  for (const auto& x : u) s += std::norm(x);
  return s;
}

HeisenbergState evolve_heisenberg(const DiscretizedBath& bath, const ArrowheadSpectrum& spec,
                                  double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evolve_heisenberg: need t >= 0");
  HeisenbergState s;
  s.t = t;
  const std::size_t n = spec.size();
  const std::size_t modes = bath.frequencies.size();
  std::vector<cdouble> phase(n);
  cdouble u0 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    phase[k] = spec.weights[k] * std::polar(1.0, -spec.eigenvalues[k] * t);
    u0 += phase[k];
  }
  s.u.resize(modes + 1);
  s.u[0] = u0;
  for (std::size_t j = 0; j < modes; ++j) {
    const double g = spec.border[j];
    if (g == 0.0) continue;
    cdouble acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (spec.deflated[k]) continue;
      acc += phase[k] / spec.gap(k, j);
    }
    s.u[j + 1] = g * acc;
  }
  if (t > 0.5 * bath.recurrence_time()) {
    s.warnings.push_back("t = " + std::to_string(t) + " exceeds half the recurrence time " +
                         std::to_string(0.5 * bath.recurrence_time()));
  }
  return s;
}

HeisenbergState evolve_heisenberg(const DiscretizedBath& bath, double t) {
  return evolve_heisenberg(bath, diagonalize(bath), t);
}

cdouble survival_amplitude(const ArrowheadSpectrum& spec, double t) {
  cdouble u0 = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    u0 += spec.weights[k] * std::polar(1.0, -spec.eigenvalues[k] * t);
  }
  return u0;
}

double eigen_thermal_occupation(const ArrowheadSpectrum& spec, double temperature) {
  if (temperature < 0.0) throw DomainError("temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (spec.weights[k] == 0.0) continue;
    if (!(spec.eigenvalues[k] > 0.0)) {
      throw DomainError("eigen_thermal_occupation: non-positive normal-mode frequency");
    }
    s += spec.weights[k] * bose_einstein(spec.eigenvalues[k], temperature);
  }
  return s;
}

double steady_state_occupation(const OscillatorModel& m, const QuadSpec& q) {
  if (m.temperature() == 0.0) return 0.0;
  if (m.params().omega_floor == 0.0) {
    throw DivergenceError(
        "steady_state_occupation: thermal integral diverges logarithmically at w -> 0; "
        "set omega_floor > 0");
  }
  return thermal_integral(band_of(m), m.params().omega_floor, m.temperature(), q);
}

double continuum_survival(double omega0, double gamma, double cut, double t) {
  const Band b{omega0, gamma, cut, true};
  const double peak = b.resonance();
  const double points[] = {peak - 10.0 * gamma, peak, peak + 10.0 * gamma};
  QuadSpec q;
  q.rel_tol = 1e-10;
  q.abs_tol = 1e-13;
  q.max_subdivisions = 4000;
  const int pieces = std::max(1, static_cast<int>(std::ceil(cut * t / (16.0 * M_PI))));
  auto re = [&](double w) { return b.lorentz(w) * std::cos(w * t); };
  auto im = [&](double w) { return -b.lorentz(w) * std::sin(w * t); };
  const double ur = integrate_partitioned(re, 0.0, cut, pieces, q, points).value;
  const double ui = t == 0.0 ? 0.0 : integrate_partitioned(im, 0.0, cut, pieces, q, points).value;
  return ur * ur + ui * ui;
}

LangevinFanoReport compare_langevin_fano(const OscillatorModel& m, int n_modes, double omega_max,
                                         const std::vector<double>& times) {
  const DiscretizedBath bath = build_bath(m, n_modes, omega_max);
  const ArrowheadSpectrum spec = diagonalize(bath);

  LangevinFanoReport r;
  r.warnings = bath.warnings;
  r.recurrence_time = bath.recurrence_time();
  r.window_lo = 2.0 / m.gamma();
  r.window_hi = 0.4 * r.recurrence_time;
  r.orthogonality_error = spec.orthogonality_error;

  for (double t : times) {
    if (!(t >= 0.0)) throw DomainError("compare_langevin_fano: times must be >= 0");
    DecayRow row;
    row.t = t;
    row.exact = std::norm(survival_amplitude(spec, t));
    row.continuum = continuum_survival(m.omega0(), m.gamma(), omega_max, t);
    row.exp_gamma = std::exp(-m.gamma() * t);
    row.exp_two_gamma = std::exp(-2.0 * m.gamma() * t);
    row.in_window = t >= r.window_lo && t <= r.window_hi;
    if (row.in_window) {
      r.max_dev_exp_gamma = std::max(r.max_dev_exp_gamma, std::abs(row.exact / row.exp_gamma - 1.0));
      r.max_dev_exp_two_gamma =
          std::max(r.max_dev_exp_two_gamma, std::abs(row.exact / row.exp_two_gamma - 1.0));
      r.max_dev_continuum = std::max(r.max_dev_continuum, std::abs(row.exact / row.continuum - 1.0));
    }
    r.rows.push_back(row);
  }

  const double T = m.temperature();
  r.omega_ir = bath.spacing * std::exp(kDigammaHalf);
  r.thermal_exact = eigen_thermal_occupation(spec, T);
  r.thermal_bose = bose_einstein(m.omega0(), T);
  if (T > 0.0) {
    QuadSpec q;
    q.rel_tol = 1e-11;
    const Band b{m.omega0(), m.gamma(), omega_max, true};
    r.thermal_continuum = thermal_integral(b, r.omega_ir, T, q);
    r.thermal_dev_bose = std::abs(r.thermal_exact / r.thermal_bose - 1.0);
    r.thermal_dev_routes = std::abs(r.thermal_exact / r.thermal_continuum - 1.0);
  }
  return r;
}

TrialTrajectory windowed_sinusoid(double omega, double center, double width) {
  const double s2 = width * width;
  TrialTrajectory tr;
  tr.x = [=](double t) {
    const double u = t - center;
    return std::sin(omega * t) * std::exp(-u * u / (2.0 * s2));
  };
  tr.xdot = [=](double t) {
    const double u = t - center;
    const double env = std::exp(-u * u / (2.0 * s2));
    return (omega * std::cos(omega * t) - (u / s2) * std::sin(omega * t)) * env;
  };
  tr.xddot = [=](double t) {
    const double u = t - center;
    const double env = std::exp(-u * u / (2.0 * s2));
    const double s = std::sin(omega * t);
    const double c = std::cos(omega * t);
    return (-omega * omega * s - 2.0 * omega * (u / s2) * c + (u * u / (s2 * s2) - 1.0 / s2) * s) * env;
  };
  return tr;
}

DampingKernelResult damping_kernel_check(const OscillatorModel& m, const TrialTrajectory& trial,
                                         double t_eval, double omega_max) {
  if (!(t_eval > 0.0)) throw DomainError("damping_kernel_check: t_eval must be > 0");
  if (!(omega_max > 0.0)) throw DomainError("damping_kernel_check: omega_max must be > 0");
  const double W = omega_max;
  const double g = m.gamma();

  // int_0^W w sin(w s) dw
  auto kernel = [W](double s) {
    const double x = W * s;
    if (std::abs(x) < 0.1) {
      const double x2 = x * x;
      const double series = x * x2 * (1.0 / 3.0 - x2 * (1.0 / 30.0 - x2 * (1.0 / 840.0 - x2 / 45360.0)));
      return series / (s * s);
    }
    return (std::sin(x) - x * std::cos(x)) / (s * s);
  };
  auto f = [&](double tp) { return trial.x(tp) * kernel(tp - t_eval); };

  QuadSpec q;
  q.rel_tol = 1e-12;
  q.abs_tol = 1e-15;
  q.max_subdivisions = 4000;
  const int pieces = std::max(1, static_cast<int>(std::ceil(W * t_eval / (16.0 * M_PI))));
  const double integral = integrate_partitioned(f, 0.0, t_eval, pieces, q).value;

  DampingKernelResult r;
  r.omega_max = W;
  r.raw = -(2.0 * g / M_PI) * integral;
  r.frequency_shift_term = (2.0 * g * W / M_PI) * trial.x(t_eval);
  r.initial_slip_term = -(2.0 * g / M_PI) * trial.x(0.0) * std::sin(W * t_eval) / t_eval;
  r.memory = r.raw - r.frequency_shift_term - r.initial_slip_term;
  r.target = -g * trial.xdot(t_eval);
  r.deviation = std::abs(r.memory - r.target);
  return r;
}

}  // namespace qdiel
