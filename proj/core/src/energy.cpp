#include "qdiel/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qdiel/errors.hpp"
#include "qdiel/fields.hpp"

namespace qdiel {

namespace {

constexpr double kPi2 = M_PI * M_PI;
constexpr double kPolarizations = 2.0;

void require_band(const Medium& m, const EnergyOptions& opt) {
  opt.quad.validate();
  const double need = 2.0 * std::max(m.omega0(), m.longitudinal_frequency());
  if (!std::isfinite(opt.omega_max) || opt.omega_max < need) {
    throw TruncationError("omega_max = " + std::to_string(opt.omega_max) +
                          " does not contain the absorption band; need >= " + std::to_string(need));
  }
}

std::vector<double> features(const Medium& m, double top) {
  std::vector<double> p;
  const double g = m.gamma();
  for (double c : {m.omega0(), m.longitudinal_frequency()}) {
    for (double s : {-5.0, -1.0, 0.0, 1.0, 5.0}) {
      const double x = c + s * g;
      if (x > 0.0 && x < top) p.push_back(x);
    }
  }
  return p;
}

// With k-space quadrature inside, the integrand carries ~1e-10 relative noise,
// so the outer tolerance is capped there.
QuadResult band_integral(const Medium& m, const EnergyOptions& opt, const RealFunction& f) {
  const std::vector<double> pts = features(m, opt.omega_max);
  QuadSpec q = opt.quad;
  if (opt.route == KRoute::quadrature) q.rel_tol = std::max(q.rel_tol, 1e-9);
  return integrate(f, 0.0, opt.omega_max, q, pts);
}

double electric_density(const Medium& m, double w, const EnergyOptions& opt) {
  if (opt.route == KRoute::closed_form) return electric_density_closed(m, w);
  return electric_spectral_density(m, w, opt.quad).via_k_integral;
}

double magnetic_density(const Medium& m, double w, const EnergyOptions& opt) {
  if (opt.route == KRoute::closed_form) return magnetic_density_closed(m, w);
  return magnetic_spectral_density(m, w, opt.quad).via_k_integral;
}

struct Resolvent {
  cdouble psi;
  cdouble dpsi;
};

Resolvent resolvent(const Medium& m, double w, const EnergyOptions& opt) {
  if (opt.route == KRoute::closed_form) {
    const cdouble n = refractive_index(m, w).value();
    const cdouble i2pi2(0.0, 2.0 * kPi2);
    return {i2pi2 * w * n, i2pi2 * (n + w * refractive_index_derivative(m, w))};
  }
  return {resolvent_k_integral(m, w, opt.quad).quadrature,
          resolvent_k_integral_derivative(m, w, opt.quad).quadrature};
}

}  // namespace

double vacuum_density(double omega_max) noexcept {
  return std::pow(omega_max, 4) / (8.0 * kPi2);
}

W1Density w1_density(const Medium& m, const EnergyOptions& opt) {
  require_band(m, opt);
  const double pref = kPolarizations / (8.0 * M_PI);

  W1Density out;
  auto electric = [&](double w) { return d_omega_omega_eps_r(m, w) * electric_density(m, w, opt); };
  out.stationary_electric = pref * band_integral(m, opt, electric).value;

  auto magnetic = [&](double w) { return magnetic_density(m, w, opt); };
  out.magnetic = pref * band_integral(m, opt, magnetic).value;

  // Absorption by the medium: d/dt of D_eps . E picks up 2 w eps_I per mode.
  auto secular = [&](double w) {
    return 2.0 * w * permittivity(m, w).imag() * electric_density(m, w, opt);
  };
  const QuadResult s = band_integral(m, opt, secular);
  out.secular = pref * s.value;
  out.secular_panels = s.panels;
  return out;
}

W2Density w2_density(const Medium& m, const EnergyOptions& opt, const std::vector<Panel>* shared) {
  require_band(m, opt);
  const double pref = kPolarizations / (16.0 * kPi2 * kPi2);

  W2Density out;
  auto stationary = [&](double w) {
    const double eps_i = permittivity(m, w).imag();
    if (eps_i == 0.0) return 0.0;
    const Resolvent r = resolvent(m, w, opt);
    return -(w * w * eps_i * r.psi.real() + w * w * w * eps_i * r.dpsi.real());
  };
  out.stationary = pref * band_integral(m, opt, stationary).value;

  // Work done by the Langevin forces, linear in t.
  auto secular = [&](double w) {
    const double eps_i = permittivity(m, w).imag();
    if (eps_i == 0.0) return 0.0;
    const Resolvent r = resolvent(m, w, opt);
    return -2.0 * w * w * w * eps_i * r.psi.imag();
  };
  if (shared != nullptr) {
    out.secular = pref * integrate_on_panels(secular, *shared);
  } else {
    out.secular = pref * band_integral(m, opt, secular).value;
  }
  return out;
}

double total_density_direct(const Medium& m, const EnergyOptions& opt) {
  require_band(m, opt);
  auto f = [&](double w) {
    const double nr = refractive_index(m, w).n_r;
    return w * w * w * nr * nr * (nr + w * d_omega_n_r(m, w));
  };
  return band_integral(m, opt, f).value / (2.0 * kPi2);
}

ModeSum mode_sum_density(const Medium& m, const EnergyOptions& opt) {
  require_band(m, opt);
  const double w0 = m.omega0();
  const double wp2 = m.omega_p() * m.omega_p();
  const double g = m.gamma();

  // Lossless dispersion relation k(w) = Re(w sqrt(eps)) and its slope, built
  // without the medium_models helpers.
  auto wavenumber = [=](double w, double& slope) {
    const cdouble den(w * w - w0 * w0, g * w);
    const cdouble eps = 1.0 - wp2 / den;
    const cdouble deps = wp2 * cdouble(2.0 * w, g) / (den * den);
    cdouble root = std::sqrt(eps);
    if (root.imag() < 0.0) root = -root;
    slope = (root + w * deps / (2.0 * root)).real();
    return w * root.real();
  };

  auto f = [&](double w) {
    double dk = 0.0;
    const double k = wavenumber(w, dk);
    return k * k * dk * (0.5 * w);
  };
  const double pts[] = {w0 - 5.0 * g, w0 - g, w0, w0 + g, w0 + 5.0 * g,
                        std::sqrt(w0 * w0 + wp2) - g, std::sqrt(w0 * w0 + wp2),
                        std::sqrt(w0 * w0 + wp2) + g};
  const double body = integrate(f, 0.0, opt.omega_max, opt.quad, pts).value;

  ModeSum out;
  out.value = kPolarizations * 4.0 * M_PI / (8.0 * M_PI * kPi2) * body;

  // Sign scan of dk/dw, dense around the resonance.
  out.min_group_factor = std::numeric_limits<double>::infinity();
  auto probe = [&](double w) {
    double dk = 0.0;
    wavenumber(w, dk);
    if (dk < out.min_group_factor) {
      out.min_group_factor = dk;
      out.omega_at_min = w;
    }
  };
  const int coarse = 4000;
  for (int i = 1; i <= coarse; ++i) probe(opt.omega_max * i / coarse);
  const double lo = std::max(w0 - 20.0 * g, 1e-6 * w0);
  const double hi = std::sqrt(w0 * w0 + wp2) + 20.0 * g;
  const int fine = 4000;
  for (int i = 0; i <= fine; ++i) probe(lo + (hi - lo) * i / fine);
  out.anomalous_dispersion = out.min_group_factor < 0.0;
  return out;
}

BraceIdentity brace_identity(const Medium& m, double w) {
  const cdouble eps = permittivity(m, w);
  const cdouble deps = permittivity_derivative(m, w);
  const cdouble n = passive_sqrt(eps);
  const cdouble dn = deps / (2.0 * n);
  const double nr = n.real();

  const double t1 = nr * (eps + w * deps).real();
  const double t2 = std::pow(eps, 1.5).real();
  const double t3 = eps.imag() * (2.0 * w * n + w * w * dn).imag() / w;

  BraceIdentity b;
  const double w3 = w * w * w;
  b.brace = kPolarizations * w3 * (t1 + t2 + t3);
  b.reduced = 4.0 * w3 * nr * nr * (nr + w * dn.real());
  const double scale = kPolarizations * w3 * (std::abs(t1) + std::abs(t2) + std::abs(t3));
  b.residual = scale > 0.0 ? std::abs(b.brace - b.reduced) / scale : 0.0;
  return b;
}

double decomposition_density(const Medium& m, const EnergyOptions& opt) {
  require_band(m, opt);
  auto f = [&](double w) { return brace_identity(m, w).brace; };
  return band_integral(m, opt, f).value / (8.0 * kPi2);
}

EnergyReport total_energy_density(const Medium& m, const EnergyOptions& opt) {
  require_band(m, opt);
  EnergyReport r;
  r.medium = m.params();
  r.omega_max = opt.omega_max;
  r.route = opt.route;

  const W1Density w1 = w1_density(m, opt);
  const W2Density w2 = w2_density(m, opt, &w1.secular_panels);
  r.w1_stationary = w1.stationary();
  r.w1_magnetic = w1.magnetic;
  r.w1_secular_coeff = w1.secular;
  r.w2_stationary = w2.stationary;
  r.w2_secular_coeff = w2.secular;
  r.w_total = r.w1_stationary + r.w2_stationary;
  r.w_total_direct = total_density_direct(m, opt);

  const ModeSum ms = mode_sum_density(m, opt);
  r.w_mode_sum = ms.value;
  r.anomalous_dispersion = ms.anomalous_dispersion;
  r.min_group_factor = ms.min_group_factor;
  r.omega_at_min = ms.omega_at_min;

  r.w_decomposition = decomposition_density(m, opt);

  r.cancellation_residual = w1.secular != 0.0 ? std::abs(w1.secular + w2.secular) / std::abs(w1.secular) : 0.0;
  r.identity_residual = std::abs(r.w_total - r.w_mode_sum) / std::abs(r.w_mode_sum);
  r.route_residual = std::abs(r.w_total - r.w_total_direct) / std::abs(r.w_total_direct);
  r.mode_direct_residual = std::abs(r.w_mode_sum - r.w_total_direct) / std::abs(r.w_total_direct);
  r.decomposition_residual = std::abs(r.w_total - r.w_decomposition) / std::abs(r.w_decomposition);

  const int probes = 2000;
  for (int i = 1; i <= probes; ++i) {
    const double w = opt.omega_max * i / probes;
    r.brace_residual_max = std::max(r.brace_residual_max, brace_identity(m, w).residual);
  }
  for (double w : features(m, opt.omega_max)) {
    r.brace_residual_max = std::max(r.brace_residual_max, brace_identity(m, w).residual);
  }
  return r;
}

}  // namespace qdiel
