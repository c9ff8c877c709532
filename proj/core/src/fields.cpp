#include "qdiel/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qdiel/errors.hpp"
#include "qdiel/thermal.hpp"

namespace qdiel {

namespace {

constexpr double kPi2 = M_PI * M_PI;

QuadSpec radial_spec(const QuadSpec& q) {
  QuadSpec r = q;
  r.rel_tol = std::min(q.rel_tol, 1e-12);
  r.abs_tol = std::min(q.abs_tol, 1e-15);
  r.max_subdivisions = std::max(q.max_subdivisions, 4000);
  return r;
}

struct Radial {
  cdouble n;
  cdouble qc;
  cdouble z;
  double cut;
  std::vector<double> points;
};

Radial radial_setup(cdouble eps, double omega, bool require_loss) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("frequency must be finite and > 0, got " + std::to_string(omega));
  }
  Radial r;
  r.n = passive_sqrt(eps);
  if (require_loss && !(r.n.imag() > 0.0)) {
    throw DivergenceError("k-integral diverges for a lossless medium (n_I = 0 at omega = " +
                          std::to_string(omega) + ")");
  }
  r.qc = omega * r.n;
  r.z = eps * omega * omega;
  r.cut = 50.0 * std::max(1.0, std::abs(r.n)) * omega;
  const double qr = r.qc.real();
  const double qi = r.qc.imag();
  for (double s : {-10.0, -1.0, 0.0, 1.0, 10.0}) {
    const double p = qr + s * qi;
    if (p > 0.0 && p < r.cut) r.points.push_back(p);
  }
  return r;
}

// |k^2 - q^2|^2 as |k - q|^2 |k + q|^2; the direct form loses the peak's
// width to cancellation when n_I << n_R.
double modulus2(double k, cdouble q) {
  const double a = k - q.real();
  const double b = k + q.real();
  const double qi2 = q.imag() * q.imag();
  return (a * a + qi2) * (b * b + qi2);
}

// k^2 - conj(q)^2
cdouble conj_gap(double k, cdouble q) {
  const cdouble qc = std::conj(q);
  return (k - qc) * (k + qc);
}

KIntegral electric_k(cdouble eps, double omega, const QuadSpec& q) {
  const Radial r = radial_setup(eps, omega, true);
  const cdouble z = r.z;
  const cdouble qc = r.qc;
  auto f = [qc](double k) { return k * k / modulus2(k, qc); };
  const QuadResult body = integrate(f, 0.0, r.cut, radial_spec(q), r.points);
  const double K = r.cut;
  const cdouble z2 = z * z;
  const double az2 = std::norm(z);
  const double tail = 1.0 / K + 2.0 * z.real() / (3.0 * K * K * K) +
                      (2.0 * z2.real() + az2) / (5.0 * std::pow(K, 5));
  KIntegral out;
  out.quadrature = 4.0 * M_PI * (body.value + tail);
  out.quadrature_error = 4.0 * M_PI * body.error;
  out.closed_form = kPi2 / (omega * r.n.imag());
  return out;
}

KIntegral magnetic_k(cdouble eps, double omega, const QuadSpec& q) {
  const Radial r = radial_setup(eps, omega, true);
  const cdouble z = r.z;
  const double az2 = std::norm(z);
  const cdouble qc = r.qc;
  auto f = [z, az2, qc](double k) { return (2.0 * k * k * z.real() - az2) / modulus2(k, qc); };
  const QuadResult body = integrate(f, 0.0, r.cut, radial_spec(q), r.points);
  const double K = r.cut;
  const cdouble z2 = z * z;
  const cdouble z3 = z2 * z;
  const double tail = 2.0 * z.real() / K + (2.0 * z2.real() + az2) / (3.0 * K * K * K) +
                      (2.0 * z3.real() + 2.0 * az2 * z.real()) / (5.0 * std::pow(K, 5));
  KIntegral out;
  out.quadrature = 4.0 * M_PI * (body.value + tail);
  out.quadrature_error = 4.0 * M_PI * body.error;
  const double nr = r.n.real();
  const double ni = r.n.imag();
  out.closed_form = kPi2 * omega * (nr * nr - 3.0 * ni * ni) / ni;
  return out;
}

}  // namespace

XPCommutatorResult xp_commutator(const Medium& m, double tau, double omega_max_factor) {
  const double w0 = m.omega0();
  const double g = m.gamma();
  if (g >= 2.0 * w0) {
    throw UnsupportedError("xp_commutator: overdamped oscillator (gamma >= 2 omega0) not supported");
  }
  if (!std::isfinite(tau)) throw DomainError("xp_commutator: tau must be finite");
  if (!(omega_max_factor > 1.0)) throw DomainError("xp_commutator: omega_max_factor must be > 1");

  XPCommutatorResult r;
  r.tau = tau;
  r.omega1 = std::sqrt(w0 * w0 - 0.25 * g * g);
  const double at = std::abs(tau);
  r.closed_form_value =
      (std::cos(r.omega1 * tau) - (g / (2.0 * r.omega1)) * std::sin(r.omega1 * at)) *
      std::exp(-0.5 * g * at);

  // w^2 / D = 1 / (w^2 + w0^2) + remainder, remainder = O(w^-4).
  const double w02 = w0 * w0;
  auto remainder = [=](double w) {
    const double w2 = w * w;
    const double a = (w0 - w) * (w0 + w);
    const double d = a * a + g * g * w2;
    return ((3.0 * w02 - g * g) * w2 - w02 * w02) / (d * (w2 + w02)) * std::cos(w * tau);
  };
  const double W = omega_max_factor * w0;
  const int pieces = std::max(1, static_cast<int>(std::ceil(W * at / (16.0 * M_PI))));
  QuadSpec q;
  q.rel_tol = 1e-10;
  q.abs_tol = 1e-12 * pieces;
  q.max_subdivisions = 4000;
  const double points[] = {w0 - 5.0 * g, w0, w0 + 5.0 * g};
  const QuadResult body = integrate_partitioned(remainder, 0.0, W, pieces, q, points);
  const double asymptote = M_PI * std::exp(-w0 * at) / (2.0 * w0);
  r.quadrature_value = (2.0 * g / M_PI) * (body.value + asymptote);
  r.quadrature_error = (2.0 * g / M_PI) * body.error;
  return r;
}

NoiseCorrelator noise_correlator(const Medium& m, double omega, Ordering ordering) {
  const double eps_i = permittivity(m, omega).imag();
  const double nbar = bose_einstein(omega, m.temperature());
  NoiseCorrelator c;
  c.ordering = ordering;
  c.temperature = m.temperature();
  c.omega = omega;
  c.eps_i = eps_i;
  c.amplitude = ordering == Ordering::normal ? 4.0 * eps_i * nbar : 4.0 * eps_i * (nbar + 1.0);
  return c;
}

KIntegral k_integral(const Medium& m, double omega, const QuadSpec& q) {
  return electric_k(permittivity(m, omega), omega, q);
}

KIntegral k_integral(cdouble eps, double omega, const QuadSpec& q) { return electric_k(eps, omega, q); }

KIntegral magnetic_k_integral(const Medium& m, double omega, const QuadSpec& q) {
  return magnetic_k(permittivity(m, omega), omega, q);
}

KIntegral magnetic_k_integral(cdouble eps, double omega, const QuadSpec& q) {
  return magnetic_k(eps, omega, q);
}

ComplexKIntegral resolvent_k_integral(const Medium& m, double omega, const QuadSpec& q) {
  const Radial r = radial_setup(permittivity(m, omega), omega, true);
  const cdouble z = r.z;
  const cdouble qc = r.qc;
  auto re = [z, qc](double k) { return (z * conj_gap(k, qc)).real() / modulus2(k, qc); };
  auto im = [z, qc](double k) { return (z * conj_gap(k, qc)).imag() / modulus2(k, qc); };
  const QuadSpec rs = radial_spec(q);
  const double br = integrate(re, 0.0, r.cut, rs, r.points).value;
  const double bi = integrate(im, 0.0, r.cut, rs, r.points).value;
  const double K = r.cut;
  const cdouble tail = z / K + z * z / (3.0 * K * K * K) + z * z * z / (5.0 * std::pow(K, 5));
  ComplexKIntegral out;
  out.quadrature = 4.0 * M_PI * (cdouble(br, bi) + tail);
  out.closed_form = 2.0 * kPi2 * cdouble(0.0, 1.0) * r.qc;
  return out;
}

ComplexKIntegral resolvent_k_integral_derivative(const Medium& m, double omega, const QuadSpec& q) {
  const cdouble eps = permittivity(m, omega);
  const Radial r = radial_setup(eps, omega, true);
  const cdouble z = r.z;
  const cdouble dz = 2.0 * omega * eps + omega * omega * permittivity_derivative(m, omega);
  // int k^2 / (k^2 - z)^2 dk = (1/2) int dk / (k^2 - z) by parts; the double
  // pole would cancel catastrophically when n_I << n_R.
  const cdouble qc = r.qc;
  auto re = [qc](double k) { return conj_gap(k, qc).real() / modulus2(k, qc); };
  auto im = [qc](double k) { return conj_gap(k, qc).imag() / modulus2(k, qc); };
  const QuadSpec rs = radial_spec(q);
  const double br = integrate(re, 0.0, r.cut, rs, r.points).value;
  const double bi = integrate(im, 0.0, r.cut, rs, r.points).value;
  const double K = r.cut;
  const cdouble tail = 1.0 / K + z / (3.0 * K * K * K) + z * z / (5.0 * std::pow(K, 5));
  ComplexKIntegral out;
  out.quadrature = 2.0 * M_PI * dz * (cdouble(br, bi) + tail);
  const cdouble dn = refractive_index_derivative(m, omega);
  out.closed_form = 2.0 * kPi2 * cdouble(0.0, 1.0) * (r.n + omega * dn);
  return out;
}

double electric_density_closed(const Medium& m, double omega) {
  const double nr = refractive_index(m, omega).n_r;
  return omega * omega * omega * nr / M_PI;
}

double magnetic_density_closed(const Medium& m, double omega) {
  const ComplexIndex n = refractive_index(m, omega);
  return omega * omega * omega * n.n_r * (n.n_r * n.n_r - 3.0 * n.n_i * n.n_i) / M_PI;
}

DensityValue electric_spectral_density(const Medium& m, double omega, const QuadSpec& q) {
  const cdouble eps = permittivity(m, omega);
  const cdouble n = passive_sqrt(eps);
  DensityValue d;
  d.closed_form = electric_density_closed(m, omega);
  if (!(n.imag() > 0.0)) {
    d.via_k_integral = d.closed_form;
    return d;
  }
  const KIntegral k = electric_k(eps, omega, q);
  d.via_k_integral = eps.imag() * std::pow(omega, 4) * k.quadrature / (2.0 * M_PI * kPi2);
  return d;
}

DensityValue magnetic_spectral_density(const Medium& m, double omega, const QuadSpec& q) {
  const cdouble eps = permittivity(m, omega);
  const cdouble n = passive_sqrt(eps);
  const double ni = n.imag();
  DensityValue d;
  d.closed_form = magnetic_density_closed(m, omega);
  if (!(ni > 0.0)) {
    d.via_k_integral = d.closed_form;
    return d;
  }
  const KIntegral k = magnetic_k(eps, omega, q);
  d.via_k_integral = eps.imag() * omega * omega * k.quadrature / (2.0 * M_PI * kPi2);
  return d;
}

}  // namespace qdiel
