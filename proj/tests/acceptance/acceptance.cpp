#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qdiel/energy.hpp"
#include "qdiel/fields.hpp"
#include "qdiel/medium.hpp"
#include "qdiel/oscillator.hpp"
#include "qdiel/spectral_density.hpp"
#include "qdiel/thermal.hpp"

using namespace qdiel;

namespace {

struct Outcome {
  bool passed = false;
  std::string summary;
  std::vector<std::string> info;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Bisects any step whose change is large; a genuine jump never shrinks.
bool continuous_between(const Medium& m, double a, double b, cdouble na, cdouble nb, int depth) {
  if (std::abs(nb - na) <= 0.1 * std::max(std::abs(na), std::abs(nb))) return true;
  if (depth == 0) return false;
  const double mid = 0.5 * (a + b);
  const cdouble nm = refractive_index(m, mid).value();
  return continuous_between(m, a, mid, na, nm, depth - 1) && continuous_between(m, mid, b, nm, nb, depth - 1);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<MediumParams> matrix() {
  std::vector<MediumParams> out;
  for (double wp : {0.1, 0.5, 1.0}) {
    for (double g : {0.01, 0.1, 0.5}) out.push_back({1.0, wp, g, 0.0});
  }
  return out;
}

Outcome rwa_commutator() {
  const auto t0 = std::chrono::steady_clock::now();
  OscillatorParams p;
  p.gamma = 0.01;
  p.include_shift = false;
  const double value = commutator_norm(OscillatorModel(p));
  const double closed = (0.5 * M_PI + std::atan(100.0)) / M_PI;
  const double dev = std::abs(value - closed);
  const double t = seconds_since(t0);
  Outcome o;
  o.passed = dev <= 1e-6 && t < 1.0;
  o.summary = "RWA commutator norm " + num(value) + " vs (1/pi)(pi/2 + arctan 100) = " + num(closed) +
              ", |dev| " + sci(dev) + " (tol 1e-6), " + num(t) + " s";
  p.include_shift = true;
  o.info.push_back("with the reservoir frequency shift the norm is " + num(commutator_norm(OscillatorModel(p))));
  return o;
}

Outcome canonical_commutator() {
  const auto t0 = std::chrono::steady_clock::now();
  double at_zero = 0.0;
  double along = 0.0;
  for (double g : {0.01, 0.1, 0.5}) {
    const Medium m(MediumParams{1.0, 0.5, g, 0.0});
    at_zero = std::max(at_zero, std::abs(xp_commutator(m, 0.0).quadrature_value - 1.0));
    for (int i = 0; i <= 20; ++i) {
      const XPCommutatorResult r = xp_commutator(m, (10.0 / g) * i / 20.0);
      along = std::max(along, std::abs(r.quadrature_value - r.closed_form_value));
    }
  }
  const double t = seconds_since(t0);
  Outcome o;
  o.passed = at_zero <= 1e-6 && along <= 1e-6 && t < 10.0;
  o.summary = "[x, p] at tau = 0: max |dev| " + sci(at_zero) + "; closed form vs quadrature on [0, 10/gamma]: " +
              sci(along) + " (tol 1e-6), " + num(t) + " s";
  return o;
}

Outcome langevin_fano() {
  const auto t0 = std::chrono::steady_clock::now();
  OscillatorParams p;
  p.gamma = 0.01;
  p.temperature = 1.0;
  const OscillatorModel m(p);
  const double hi = 0.4 * 2.0 * M_PI / (4.0 / 4000);
  std::vector<double> times;
  for (int i = 0; i <= 40; ++i) times.push_back(200.0 + (hi - 200.0) * i / 40.0);
  const LangevinFanoReport r = compare_langevin_fano(m, 4000, 4.0, times);
  const double bose = 1.0 / (std::exp(1.0) - 1.0);
  const double thermal_dev = std::abs(r.thermal_exact / bose - 1.0);
  const double t = seconds_since(t0);

  double abs_continuum = 0.0;
  for (const DecayRow& row : r.rows) abs_continuum = std::max(abs_continuum, std::abs(row.exact - row.continuum));

  Outcome o;
  o.passed = r.max_dev_exp_gamma <= 0.05 && thermal_dev <= 1e-2 && t < 60.0;
  o.summary = "|u0(t)|^2 vs exp(-gamma t) on [" + num(r.window_lo) + ", " + num(r.window_hi) + "]: max rel dev " +
              sci(r.max_dev_exp_gamma) + " (tol 5e-2); <a^dag a> " + num(r.thermal_exact) + " vs 1/(e - 1) = " +
              num(bose) + ", rel dev " + sci(thermal_dev) + " (tol 1e-2), " + num(t) + " s";
  o.info.push_back("vs exp(-2 gamma t), the amplitude decay rate gamma: max rel dev " + sci(r.max_dev_exp_two_gamma));
  for (double ts : {200.0, 400.0, 800.0}) {
    const auto it = std::find_if(r.rows.begin(), r.rows.end(), [&](const DecayRow& d) { return d.t >= ts; });
    if (it == r.rows.end()) continue;
    o.info.push_back("t = " + num(it->t) + ": exact " + sci(it->exact) + ", continuum " + sci(it->continuum) +
                     ", exp(-2 gamma t) " + sci(it->exp_two_gamma) + ", exp(-gamma t) " + sci(it->exp_gamma));
  }
  o.info.push_back("exact vs continuum survival: max abs dev " + sci(abs_continuum) + ", max rel dev " +
                   sci(r.max_dev_continuum) + " (relative loses meaning once the survival reaches the 1e-12 tail)");
  o.info.push_back("thermal occupation, exact " + num(r.thermal_exact) + " vs continuum " + num(r.thermal_continuum) +
                   " (rel dev " + sci(r.thermal_dev_routes) + "); the Lorentzian-weighted occupation is not n(omega0)");
  for (const auto& w : r.warnings) o.info.push_back(w);
  return o;
}

Outcome fluctuation_dissipation() {
  double worst = 0.0;
  int points = 0;
  for (double T : {0.1, 0.3, 1.0, 3.0, 10.0}) {
    const Medium m(MediumParams{1.0, 0.5, 0.1, T});
    for (double w : log_grid(0.1, 10.0, 10)) {
      const double eps_i = permittivity(m, w).imag();
      const double nbar = 1.0 / (std::exp(w / T) - 1.0);
      const double a = noise_correlator(m, w, Ordering::normal).amplitude;
      const double b = noise_correlator(m, w, Ordering::antinormal).amplitude;
      worst = std::max({worst, std::abs(a - 4.0 * eps_i * nbar) / (4.0 * eps_i * nbar),
                        std::abs(b - 4.0 * eps_i * (nbar + 1.0)) / (4.0 * eps_i * (nbar + 1.0)),
                        std::abs((b - a) - 4.0 * eps_i) / (4.0 * eps_i)});
      ++points;
    }
  }
  Outcome o;
  o.passed = worst <= 1e-12 && points == 50;
  o.summary = "noise correlators 4 eps_I n, 4 eps_I (n + 1), difference 4 eps_I on " + std::to_string(points) +
              " (omega, T) points: max rel dev " + sci(worst) + " (tol 1e-12)";
  return o;
}

Outcome k_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  const Medium m(MediumParams{1.0, 0.5, 0.1, 0.0});
  double k_dev = 0.0;
  double s_dev = 0.0;
  for (double w : log_grid(1e-2, 1e2, 20)) {
    const KIntegral k = k_integral(m, w);
    k_dev = std::max(k_dev, std::abs(k.quadrature / k.closed_form - 1.0));
    const DensityValue s = electric_spectral_density(m, w);
    const double target = std::pow(w, 3) * refractive_index(m, w).n_r / M_PI;
    s_dev = std::max(s_dev, std::abs(s.via_k_integral / target - 1.0));
  }
  const double t = seconds_since(t0);
  Outcome o;
  o.passed = k_dev <= 1e-8 && s_dev <= 1e-8 && t < 10.0;
  o.summary = "k-integral pi^2/(omega n_I) vs radial quadrature on 20 log points: max rel dev " + sci(k_dev) +
              "; S_E vs omega^3 n_R / pi: " + sci(s_dev) + " (tol 1e-8), " + num(t) + " s";
  return o;
}

Outcome secular_cancellation() {
  double shared = 0.0;
  double independent = 0.0;
  for (const MediumParams& p : matrix()) {
    const Medium m(p);
    const W1Density w1 = w1_density(m);
    const W2Density on_nodes = w2_density(m, {}, &w1.secular_panels);
    const W2Density own = w2_density(m);
    shared = std::max(shared, std::abs(w1.secular + on_nodes.secular) / std::abs(w1.secular));
    independent = std::max(independent, std::abs(w1.secular + own.secular) / std::abs(w1.secular));
  }
  Outcome o;
  o.passed = shared <= 1e-8 && independent <= 1e-8;
  o.summary = "|w1_secular + w2_secular| / |w1_secular| over 9 media: shared nodes " + sci(shared) +
              ", independent nodes " + sci(independent) + " (tol 1e-8)";
  return o;
}

Outcome zero_point() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::future<EnergyReport>> jobs;
  for (const MediumParams& p : matrix()) {
    jobs.push_back(std::async(std::launch::async, [p] { return total_energy_density(Medium(p)); }));
  }
  double identity = 0.0;
  double brace = 0.0;
  Outcome o;
  for (auto& j : jobs) {
    const EnergyReport r = j.get();
    identity = std::max(identity, r.identity_residual);
    brace = std::max(brace, r.brace_residual_max);
    if (r.anomalous_dispersion) {
      o.info.push_back("omega_p " + num(r.medium.omega_p) + ", gamma " + num(r.medium.gamma) +
                       ": (omega n_R)' < 0 in the band (min " + num(r.min_group_factor) + ")");
    }
  }
  const double t = seconds_since(t0);
  o.passed = identity <= 1e-6 && brace <= 1e-10 && t < 30.0;
  o.summary = "W1 + W2 vs mode sum at omega_max = 50 over 9 media: max rel dev " + sci(identity) +
              " (tol 1e-6); brace vs 4 n_R^2 (omega n_R)': " + sci(brace) + " (tol 1e-10), " + num(t) + " s";
  return o;
}

Outcome properties() {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  bool continuous = true;
  for (int trial = 0; trial < 20 && continuous; ++trial) {
    const Medium m(MediumParams{1.0, 3.0 * u(rng), 1e-3 + u(rng), 0.0});
    double w = 1e-3;
    cdouble prev = refractive_index(m, w).value();
    while (w < 1e3 && continuous) {
      const double next = w * 1.002;
      const cdouble n = refractive_index(m, next).value();
      if (n.imag() < 0.0 || !continuous_between(m, w, next, prev, n, 40)) continuous = false;
      prev = n;
      w = next;
    }
  }

  double unitarity = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    OscillatorParams p;
    p.gamma = 1e-3 + 0.099 * u(rng);
    const DiscretizedBath bath = build_bath(OscillatorModel(p), 500 + 500 * trial, 4.0);
    const ArrowheadSpectrum s = diagonalize(bath);
    for (int k = 0; k < 3; ++k) {
      const double t = 0.5 * bath.recurrence_time() * u(rng);
      unitarity = std::max(unitarity, std::abs(evolve_heisenberg(bath, s, t).norm() - 1.0));
    }
  }

  double antisym = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double pole = 4.0 * u(rng) - 2.0;
    const double a = pole - 0.1 - 3.0 * u(rng);
    const double b = pole + 0.1 + 3.0 * u(rng);
    auto f = [](double w) { return std::exp(0.3 * w) + w * w; };
    auto g = [&](double w) { return f(-w); };
    const double x = integrate_pv(f, pole, a, b).value;
    const double y = integrate_pv(g, -pole, -b, -a).value;
    antisym = std::max(antisym, std::abs(x + y) / (1.0 + std::abs(x)));
  }

  const Medium m(MediumParams{1.0, 0.5, 0.1, 0.5});
  const auto grid = log_grid(0.01, 100.0, 400);
  auto render = [&] {
    std::ostringstream os;
    tabulate_electric(m, grid).write_csv(os);
    tabulate_magnetic(m, grid).write_csv(os);
    tabulate_noise(m, grid, Ordering::normal).write_csv(os);
    return os.str();
  };
  auto parallel = std::async(std::launch::async, render);
  const std::string first = render();
  const bool deterministic = first == render() && first == parallel.get();

  Outcome o;
  o.passed = continuous && unitarity <= 1e-10 && antisym <= 1e-9 && deterministic;
  o.summary = std::string("n(omega) branch continuity ") + (continuous ? "ok" : "broken") + "; unitarity " +
              sci(unitarity) + " (tol 1e-10); PV antisymmetry " + sci(antisym) + " (tol 1e-9); CSV " +
              (deterministic ? "byte-identical" : "differs");
  o.info.push_back("infinite-band zero-point totals diverge as omega_max^4 and are compared only band-limited");
  return o;
}

const std::vector<std::function<Outcome()>>& criteria() {
  static const std::vector<std::function<Outcome()>> all = {
      rwa_commutator, canonical_commutator, langevin_fano, fluctuation_dissipation,
      k_identity,     secular_cancellation, zero_point,    properties};
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) {
    if (only != 0 && i != only) continue;
    Outcome o;
    try {
      o = criteria()[static_cast<std::size_t>(i - 1)]();
    } catch (const std::exception& e) {
      o.passed = false;
      o.summary = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d: %s\n", o.passed ? "PASS" : "FAIL", i, o.summary.c_str());
    for (const auto& line : o.info) std::printf("  info: %s\n", line.c_str());
    if (!o.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
