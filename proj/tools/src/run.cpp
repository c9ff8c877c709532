#include "qdiel_cli/run.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <ostream>
#include <sstream>

#include "qdiel/errors.hpp"
#include "qdiel/fields.hpp"
#include "qdiel/medium.hpp"
#include "qdiel/oscillator.hpp"
#include "qdiel/spectral_density.hpp"
#include "qdiel/thermal.hpp"

namespace qdiel::cli {

namespace {

std::string fmt(double v) { return format_double(v); }

std::string label(const MediumParams& p) {
  std::ostringstream os;
  os << "omega0=" << p.omega0 << " omega_p=" << p.omega_p << " gamma=" << p.gamma;
  return os.str();
}

double rel(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// Bisects any step whose change is large; a genuine jump never shrinks.
bool continuous_between(const Medium& m, double a, double b, cdouble na, cdouble nb, int depth) {
  if (std::abs(nb - na) <= 0.1 * std::max(std::abs(na), std::abs(nb))) return true;
  if (depth == 0) return false;
  const double mid = 0.5 * (a + b);
  const cdouble nm = refractive_index(m, mid).value();
  return continuous_between(m, a, mid, na, nm, depth - 1) && continuous_between(m, mid, b, nm, nb, depth - 1);
}

class Output {
public:
  Output(const std::filesystem::path& dir, RunResult& result) : dir_(dir), result_(result) {}
  void write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    write_atomic(path, content);
    result_.files.push_back(path);
  }

private:
  std::filesystem::path dir_;
  RunResult& result_;
};

void run_permittivity(const RunConfig& cfg, Report& rep, Output& out) {
  const Medium m(cfg.medium);
  const auto grid = log_grid(cfg.grid.omega_min, cfg.grid.omega_max, cfg.grid.points);
  std::ostringstream csv;
  csv << "omega,eps_r,eps_i,n_r,n_i\n";
  double passivity = 0.0;
  bool passive = true;
  std::vector<cdouble> n(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid[i];
    const cdouble eps = permittivity(m, w);
    const ComplexIndex idx = refractive_index(m, w);
    n[i] = idx.value();
    passive = passive && eps.imag() > 0.0 && idx.n_i >= 0.0;
    passivity = std::max(passivity, std::abs(n[i] * n[i] - eps) / std::abs(eps));
    csv << fmt(w) << ',' << fmt(eps.real()) << ',' << fmt(eps.imag()) << ',' << fmt(idx.n_r) << ','
        << fmt(idx.n_i) << '\n';
  }
  out.write("permittivity.csv", csv.str());

  bool continuous = true;
  for (std::size_t i = 0; i + 1 < grid.size() && continuous; ++i) {
    continuous = continuous_between(m, grid[i], grid[i + 1], n[i], n[i + 1], 40);
  }

  rep.flag("permittivity: Im eps > 0 and Im n >= 0 on the grid (passivity)", passive);
  rep.check("refractive index: n^2 = eps on the passive branch", passivity, 1e-13);
  rep.flag("refractive index: continuous along the grid (no branch jump)", continuous);
}

void run_dielectric(const RunConfig& cfg, Report& rep, Output& out) {
  const Medium m(cfg.medium);
  const auto grid = log_grid(cfg.grid.omega_min, cfg.grid.omega_max, cfg.grid.points);
  const SpectralDensity se = tabulate_electric(m, grid);
  const SpectralDensity sh = tabulate_magnetic(m, grid);
  bool valid = true;
  try {
    se.validate();
    sh.validate();
  } catch (const InvariantError&) {
    valid = false;
  }
  std::ostringstream e;
  se.write_csv(e);
  out.write("spectra_E.csv", e.str());
  std::ostringstream h;
  sh.write_csv(h);
  out.write("spectra_H.csv", h.str());
  rep.flag("spectral densities: finite on the grid, S_E >= 0", valid);

  double k_res = 0.0;
  double km_res = 0.0;
  double se_res = 0.0;
  double sh_res = 0.0;
  for (double w : log_grid(1e-2, 1e2, 20)) {
    const KIntegral k = k_integral(m, w, cfg.quadrature);
    k_res = std::max(k_res, rel(k.quadrature, k.closed_form));
    const KIntegral km = magnetic_k_integral(m, w, cfg.quadrature);
    km_res = std::max(km_res, rel(km.quadrature, km.closed_form));
    const DensityValue de = electric_spectral_density(m, w, cfg.quadrature);
    se_res = std::max(se_res, rel(de.via_k_integral, de.closed_form));
    const DensityValue dh = magnetic_spectral_density(m, w, cfg.quadrature);
    sh_res = std::max(sh_res, std::abs(dh.via_k_integral - dh.closed_form) /
                                  (std::pow(w, 3) * std::norm(refractive_index(m, w).value()) / M_PI));
  }
  rep.check("k-space integral: residue closed form pi^2/(omega n_I) vs radial quadrature", k_res, 1e-8);
  rep.check("k-space integral with k^2 weight: finite part vs radial quadrature", km_res, 1e-8);
  rep.check("electric spectral density: k-integral route equals omega^3 n_R / pi", se_res, 1e-8);
  rep.check("magnetic spectral density: k-integral route equals (omega^3/pi) Re eps^(3/2)", sh_res, 1e-8);

  double fdt = 0.0;
  for (double T : {0.1, 0.3, 1.0, 3.0, 10.0}) {
    MediumParams p = cfg.medium;
    p.temperature = T;
    const Medium mt(p);
    for (double w : log_grid(0.1, 10.0, 10)) {
      const NoiseCorrelator a = noise_correlator(mt, w, Ordering::normal);
      const NoiseCorrelator b = noise_correlator(mt, w, Ordering::antinormal);
      const double eps_i = permittivity(mt, w).imag();
      const double nbar = 1.0 / (std::exp(w / T) - 1.0);
      fdt = std::max({fdt, rel(a.amplitude, 4.0 * eps_i * nbar), rel(b.amplitude, 4.0 * eps_i * (nbar + 1.0)),
                      rel(b.amplitude - a.amplitude, 4.0 * eps_i)});
    }
  }
  rep.check("fluctuation-dissipation: noise correlators 4 eps_I n and 4 eps_I (n + 1) on 50 (omega, T) points",
            fdt, 1e-12);

  if (m.gamma() >= 2.0 * m.omega0()) {
    rep.info("canonical commutator [x, p]", "skipped: overdamped medium oscillator");
    return;
  }
  const double factor = cfg.quadrature.tail_cut / m.omega0();
  const XPCommutatorResult at0 = xp_commutator(m, 0.0, factor);
  rep.check("canonical commutator [x(t), p(t)] = i hbar preserved by the coupling", std::abs(at0.quadrature_value - 1.0),
            1e-6);
  double xp = 0.0;
  const double span = 10.0 / m.gamma();
  for (int i = 0; i <= 20; ++i) {
    const XPCommutatorResult r = xp_commutator(m, span * i / 20.0, factor);
    xp = std::max(xp, std::abs(r.quadrature_value - r.closed_form_value));
  }
  rep.check("two-time commutator [x(t), p(t')]: closed form vs quadrature over [0, 10/gamma]", xp, 1e-6);
}

void run_oscillator(const RunConfig& cfg, Report& rep, Output& out) {
  const OscillatorModel model(cfg.oscillator);
  const double w0 = model.omega0();
  const double g = model.gamma();

  OscillatorParams bare = cfg.oscillator;
  bare.include_shift = false;
  const double norm_bare = commutator_norm(OscillatorModel(bare), cfg.quadrature);
  const double closed = (0.5 * M_PI + std::atan(w0 / g)) / M_PI;
  rep.check("RWA commutator [a, a^dag]: Lorentzian quadrature vs (1/pi)(pi/2 + arctan(omega0/gamma))",
            std::abs(norm_bare - closed), 1e-6);
  if (model.include_shift()) {
    const double norm_shift = commutator_norm(model, cfg.quadrature);
    rep.check("RWA commutator [a, a^dag] with the frequency shift equals 1", std::abs(norm_shift - 1.0), 1e-6);
  }

  double shift = 0.0;
  for (double s : {0.5, 1.0, 2.0}) {
    const double om = s * w0;
    shift = std::max(shift, rel(frequency_shift_quadrature(model, om, cfg.quadrature), frequency_shift(model, om)));
  }
  rep.check("frequency shift: principal-value quadrature vs (gamma/pi) ln((omega_c - Omega)/Omega)", shift, 1e-8);

  const double low = (0.5 * M_PI - std::atan(w0 / g)) / M_PI;
  const double body = integrate_to_cut(
                          [=](double w) { return (g / M_PI) / ((w - w0) * (w - w0) + g * g); }, 0.0,
                          cfg.quadrature, std::array<double, 1>{w0})
                          .value;
  const double beyond = 1.0 - low - body;
  const double bound = lorentzian_tail_bound(g, w0, cfg.quadrature.tail_cut);
  rep.check("Lorentzian mass beyond tail_cut within its analytic bound", std::max(0.0, beyond - bound) / bound,
            1e-6);

  const DiscretizedBath bath = build_bath(model, cfg.n_modes, cfg.omega_max_bath);
  const double hi = 0.4 * bath.recurrence_time();
  const double lo = 2.0 / g;
  std::vector<double> times;
  const int steps = 24;
  for (int i = 0; i <= steps; ++i) times.push_back(hi * i / steps);
  times.push_back(lo);
  std::sort(times.begin(), times.end());
  const LangevinFanoReport lf = compare_langevin_fano(model, cfg.n_modes, cfg.omega_max_bath, times);

  std::ostringstream csv;
  csv << "t,exact,continuum,exp_gamma,exp_two_gamma,in_window\n";
  for (const DecayRow& r : lf.rows) {
    csv << fmt(r.t) << ',' << fmt(r.exact) << ',' << fmt(r.continuum) << ',' << fmt(r.exp_gamma) << ','
        << fmt(r.exp_two_gamma) << ',' << (r.in_window ? 1 : 0) << '\n';
  }
  out.write("oscillator_compare.csv", csv.str());

  // Past ~10/gamma the survival falls to the 1e-12 algebraic tail, where relative
  // deviations say nothing; compare in absolute terms, |u_0(0)|^2 = 1.
  double survival = 0.0;
  for (const DecayRow& r : lf.rows) {
    if (r.in_window) survival = std::max(survival, std::abs(r.exact - r.continuum));
  }
  rep.flag("Langevin-Fano: window [2/gamma, 0.4 recurrence time] is non-empty", lf.window_lo < lf.window_hi);
  rep.check("Langevin-Fano: exact diagonalisation survival vs continuum Fano survival in the window", survival,
            1e-6);
  rep.info("survival vs continuum, relative", "max_rel_dev=" + format_residual(lf.max_dev_continuum));
  if (model.temperature() > 0.0) {
    rep.check("Langevin-Fano: thermal occupation, exact diagonalisation vs continuum", lf.thermal_dev_routes, 1e-3);
    rep.info("thermal occupation vs 1/(exp(omega0/T) - 1)",
             "exact=" + fmt(lf.thermal_exact) + " bose=" + fmt(lf.thermal_bose) +
                 " rel_dev=" + format_residual(lf.thermal_dev_bose));
  }
  rep.info("survival vs exp(-gamma t)", "max_rel_dev=" + format_residual(lf.max_dev_exp_gamma));
  rep.info("survival vs exp(-2 gamma t)", "max_rel_dev=" + format_residual(lf.max_dev_exp_two_gamma));
  rep.check("Fano eigenvectors orthonormal", lf.orthogonality_error, 1e-10);

  const ArrowheadSpectrum spec = diagonalize(bath);
  double unitarity = 0.0;
  for (double t : {0.0, lo, 0.5 * hi}) {
    unitarity = std::max(unitarity, std::abs(evolve_heisenberg(bath, spec, t).norm() - 1.0));
  }
  rep.check("unitarity: sum_j |u_j(t)|^2 = 1", unitarity, 1e-10);

  const double W = 100.0 * w0;
  const double center = 20.0 / w0;
  const DampingKernelResult dk = damping_kernel_check(model, windowed_sinusoid(w0, center, 5.0 / w0), center, W);
  rep.check("reservoir memory kernel reduces to -gamma xdot (omega_max = 100 omega0)", dk.deviation / (g * w0), 1e-2);

  for (const auto& w : lf.warnings) rep.info("bath", w);
}

std::vector<EnergyReport> energy_reports(const std::vector<MediumParams>& media, const std::vector<double>& bands,
                                         const EnergyOptions& base) {
  std::vector<std::future<EnergyReport>> jobs;
  jobs.reserve(media.size());
  for (std::size_t i = 0; i < media.size(); ++i) {
    EnergyOptions opt = base;
    opt.omega_max = bands[i];
    jobs.push_back(std::async(std::launch::async, [p = media[i], opt] {
      return total_energy_density(Medium(p), opt);
    }));
  }
  std::vector<EnergyReport> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

void energy_checks(const EnergyReport& r, Report& rep) {
  const std::string tag = " [" + label(r.medium) + "]";
  rep.check("secular cancellation: absorption loss vs Langevin work" + tag, r.cancellation_residual, 1e-12);
  rep.check("zero-point equivalence: W1 + W2 vs lossless mode sum" + tag, r.identity_residual, 1e-6);
  rep.check("total energy density: W1 + W2 vs final form with n_R^2 (omega n_R)'" + tag, r.route_residual, 1e-6);
  rep.check("stationary W1 + W2 vs integrated brace decomposition" + tag, r.decomposition_residual, 1e-8);
  rep.check("integrand brace equals 4 n_R^2 (omega n_R)' pointwise" + tag, r.brace_residual_max, 1e-10);
  if (r.anomalous_dispersion) {
    rep.info("anomalous dispersion" + tag,
             "(omega n_R)' min " + fmt(r.min_group_factor) + " at omega=" + fmt(r.omega_at_min));
  }
}

void run_energy(const std::vector<MediumParams>& media, const std::vector<double>& bands, const RunConfig& cfg,
                Report& rep, Output& out, std::ostream& log) {
  const std::vector<EnergyReport> reports = energy_reports(media, bands, cfg.energy);
  std::ostringstream csv;
  csv << energy_csv_header() << '\n';
  for (const EnergyReport& r : reports) {
    csv << energy_csv_row(r) << '\n';
    write_energy_text(log, r);
    energy_checks(r, rep);
  }
  out.write("energy_report.csv", csv.str());
}

void energy_command(const RunConfig& cfg, Report& rep, Output& out, std::ostream& log) {
  std::vector<MediumParams> media{cfg.medium};
  std::vector<double> bands{cfg.energy.omega_max};
  if (cfg.sweep) {
    media.clear();
    bands.clear();
    for (double v : cfg.sweep->values) {
      MediumParams p = cfg.medium;
      double band = cfg.energy.omega_max;
      const std::string& name = cfg.sweep->parameter;
      if (name == "omega0") p.omega0 = v;
      else if (name == "omega_p") p.omega_p = v;
      else if (name == "gamma") p.gamma = v;
      else band = v;
      media.push_back(p);
      bands.push_back(band);
    }
  }
  run_energy(media, bands, cfg, rep, out, log);
}

}  // namespace

std::vector<MediumParams> media_matrix(const MediumParams& base) {
  std::vector<MediumParams> out;
  for (double wp : {0.1, 0.5, 1.0}) {
    for (double g : {0.01, 0.1, 0.5}) {
      MediumParams p = base;
      p.omega_p = wp;
      p.gamma = g;
      out.push_back(p);
    }
  }
  return out;
}

std::string energy_csv_header() {
  return "omega0,omega_p,gamma,omega_max,route,w1_stationary,w1_magnetic,w1_secular_coeff,w2_stationary,"
         "w2_secular_coeff,w_total,w_total_direct,w_mode_sum,w_decomposition,cancellation_residual,"
         "identity_residual,route_residual,decomposition_residual,brace_residual_max,anomalous_dispersion,"
         "min_group_factor,omega_at_min";
}

std::string energy_csv_row(const EnergyReport& r) {
  std::ostringstream os;
  os << fmt(r.medium.omega0) << ',' << fmt(r.medium.omega_p) << ',' << fmt(r.medium.gamma) << ','
     << fmt(r.omega_max) << ',' << (r.route == KRoute::closed_form ? "closed-form" : "quadrature") << ','
     << fmt(r.w1_stationary) << ',' << fmt(r.w1_magnetic) << ',' << fmt(r.w1_secular_coeff) << ','
     << fmt(r.w2_stationary) << ',' << fmt(r.w2_secular_coeff) << ',' << fmt(r.w_total) << ','
     << fmt(r.w_total_direct) << ',' << fmt(r.w_mode_sum) << ',' << fmt(r.w_decomposition) << ','
     << fmt(r.cancellation_residual) << ',' << fmt(r.identity_residual) << ',' << fmt(r.route_residual) << ','
     << fmt(r.decomposition_residual) << ',' << fmt(r.brace_residual_max) << ','
     << (r.anomalous_dispersion ? 1 : 0) << ',' << fmt(r.min_group_factor) << ',' << fmt(r.omega_at_min);
  return os.str();
}

void write_energy_text(std::ostream& os, const EnergyReport& r) {
  os << "energy density  " << label(r.medium) << "  omega_max=" << r.omega_max << '\n'
     << "  W1 stationary      " << fmt(r.w1_stationary) << "  (magnetic part " << fmt(r.w1_magnetic) << ")\n"
     << "  W2 stationary      " << fmt(r.w2_stationary) << '\n'
     << "  W1 secular coeff   " << fmt(r.w1_secular_coeff) << '\n'
     << "  W2 secular coeff   " << fmt(r.w2_secular_coeff) << '\n'
     << "  W total            " << fmt(r.w_total) << '\n'
     << "  W final form       " << fmt(r.w_total_direct) << '\n'
     << "  W mode sum         " << fmt(r.w_mode_sum) << '\n'
     << "  vacuum, same band  " << fmt(vacuum_density(r.omega_max)) << '\n'
     << "  anomalous disp.    " << (r.anomalous_dispersion ? "yes" : "no") << '\n';
}

RunResult run(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec || !std::filesystem::is_directory(cfg.output_dir)) {
    throw ConfigError("output_dir", 0, "output_dir: cannot create " + cfg.output_dir.string());
  }

  RunResult result;
  Output out(cfg.output_dir, result);
  Report& rep = result.report;
  switch (cfg.command) {
    case Command::permittivity:
      run_permittivity(cfg, rep, out);
      break;
    case Command::dielectric:
      run_dielectric(cfg, rep, out);
      break;
    case Command::oscillator:
      run_oscillator(cfg, rep, out);
      break;
    case Command::energy:
      energy_command(cfg, rep, out, log);
      break;
    case Command::verify_all: {
      run_permittivity(cfg, rep, out);
      run_dielectric(cfg, rep, out);
      run_oscillator(cfg, rep, out);
      const auto media = media_matrix(cfg.medium);
      run_energy(media, std::vector<double>(media.size(), cfg.energy.omega_max), cfg, rep, out, log);
      break;
    }
  }

  std::ostringstream text;
  rep.write(text);
  out.write("report.txt", text.str());
  result.status = rep.all_passed() ? 0 : 1;
  return result;
}

}  // namespace qdiel::cli
