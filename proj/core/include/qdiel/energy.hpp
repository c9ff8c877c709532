#pragma once

#include <string>
#include <vector>

#include "qdiel/medium.hpp"
#include "qdiel/quadrature.hpp"

namespace qdiel {

// Zero-temperature, band-limited energy densities (units hbar omega_ref^4 / c^3),
// summed over both polarizations.

enum class KRoute {
  // k-space integrals from their residue closed forms.
  closed_form,
  // k-space integrals by radial quadrature at every frequency node.
  quadrature
};

struct EnergyOptions {
  double omega_max = 50.0;
  QuadSpec quad = {1e-12, 1e-12, 4000, 200.0};
  KRoute route = KRoute::closed_form;
};

struct W1Density {
  // (1/8 pi) sum_lambda int (w eps_R)' S_E dw
  double stationary_electric = 0.0;
  // (1/8 pi) sum_lambda int S_H dw
  double magnetic = 0.0;
  // Coefficient of t: (1/8 pi) sum_lambda int 2 w eps_I S_E dw
  double secular = 0.0;
  double stationary() const noexcept { return stationary_electric + magnetic; }
  // Partition the secular integral converged on.
  std::vector<Panel> secular_panels;
};

struct W2Density {
  double stationary = 0.0;
  double secular = 0.0;
};

// Throws TruncationError unless omega_max >= 2 max(omega0, omega_L).
W1Density w1_density(const Medium& m, const EnergyOptions& opt = {});

/// Langevin-work density. Its k-space factor is the finite part of
/// int d^3k (k^2 - eps w^2)^-1 (see resolvent_k_integral); the delta(w - w')
/// and its derivative are eliminated by antisymmetrising the double integral.
/// With `shared_panels` the secular part is evaluated on that fixed partition
/// (same nodes as W1's secular integral).
W2Density w2_density(const Medium& m, const EnergyOptions& opt = {},
                     const std::vector<Panel>* shared_panels = nullptr);

// (1/2 pi^2) int w^3 n_R^2 (w n_R)' dw
double total_density_direct(const Medium& m, const EnergyOptions& opt = {});

struct ModeSum {
  double value = 0.0;
  // (w n_R)' < 0 somewhere in the band: counting modes with k = n_R w is
  // ill-defined there.
  bool anomalous_dispersion = false;
  double min_group_factor = 0.0;
  double omega_at_min = 0.0;
};

/// 2 (2 pi)^-3 4 pi int k^2 (dk/dw) (w/2) dw, k = Re(w sqrt(eps)).
ModeSum mode_sum_density(const Medium& m, const EnergyOptions& opt = {});

// Sum over polarizations of the integrand brace of W1 + W2,
//   w^3 {n_R (w eps_R)' + Re eps^{3/2} + (1/w) eps_I Im (w^2 sqrt(eps))'},
// and the reduced form 4 w^3 n_R^2 (w n_R)'.
struct BraceIdentity {
  double brace = 0.0;
  double reduced = 0.0;
  // |brace - reduced| / (sum of absolute values of the brace terms)
  double residual = 0.0;
};

BraceIdentity brace_identity(const Medium& m, double omega);

// (1/8 pi^2) sum_lambda int of the brace above: W1 + W2 assembled from the
// brace directly rather than from the W1/W2 integrals.
double decomposition_density(const Medium& m, const EnergyOptions& opt = {});

struct EnergyReport {
  MediumParams medium;
  double omega_max = 0.0;
  double w1_stationary = 0.0;
  double w1_magnetic = 0.0;
  double w1_secular_coeff = 0.0;
  double w2_stationary = 0.0;
  double w2_secular_coeff = 0.0;
  double w_total = 0.0;
  double w_total_direct = 0.0;
  double w_mode_sum = 0.0;
  double w_decomposition = 0.0;
  double cancellation_residual = 0.0;
  // |w_total - w_mode_sum| / w_mode_sum
  double identity_residual = 0.0;
  // |w_total - w_total_direct| / w_total_direct
  double route_residual = 0.0;
  // |w_mode_sum - w_total_direct| / w_total_direct
  double mode_direct_residual = 0.0;
  double decomposition_residual = 0.0;
  double brace_residual_max = 0.0;
  bool anomalous_dispersion = false;
  double min_group_factor = 0.0;
  double omega_at_min = 0.0;
  KRoute route = KRoute::closed_form;
};

EnergyReport total_energy_density(const Medium& m, const EnergyOptions& opt = {});

// omega_max^4 / (8 pi^2): free-field zero-point density below omega_max.
double vacuum_density(double omega_max) noexcept;

}  // namespace qdiel
