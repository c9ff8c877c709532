#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace qdiel {

struct QuadSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
  // Upper limit used for semi-infinite domains, in units of omega_ref.
  double tail_cut = 200.0;

  // Throws InvariantError naming the first invalid field.
  void validate() const;
};

struct Panel {
  double a;
  double b;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  // Final partition of [a, b], ascending. Lets a second integrand be
  // evaluated on exactly the same nodes (integrate_on_panels).
  std::vector<Panel> panels;
};

using RealFunction = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (10/21) quadrature of f over [a, b].
///
/// `breakpoints` inside (a, b) seed the initial partition; pass the location of
/// any peak narrower than the interval, since a panel whose nodes miss a narrow
/// feature reports a small error. Stops when the summed error estimate is below
/// max(abs_tol, rel_tol * |value|). Throws ConvergenceError (carrying the best
/// estimate) when the subdivision budget runs out, DomainError when a >= b.
QuadResult integrate(const RealFunction& f, double a, double b, const QuadSpec& q = {},
                     std::span<const double> breakpoints = {});

// Integrates [a, b] split into `pieces` equal sub-intervals, each adaptively.
// Used for integrands with many oscillations, where a single adaptive run
// would need more subdivisions than the budget allows.
QuadResult integrate_partitioned(const RealFunction& f, double a, double b, int pieces,
                                 const QuadSpec& q = {},
                                 std::span<const double> breakpoints = {});

// Applies the 21-point Kronrod rule on a fixed partition.
double integrate_on_panels(const RealFunction& f, std::span<const Panel> panels);

// Semi-infinite integral truncated at q.tail_cut.
QuadResult integrate_to_cut(const RealFunction& f, double a, const QuadSpec& q = {},
                            std::span<const double> breakpoints = {});

/// Principal value P int_a^b f(w) / (w - pole) dw for f smooth at the pole, by
/// subtraction:
///   int_a^b [f(w) - f(pole)] / (w - pole) dw + f(pole) ln((b - pole)/(pole - a)).
/// The regular integrand is replaced by f'(pole) (central difference) within a
/// few ulps of the pole. Throws DomainError unless a < pole < b.
QuadResult integrate_pv(const RealFunction& f, double pole, double a, double b,
                        const QuadSpec& q = {}, std::span<const double> breakpoints = {});

// Bound on int_cut^inf of a Lorentzian (gamma/pi)/((w - center)^2 + gamma^2).
double lorentzian_tail_bound(double gamma, double center, double cut);

}  // namespace qdiel
