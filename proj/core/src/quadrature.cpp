#include "qdiel/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "qdiel/errors.hpp"

namespace qdiel {

namespace {

// Kronrod 21-point abscissae; odd indices are the embedded 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Estimate {
  double a;
  double b;
  double value;
  double error;
  // Roundoff floor of the error estimate, 50 eps int |f|.
  double floor;
};

// QUADPACK qk21 with its error heuristic.
Estimate gauss_kronrod(const RealFunction& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 21> fv{};

  const double fc = f(center);
  double resk = kWgk[10] * fc;
  double resg = 0.0;
  double resabs = std::abs(resk);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv[2 * j] = f1;
    fv[2 * j + 1] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  fv[20] = fc;

  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv[2 * j] - reskh) + std::abs(fv[2 * j + 1] - reskh));
  }

  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double floor = 50.0 * kEps * resabs;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
    err = std::max(floor, err);
  }
  return {a, b, value, err, floor};
}

struct ByError {
  bool operator()(const Estimate& x, const Estimate& y) const { return x.error < y.error; }
};

// Neumaier compensated sum.
class Accumulator {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

bool splittable(const Estimate& e) {
  const double scale = std::max({std::abs(e.a), std::abs(e.b), std::numeric_limits<double>::min()});
  return (e.b - e.a) > 256.0 * kEps * scale;
}

std::vector<double> initial_nodes(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> nodes{a};
  std::vector<double> inner;
  for (double p : breakpoints) {
    if (p > a && p < b && std::isfinite(p)) inner.push_back(p);
  }
  std::sort(inner.begin(), inner.end());
  for (double p : inner) {
    if (p > nodes.back()) nodes.push_back(p);
  }
  if (nodes.back() < b) {
    nodes.push_back(b);
  } else {
    nodes.back() = b;
  }
  return nodes;
}

}  // namespace

void QuadSpec::validate() const {
  if (!(rel_tol > 0.0)) throw InvariantError("rel_tol", "rel_tol must be > 0");
  if (!(abs_tol > 0.0)) throw InvariantError("abs_tol", "abs_tol must be > 0");
  if (max_subdivisions < 10) throw InvariantError("max_subdivisions", "max_subdivisions must be >= 10");
  if (!(tail_cut > 0.0)) throw InvariantError("tail_cut", "tail_cut must be > 0");
}

QuadResult integrate(const RealFunction& f, double a, double b, const QuadSpec& q,
                     std::span<const double> breakpoints) {
  q.validate();
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate: need finite a < b, got [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
  }

  const std::vector<double> nodes = initial_nodes(a, b, breakpoints);
  std::priority_queue<Estimate, std::vector<Estimate>, ByError> open;
  std::vector<Estimate> closed;
  double total = 0.0;
  double total_err = 0.0;
  double total_floor = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    Estimate e = gauss_kronrod(f, nodes[i], nodes[i + 1]);
    total += e.value;
    total_err += e.error;
    total_floor += e.floor;
    open.push(e);
  }
  int subdivisions = static_cast<int>(nodes.size()) - 1;

  // Also stop once the estimate is dominated by its roundoff floor; further
  // bisection cannot lower it.
  auto converged = [&] {
    return total_err <= std::max({q.abs_tol, q.rel_tol * std::abs(total), 2.0 * total_floor});
  };

  while (!open.empty() && !converged()) {
    Estimate worst = open.top();
    open.pop();
    if (!splittable(worst)) {
      closed.push_back(worst);
      continue;
    }
    if (subdivisions >= q.max_subdivisions) {
      open.push(worst);
      Accumulator v;
      Accumulator err;
      while (!open.empty()) {
        v.add(open.top().value);
        err.add(open.top().error);
        open.pop();
      }
      for (const auto& c : closed) {
        v.add(c.value);
        err.add(c.error);
      }
      throw ConvergenceError("integrate: subdivision budget of " +
                                 std::to_string(q.max_subdivisions) + " exhausted on [" +
                                 std::to_string(a) + ", " + std::to_string(b) + "]",
                             v.value(), err.value());
    }
    const double mid = 0.5 * (worst.a + worst.b);
    const Estimate left = gauss_kronrod(f, worst.a, mid);
    const Estimate right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_floor += left.floor + right.floor - worst.floor;
    open.push(left);
    open.push(right);
    ++subdivisions;

    // Incremental updates drift; resynchronise periodically.
    if (subdivisions % 64 == 0) {
      Accumulator v;
      Accumulator err;
      Accumulator fl;
      auto copy = open;
      while (!copy.empty()) {
        v.add(copy.top().value);
        err.add(copy.top().error);
        fl.add(copy.top().floor);
        copy.pop();
      }
      for (const auto& c : closed) {
        v.add(c.value);
        err.add(c.error);
        fl.add(c.floor);
      }
      total = v.value();
      total_err = err.value();
      total_floor = fl.value();
    }
  }

  while (!open.empty()) {
    closed.push_back(open.top());
    open.pop();
  }
  std::sort(closed.begin(), closed.end(), [](const Estimate& x, const Estimate& y) { return x.a < y.a; });

  QuadResult out;
  Accumulator v;
  Accumulator err;
  out.panels.reserve(closed.size());
  for (const auto& c : closed) {
    v.add(c.value);
    err.add(c.error);
    out.panels.push_back({c.a, c.b});
  }
  out.value = v.value();
  out.error = err.value();
  out.subdivisions = subdivisions;
  return out;
}

QuadResult integrate_partitioned(const RealFunction& f, double a, double b, int pieces,
                                 const QuadSpec& q, std::span<const double> breakpoints) {
  if (pieces < 1) throw DomainError("integrate_partitioned: pieces must be >= 1");
  if (!(a < b)) throw DomainError("integrate_partitioned: need a < b");
  QuadSpec local = q;
  local.abs_tol = q.abs_tol / pieces;

  QuadResult out;
  Accumulator v;
  Accumulator err;
  const double width = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + width * i;
    const double hi = (i + 1 == pieces) ? b : a + width * (i + 1);
    const QuadResult piece = integrate(f, lo, hi, local, breakpoints);
    v.add(piece.value);
    err.add(piece.error);
    out.subdivisions += piece.subdivisions;
    out.panels.insert(out.panels.end(), piece.panels.begin(), piece.panels.end());
  }
  out.value = v.value();
  out.error = err.value();
  return out;
}

double integrate_on_panels(const RealFunction& f, std::span<const Panel> panels) {
  Accumulator v;
  for (const Panel& p : panels) v.add(gauss_kronrod(f, p.a, p.b).value);
  return v.value();
}

QuadResult integrate_to_cut(const RealFunction& f, double a, const QuadSpec& q,
                            std::span<const double> breakpoints) {
  if (!(q.tail_cut > a)) {
    throw DomainError("integrate_to_cut: tail_cut must exceed the lower limit");
  }
  return integrate(f, a, q.tail_cut, q, breakpoints);
}

QuadResult integrate_pv(const RealFunction& f, double pole, double a, double b, const QuadSpec& q,
                        std::span<const double> breakpoints) {
  if (!(a < pole && pole < b)) {
    throw DomainError("integrate_pv: pole " + std::to_string(pole) + " outside (" +
                      std::to_string(a) + ", " + std::to_string(b) + ")");
  }
  const double f_pole = f(pole);
  const double scale = std::max(1.0, std::abs(pole));
  const double near = 64.0 * kEps * scale;
  const double h = std::cbrt(kEps) * scale;
  const double slope = (f(pole + h) - f(pole - h)) / (2.0 * h);

  auto regular = [&](double w) {
    const double d = w - pole;
    if (std::abs(d) < near) return slope;
    return (f(w) - f_pole) / d;
  };

  std::vector<double> points(breakpoints.begin(), breakpoints.end());
  points.push_back(pole);
  QuadResult r = integrate(regular, a, b, q, points);
  r.value += f_pole * std::log((b - pole) / (pole - a));
  return r;
}

double lorentzian_tail_bound(double gamma, double center, double cut) {
  if (!(cut > center)) throw DomainError("lorentzian_tail_bound: cut must exceed center");
  return gamma / (M_PI * (cut - center));
}

}  // namespace qdiel
