#include "qdiel/arrowhead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qdiel/errors.hpp"

namespace qdiel {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Root {
  double value;
  std::size_t origin;
  double offset;
  bool deflated;
};

// Secular function on the active (non-deflated) indices, parameterised by the
// offset from pole `o`.
class Secular {
public:
  Secular(double apex, const std::vector<double>& d, const std::vector<double>& g2,
          const std::vector<std::size_t>& active)
      : apex_(apex), d_(d), g2_(g2), active_(active) {}

  struct Eval {
    double f;
    double df;
    double scale;
  };

  Eval at(std::size_t o, double delta) const {
    const double base = d_[o];
    double sum = 0.0;
    double dsum = 0.0;
    double mag = 0.0;
    for (std::size_t k : active_) {
      const double gap = delta + (base - d_[k]);
      const double t = g2_[k] / gap;
      sum += t;
      dsum += t / gap;
      mag += std::abs(t);
    }
    const double lin = delta + (base - apex_);
    return {lin - sum, 1.0 + dsum, std::abs(delta) + std::abs(base - apex_) + mag};
  }

  // Root of F in the offset bracket (lo, hi) around pole o; F(lo) < 0 < F(hi).
  double solve(std::size_t o, double lo, double hi, double guess) const {
    double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
    const double tol_f = 8.0 * kEps * static_cast<double>(active_.size() + 2);
    for (int it = 0; it < 400; ++it) {
      const Eval e = at(o, x);
      if (e.f == 0.0 || std::abs(e.f) <= tol_f * e.scale) return x;
      if (e.f < 0.0) {
        lo = x;
      } else {
        hi = x;
      }
      if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi))) return 0.5 * (lo + hi);
      double next = x - e.f / e.df;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= kEps * std::abs(x)) return next;
      x = next;
    }
    return x;
  }

private:
  double apex_;
  const std::vector<double>& d_;
  const std::vector<double>& g2_;
  const std::vector<std::size_t>& active_;
};

double weight_for(const ArrowheadSpectrum& s, std::size_t n, const std::vector<std::size_t>& active) {
  double sum = 1.0;
  for (std::size_t j : active) {
    const double r = s.border[j] / s.gap(n, j);
    sum += r * r;
  }
  return 1.0 / sum;
}

void assign_weights(ArrowheadSpectrum& s, const std::vector<std::size_t>& active) {
  for (std::size_t n = 0; n < s.size(); ++n) {
    s.weights[n] = s.deflated[n] ? 0.0 : weight_for(s, n, active);
  }
}

// Largest deviation from orthonormality seen in the row norms and in the
// inner products of neighbouring eigenvectors.
double orthogonality_defect(const ArrowheadSpectrum& s, const std::vector<std::size_t>& active) {
  double worst = 0.0;
  double row0 = 0.0;
  for (double w : s.weights) row0 += w;
  worst = std::abs(row0 - 1.0);

  for (std::size_t j : active) {
    double row = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
      if (s.deflated[n]) continue;
      const double r = s.border[j] / s.gap(n, j);
      row += s.weights[n] * r * r;
    }
    worst = std::max(worst, std::abs(row - 1.0));
  }

  std::size_t prev = ArrowheadSpectrum::npos;
  for (std::size_t n = 0; n < s.size(); ++n) {
    if (s.deflated[n]) continue;
    if (prev != ArrowheadSpectrum::npos) {
      double dot = 1.0;
      for (std::size_t j : active) {
        dot += s.border[j] * s.border[j] / (s.gap(prev, j) * s.gap(n, j));
      }
      worst = std::max(worst, std::abs(dot) * std::sqrt(s.weights[prev] * s.weights[n]));
    }
    prev = n;
  }
  return worst;
}

// Border vector for which the computed eigenvalues are exact (Loewner formula):
//   g_j^2 = -prod_n (d_j - lambda_n) / prod_{k != j} (d_j - d_k).
void recompute_border(ArrowheadSpectrum& s, const std::vector<std::size_t>& active) {
  std::vector<double> fresh = s.border;
  for (std::size_t j : active) {
    double log_mag = 0.0;
    int sign = -1;
    for (std::size_t n = 0; n < s.size(); ++n) {
      if (s.deflated[n]) continue;
      const double t = -s.gap(n, j);
      log_mag += std::log(std::abs(t));
      if (t < 0.0) sign = -sign;
    }
    for (std::size_t k : active) {
      if (k == j) continue;
      const double t = s.diagonal[j] - s.diagonal[k];
      log_mag -= std::log(std::abs(t));
      if (t < 0.0) sign = -sign;
    }
    if (sign > 0) {
      const double mag = std::exp(0.5 * log_mag);
      fresh[j] = std::copysign(mag, s.border[j]);
    }
  }
  s.border = std::move(fresh);
  s.border_recomputed = true;
}

}  // namespace

std::vector<double> ArrowheadMatrix::dense() const {
  const std::size_t n = dimension();
  std::vector<double> m(n * n, 0.0);
  m[0] = apex;
  for (std::size_t j = 0; j < diagonal.size(); ++j) {
    m[(j + 1) * n + (j + 1)] = diagonal[j];
    m[j + 1] = border[j];
    m[(j + 1) * n] = border[j];
  }
  return m;
}

double ArrowheadSpectrum::gap(std::size_t n, std::size_t j) const noexcept {
  if (origin[n] == npos) return eigenvalues[n] - diagonal[j];
  return offset[n] + (diagonal[origin[n]] - diagonal[j]);
}

std::vector<double> ArrowheadSpectrum::eigenvector(std::size_t n) const {
  std::vector<double> v(diagonal.size() + 1, 0.0);
  if (deflated[n]) {
    v[origin[n] + 1] = 1.0;
    return v;
  }
  const double c = std::sqrt(weights[n]);
  v[0] = c;
  for (std::size_t j = 0; j < diagonal.size(); ++j) {
    if (border[j] != 0.0) v[j + 1] = c * border[j] / gap(n, j);
  }
  return v;
}

ArrowheadSpectrum solve_arrowhead(const ArrowheadMatrix& h) {
  const std::size_t n = h.diagonal.size();
  if (h.border.size() != n) {
    throw DomainError("solve_arrowhead: border has " + std::to_string(h.border.size()) +
                      " entries, diagonal has " + std::to_string(n));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(h.diagonal[j]) || !std::isfinite(h.border[j])) {
      throw DomainError("solve_arrowhead: non-finite entry at index " + std::to_string(j));
    }
    if (j > 0 && !(h.diagonal[j] > h.diagonal[j - 1])) {
      throw DomainError("solve_arrowhead: diagonal must be strictly ascending");
    }
  }
  if (!std::isfinite(h.apex)) throw DomainError("solve_arrowhead: non-finite apex");

  std::vector<double> g2(n);
  std::vector<std::size_t> active;
  std::vector<Root> roots;
  double norm_g2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    g2[j] = h.border[j] * h.border[j];
    if (h.border[j] == 0.0) {
      roots.push_back({h.diagonal[j], j, 0.0, true});
    } else {
      active.push_back(j);
      norm_g2 += g2[j];
    }
  }

  const Secular sec(h.apex, h.diagonal, g2, active);

  if (active.empty()) {
    roots.push_back({h.apex, ArrowheadSpectrum::npos, h.apex, false});
  } else {
    const double norm_g = std::sqrt(norm_g2);
    const std::size_t first = active.front();
    const std::size_t last = active.back();

    // Below the first pole.
    {
      const double bound = std::min(h.apex, h.diagonal[first]) - norm_g;
      const double lo = (bound - h.diagonal[first]) * (1.0 + 4.0 * kEps) - kEps;
      const double off = sec.solve(first, lo, 0.0, 0.5 * lo);
      roots.push_back({h.diagonal[first] + off, first, off, false});
    }

    for (std::size_t a = 0; a + 1 < active.size(); ++a) {
      const std::size_t left = active[a];
      const std::size_t right = active[a + 1];
      const double half = 0.5 * (h.diagonal[right] - h.diagonal[left]);
      const auto mid = sec.at(left, half);
      double off;
      std::size_t o;
      if (mid.f >= 0.0) {
        o = left;
        const double rest = mid.f + g2[left] / half;
        const double guess = rest > 0.0 ? g2[left] / rest : 0.5 * half;
        off = mid.f == 0.0 ? half : sec.solve(left, 0.0, half, guess);
      } else {
        o = right;
        const auto m2 = sec.at(right, -half);
        const double rest = m2.f - g2[right] / half;
        const double guess = rest < 0.0 ? g2[right] / rest : -0.5 * half;
        off = sec.solve(right, -half, 0.0, guess);
      }
      roots.push_back({h.diagonal[o] + off, o, off, false});
    }

    // Above the last pole.
    {
      const double bound = std::max(h.apex, h.diagonal[last]) + norm_g;
      const double hi = (bound - h.diagonal[last]) * (1.0 + 4.0 * kEps) + kEps;
      const double off = sec.solve(last, 0.0, hi, 0.5 * hi);
      roots.push_back({h.diagonal[last] + off, last, off, false});
    }
  }

  std::stable_sort(roots.begin(), roots.end(),
                   [](const Root& x, const Root& y) { return x.value < y.value; });

  ArrowheadSpectrum s;
  s.apex = h.apex;
  s.diagonal = h.diagonal;
  s.border = h.border;
  const std::size_t m = roots.size();
  s.eigenvalues.resize(m);
  s.weights.resize(m);
  s.origin.resize(m);
  s.offset.resize(m);
  s.deflated.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    s.eigenvalues[k] = roots[k].value;
    s.origin[k] = roots[k].origin;
    s.offset[k] = roots[k].offset;
    s.deflated[k] = roots[k].deflated ? 1 : 0;
  }

  assign_weights(s, active);
  s.orthogonality_error = orthogonality_defect(s, active);
  if (s.orthogonality_error > 1e-10 && !active.empty()) {
    ArrowheadSpectrum alt = s;
    recompute_border(alt, active);
    assign_weights(alt, active);
    alt.orthogonality_error = orthogonality_defect(alt, active);
    if (alt.orthogonality_error < s.orthogonality_error) s = std::move(alt);
  }
  return s;
}

}  // namespace qdiel
