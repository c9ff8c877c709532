#pragma once

#include <cstddef>
#include <vector>

namespace qdiel {

// Real symmetric arrowhead matrix
//
//   [ apex  g_1  g_2 ... g_N ]
//   [ g_1   d_1              ]
//   [ g_2        d_2         ]
//   [ ...            ...     ]
//   [ g_N                d_N ]
//
// with strictly ascending diagonal d.
struct ArrowheadMatrix {
  double apex = 0.0;
  std::vector<double> diagonal;
  std::vector<double> border;

  std::size_t dimension() const noexcept { return diagonal.size() + 1; }
  // Row-major (N+1) x (N+1) expansion.
  std::vector<double> dense() const;
};

// Eigen-decomposition of an arrowhead matrix. Each eigenvalue is stored as
// lambda_n = diagonal[origin[n]] + offset[n] so that the gaps lambda_n - d_j,
// which determine the eigenvectors, are available to full relative accuracy.
struct ArrowheadSpectrum {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::vector<double> eigenvalues;
  // c_n^2: squared first component of eigenvector n.
  std::vector<double> weights;
  std::vector<std::size_t> origin;
  std::vector<double> offset;
  // Eigenvector n is the unit vector e_{origin+1} (zero coupling).
  std::vector<char> deflated;
  // Border used for the eigenvectors; recomputed from the eigenvalues when the
  // direct vectors are not orthogonal enough.
  std::vector<double> border;
  std::vector<double> diagonal;
  double apex = 0.0;
  double orthogonality_error = 0.0;
  bool border_recomputed = false;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  // lambda_n - d_j.
  double gap(std::size_t n, std::size_t j) const noexcept;
  // Normalized eigenvector n in the basis (apex, d_1, ..., d_N).
  std::vector<double> eigenvector(std::size_t n) const;
};

/// Solves the secular equation
///   F(lambda) = lambda - apex - sum_j g_j^2 / (lambda - d_j) = 0
/// with one safeguarded Newton search per interlacing interval, O(N^2) total.
/// Zero couplings are deflated. Throws DomainError if the diagonal is not
/// strictly ascending or the sizes differ.
ArrowheadSpectrum solve_arrowhead(const ArrowheadMatrix& h);

}  // namespace qdiel
