#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qent/amplitudes.hpp"

namespace qent {

struct ReducedDensity;

/// Real eigenvalues of a Hermitian matrix, sorted descending.
struct Spectrum {
  std::vector<double> values;
  std::size_t dim = 0;
  double sum() const;
};

/// Cyclic complex Jacobi rotations until the off-diagonal Frobenius norm is
/// below 1e-12 of the matrix norm. O(d^3) per sweep. Throws NumericalError if
/// the input is not Hermitian within 1e-10 (relative) or fails to converge.
Spectrum hermitian_eigenvalues(const CMatrix& m);

/// Nonzero spectrum of a positive semidefinite matrix via pivoted Cholesky:
/// m ~ L L^H with L of numerical rank r, then Jacobi on the r x r matrix
/// L^H L. Pivots stop once the largest remaining diagonal is below
/// `tolerance` times the trace; the discarded trace is at most d times that.
Spectrum psd_eigenvalues(const CMatrix& m, double tolerance = 1e-15);

/// -sum lambda log2 lambda over the clamped spectrum. Eigenvalues in
/// [-1e-6, 0) are treated as zero; anything more negative throws NumericalError.
double von_neumann_entropy(const Spectrum& spectrum);
double von_neumann_entropy(const ReducedDensity& rho);

/// Purity-based concurrence sqrt(2 (1 - Tr rho^2)).
double concurrence(const CMatrix& rho);
double concurrence(const ReducedDensity& rho);

/// Maximal entropy (bits) and concurrence of a d-dimensional state.
std::pair<double, double> max_lines(std::size_t d);

}  // namespace qent
