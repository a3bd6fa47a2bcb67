#pragma once

#include <complex>
#include <vector>

// LAPACK-backed reference solvers, used only by tests as independent oracles
// for the library's tridiagonal eigenvalue and sigma_min code paths.
namespace yspec::testsupport {

using Cplx = std::complex<double>;

// Eigenvalues of a dense n x n complex matrix (row-major), sorted by (Re, Im).
std::vector<Cplx> dense_eigenvalues(std::vector<Cplx> a, int n);

// Eigenvalues of the complex symmetric tridiagonal with diagonal d and
// symmetric off-diagonal e (|e| = |d| - 1), sorted by (Re, Im).
std::vector<Cplx> tridiag_eigenvalues_oracle(const std::vector<Cplx>& d,
                                             const std::vector<Cplx>& e);

// All singular values of a dense n x n complex matrix (row-major), descending.
std::vector<double> dense_singular_values(std::vector<Cplx> a, int n);

// Smallest singular value of (T - z I) for the tridiagonal above.
double tridiag_sigma_min_oracle(const std::vector<Cplx>& d,
                                const std::vector<Cplx>& e, Cplx z);

}  // namespace yspec::testsupport
