#pragma once

#include <complex>
#include <vector>

#include "yspec/potential.hpp"
#include "yspec/solver.hpp"

namespace yspec {

// Second-order central finite-difference discretization of
// -h^2 d^2/dx^2 + V on (-1, 1) with Dirichlet ends: a complex symmetric
// tridiagonal matrix with constant off-diagonal.
struct DiscreteOperator {
  int n = 0;        // interior grid points
  double h = 0.0;   // semiclassical parameter
  double dx = 0.0;  // 2 / (n + 1)
  std::vector<Cplx> diag;
  Cplx off{0.0, 0.0};
  std::vector<double> x;  // grid points -1 + j dx, j = 1..n
};

// Potential sampled with the left-limit convention at breakpoints;
// midpoint_average_at_jumps instead uses (V(x-)+V(x+))/2 at grid points that
// hit a breakpoint (sensitivity control).
DiscreteOperator discretize(const PiecewiseLinearPotential& v, double h, int n,
                            bool midpoint_average_at_jumps = false);

// All eigenvalues of a complex symmetric tridiagonal matrix with constant
// off-diagonal replicated per entry.  Implicit single-shift QR with
// complex-orthogonal rotations (c^2 + s^2 = 1); deflation at
// |e_i| <= eps (|d_i| + |d_{i+1}|).  Throws kQrStagnation beyond 40 n sweeps.
std::vector<Cplx> tridiag_eigenvalues(std::vector<Cplx> d, std::vector<Cplx> e);

// Eigenvalues of the discretized operator, sorted by (Re, Im).
std::vector<Cplx> eig_all(const DiscreteOperator& a);

// Smallest singular value of A - z I by inverse iteration on (A-z)^H (A-z),
// with both inner solves done through one tridiagonal partial-pivot LU of
// (A - z) (the adjoint solve uses conjugation).  Deterministic start vector;
// Givens QR fallback on factorization breakdown.
double sigma_min(const DiscreteOperator& a, Cplx z);

// max_j (|d_j| + 2|off|): infinity-norm scale of the operator, the natural
// reference for resolvent-norm thresholds.
double operator_scale(const DiscreteOperator& a);

// log10 sigma_min(A - z) sampled on a uniform nx x ny grid over the region
// (z at cell centers, row-major, y varying slowest).  threads <= 0 picks the
// hardware concurrency.  Output is identical for every thread count.
struct PseudospectraGrid {
  SearchRegion box;
  int nx = 0, ny = 0;
  std::vector<double> log10_sigma;  // size nx*ny
  double scale = 0.0;               // operator_scale at build time
};

PseudospectraGrid pseudospectra_grid(const DiscreteOperator& a,
                                     const SearchRegion& box, int nx, int ny,
                                     int threads = 0);

}  // namespace yspec
