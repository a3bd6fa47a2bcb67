#pragma once

#include <array>
#include <complex>
#include <vector>

#include "yspec/airy.hpp"
#include "yspec/potential.hpp"
#include "yspec/scaled.hpp"

namespace yspec {

// Scaled argument w(x) = h^{-2/3} m^{-2/3} (m x + l - lambda) for a segment
// with slope m and offset l, using the principal branch of m^{-2/3}.  With
// this scaling, u(x) = Ai(e^{-2 k pi i/3} w(x)) solves
// -h^2 u'' + (V - lambda) u = 0 on the segment for every k.
Cplx scaled_argument(const Segment& seg, double h, Cplx lambda, double x);

// Basis rotation pair (k1, k2) selected for each segment.
struct BasisChoice {
  std::vector<std::array<int, 2>> k;  // per segment
};

// Select one ordered pair of rotated Airy solutions per segment:
//  - both rotations allowable at both segment endpoints;
//  - at continuous joins, exactly one of the two adjoining second solutions
//    is the k = 0 rotation, so their leading-order derivative factors differ
//    in sign;
//  - among the assignments passing those constraints, the one whose
//    assembled matrix has the largest doubly-normalized |det| at this
//    lambda (see determinant()), i.e. the best-conditioned representation;
//  - deterministic tie-break preferring k = 0, then +1, then -1.
// Throws kNoAllowablePair when some segment has fewer than two allowable
// rotations at an endpoint or the join constraints cannot be satisfied (the
// message suggests perturbing lambda).
BasisChoice choose_basis(const PiecewiseLinearPotential& v, double h, Cplx lambda);

// Deepest log_relative over the same candidate assignments choose_basis
// ranks, evaluated at lambda and floored at -50: the strongest numerical
// vanishing certificate available from the family of representations.  A
// true eigenvalue reads at the cancellation floor of its best-cancelling
// representation, while at a regular point every representation stays at
// its own background level.  (The floors differ per representation: an
// assignment whose interface rows become nearly parallel at this lambda
// loses that parallelism depth from its floor.)  Throws kNoAllowablePair
// exactly as choose_basis does.
double deepest_residual_log(const PiecewiseLinearPotential& v, double h,
                            Cplx lambda);

// Logarithmic value / x-derivative of the basis solution
// u(x) = Ai(e^{-2 k pi i/3} w(x)).  The derivative applies the exact chain
// rule factor e^{-2 k pi i/3} h^{-2/3} m^{1/3} to Ai'.
LogValue basis_value(const Segment& seg, int k, double h, Cplx lambda, double x);
LogValue basis_derivative(const Segment& seg, int k, double h, Cplx lambda, double x);

// Leading-order WKB factor of u'/u: -sqrt(V(x)-lambda) for k = 0 and
// +sqrt(V(x)-lambda) for k = +-1 (principal square root).  Throws
// kTurningPoint when |V(x)-lambda| is at the turning-point scale.
Cplx wkb_derivative_factor(const Segment& seg, int k, Cplx lambda, double x);

// 2n x 2n transmission matrix: boundary rows at x = -1 and x = +1, and for
// each interior breakpoint a value-matching and a derivative-matching row.
// Rows are max-normalized; row_scales stores the removed log factors.
struct AssembledMatrix {
  int n = 0;  // number of segments; matrix is (2n) x (2n)
  std::vector<ScaledComplex> a;  // row-major
  std::vector<double> row_scales;

  ScaledComplex& at(int r, int c) { return a[static_cast<size_t>(r) * (2 * n) + c]; }
  const ScaledComplex& at(int r, int c) const {
    return a[static_cast<size_t>(r) * (2 * n) + c];
  }
};

AssembledMatrix assemble_matrix(const PiecewiseLinearPotential& v, double h,
                                Cplx lambda, const BasisChoice& basis);

// det of the assembled matrix, reported as mantissa * exp(log_scale) with
// |mantissa| in [1, 2) (or 0).  log_relative is the log-magnitude of the
// determinant of the row-normalized matrix: the size of the determinant
// relative to the natural scale of its rows.  singular_to_precision is set
// when log_relative < log(1e-13), i.e. the determinant vanishes to working
// precision.
struct ScaledDeterminant {
  Cplx mantissa{0.0, 0.0};
  double log_scale = 0.0;
  double log_relative = 0.0;
  bool singular_to_precision = false;
};

// Pivoted elimination on the scaled entries (exposed for tests).
ScaledDeterminant determinant(const AssembledMatrix& m);

// Characteristic determinant of -h^2 d^2/dx^2 + V - lambda with Dirichlet
// conditions at +-1.  Zero iff lambda is an eigenvalue (for the fixed basis,
// the determinant is an entire function of lambda).
ScaledDeterminant chardet(const PiecewiseLinearPotential& v, double h, Cplx lambda);
ScaledDeterminant chardet(const PiecewiseLinearPotential& v, double h, Cplx lambda,
                          const BasisChoice& basis);

}  // namespace yspec
