#pragma once

#include <complex>
#include <vector>

#include "yspec/complexutil.hpp"
#include "yspec/potential.hpp"

namespace yspec {

// Y-shaped limit figure attached to a segment with endpoint values alpha =
// V(x_lo), beta = V(x_hi): two straight arms [alpha, gamma], [beta, gamma]
// meeting at the junction gamma, plus an unbounded curve leaving gamma and
// approaching the horizontal line Im = (Im alpha + Im beta)/2 as Re -> +inf.
// The curve is stored as a polyline truncated at radius r_trunc.
struct YFigure {
  Cplx alpha;
  Cplx beta;
  Cplx gamma;
  SegmentFrame frame;
  std::vector<Cplx> curve;  // curve[0] == gamma exactly
  double asymptote_im = 0.0;
};

// The junction point of the figure for endpoint values (alpha, beta),
// computed from two independent closed forms (one anchored at beta, one at
// alpha) that are cross-checked to 1e-12 relative accuracy.
Cplx gamma_point(Cplx alpha, Cplx beta);

// Defect function whose zero set (away from the two kink rays) is the
// unbounded curve:
//   F(lambda) = Re{(e^{-2 theta i/3}(alpha-lambda))^{3/2}}
//             - Re{(e^{-2 theta i/3}(beta -lambda))^{3/2}}
// with theta = Arg(beta - alpha) and the Re{.^{3/2}} taken in its continuous
// extension across the principal cut.  Exposed for residual tests.
double equal_curve_defect(Cplx alpha, Cplx beta, Cplx lambda);

// Trace the curve from gamma outward until |lambda| >= r_trunc, with vertex
// spacing <= step (absolute; step <= 0 selects 1e-2 * half_span).  Throws
// kTraceStall if neither the forward march nor the backward fallback
// produces a validated polyline.
std::vector<Cplx> trace_equal_curve(Cplx alpha, Cplx beta, double r_trunc,
                                    double step = 0.0);

YFigure y_figure(Cplx alpha, Cplx beta, double r_trunc, double step = 0.0);

// Union of per-segment Y figures for a potential.
struct SpectralSkeleton {
  std::vector<YFigure> figures;
  double r_trunc = 0.0;
};

SpectralSkeleton skeleton(const PiecewiseLinearPotential& v, double r_trunc,
                          double step = 0.0);

// Euclidean distance from lambda to the figure (arms, curve polyline, and the
// horizontal asymptote ray beyond the last curve vertex).
double distance_to_figure(Cplx lambda, const YFigure& fig);

// min over figures; intended for |lambda| <= r_trunc - 1 so truncation cannot
// bias the result.
double distance_to_skeleton(Cplx lambda, const SpectralSkeleton& s);

}  // namespace yspec
