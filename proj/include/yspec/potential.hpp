#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "yspec/complexutil.hpp"

namespace yspec {

// One affine piece V(x) = slope*x + offset on (x_lo, x_hi).
struct Segment {
  double x_lo = 0.0;
  double x_hi = 0.0;
  Cplx slope{0.0, 0.0};
  Cplx offset{0.0, 0.0};

  Cplx at(double x) const { return slope * x + offset; }
};

// A piecewise linear potential on [-1, 1]: segments listed left to right,
// covering the interval without gaps or overlaps.  Validated on construction:
//  - first x_lo = -1, last x_hi = +1, consecutive x_hi == next x_lo (1e-12)
//  - every slope nonzero (|slope| >= 1e-14)
//  - no two adjacent segments continue one straight line (value and slope
//    both matching at the join is rejected as a degenerate join)
class PiecewiseLinearPotential {
 public:
  explicit PiecewiseLinearPotential(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const { return segments_; }
  int size() const { return static_cast<int>(segments_.size()); }
  const Segment& segment(int i) const { return segments_[static_cast<size_t>(i)]; }

  // Interior breakpoints x_1 < ... < x_{n-1}.
  std::vector<double> breakpoints() const;

  // V(x) with the left-limit convention at breakpoints: x belongs to the
  // segment with x <= x_hi.  Direct affine evaluation, no accumulation.
  Cplx evaluate(double x) const;

  // Jump of V across interior breakpoint i (between segment i and i+1):
  // V(x_i+) - V(x_i-).
  Cplx join_jump(int i) const;

  // True when |join_jump(i)| <= tol * (1 + local scale).
  bool is_continuous_join(int i, double tol = 1e-12) const;

 private:
  std::vector<Segment> segments_;
};

// V(x) = i(x - delta) for x < 0, i(x + delta) for x > 0.  Requires delta > 0
// (delta == 0 would make both pieces one straight line).
PiecewiseLinearPotential jump_potential(double delta);

// Two-segment example: slope 2i, offset i on (-1, 0); slope 1+i, offset 0 on
// (0, 1).
PiecewiseLinearPotential figure3_potential();

// Load from JSON: either {"preset": "jump", "delta": d} /
// {"preset": "figure3"} or {"segments": [{"x_lo": .., "x_hi": .., "m_re": ..,
// "m_im": .., "l_re": .., "l_im": ..}, ...]}.
PiecewiseLinearPotential potential_from_json(std::istream& in);
PiecewiseLinearPotential potential_from_json_file(const std::string& path);

// Similarity frame mapping a segment's endpoint values (alpha, beta) in the
// lambda plane to normalized positions -e^{i theta}, +e^{i theta}:
//   local(lambda)  = (lambda - center) / half_span          (translate+scale)
//   theta          = Arg(beta - alpha)
// The frame deliberately does not rotate, so normalized endpoints sit at
// +-e^{i theta} rather than +-1; theta carries the segment direction.
struct SegmentFrame {
  Cplx center;
  double half_span;
  double theta;
};

SegmentFrame segment_frame(Cplx alpha, Cplx beta);  // kBadArgument if alpha == beta
Cplx frame_to_local(const SegmentFrame& f, Cplx lambda);
Cplx frame_from_local(const SegmentFrame& f, Cplx mu);

}  // namespace yspec
