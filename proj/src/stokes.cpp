#include "yspec/stokes.hpp"

#include <algorithm>
#include <cmath>

#include "yspec/errors.hpp"

namespace yspec {
namespace {

const double kSqrt3 = std::sqrt(3.0);

// Angular tolerance below which the curve is emitted as an exact horizontal
// ray: for theta = 0 the curve is {beta + t, t >= 0} and for theta = pi it is
// {gamma + t, t >= 0}, both exactly.
constexpr double kStraightTol = 1e-12;

// Normalized-frame defect with endpoints at -e^{i theta}, +e^{i theta}.
struct LocalDefect {
  Cplx an, bn, rot;

  explicit LocalDefect(double theta)
      : an(-unit_phase(theta)), bn(unit_phase(theta)),
        rot(unit_phase(-2.0 * theta / 3.0)) {}

  double operator()(Cplx mu) const {
    return re_pow_3_2(rot * (an - mu)) - re_pow_3_2(rot * (bn - mu));
  }
};

// Bisect f over [s_lo, s_hi] (f(s_lo), f(s_hi) of opposite sign) until
// |f| <= f_tol at the midpoint or the interval is resolved to machine scale.
template <typename F>
double bisect(const F& f, double s_lo, double s_hi, double f_lo, double f_tol) {
  double mid = 0.5 * (s_lo + s_hi);
  for (int it = 0; it < 80; ++it) {
    mid = 0.5 * (s_lo + s_hi);
    double fm = f(mid);
    if (std::fabs(fm) <= f_tol) return mid;
    if ((fm < 0) == (f_lo < 0)) {
      s_lo = mid;
      f_lo = fm;
    } else {
      s_hi = mid;
    }
    if (s_hi - s_lo <= 1e-16 * (std::fabs(s_lo) + std::fabs(s_hi) + 1e-300))
      break;
  }
  return mid;
}

struct Stepper {
  const LocalDefect& fn;
  double f_tol;  // local-units residual target for the corrector

  // One predictor-corrector step of length r from cur along dir: corrects
  // along the normal through the predicted point.  Returns false when no
  // sign change lies within the corrector window.
  bool advance(Cplx cur, Cplx dir, double r, Cplx* out) const {
    Cplx pred = cur + r * dir;
    Cplx nrm = dir * Cplx(0.0, 1.0);
    const int m = 12;
    double w = 0.75 * r;
    double prev_s = -w;
    double prev_f = fn(pred + prev_s * nrm);
    for (int i = 1; i <= m; ++i) {
      double s = -w + 2.0 * w * i / m;
      double fs = fn(pred + s * nrm);
      if ((fs < 0) != (prev_f < 0) || fs == 0.0) {
        double s_root = (fs == 0.0)
                            ? s
                            : bisect([&](double t) { return fn(pred + t * nrm); },
                                     prev_s, s, prev_f, f_tol);
        *out = pred + s_root * nrm;
        return true;
      }
      prev_s = s;
      prev_f = fs;
    }
    return false;
  }
};

struct TraceFrame {
  SegmentFrame frame;
  Cplx gamma;    // original coordinates
  Cplx gamma_n;  // normalized
  double step_n;
  double r_stop;  // original-coordinate truncation radius

  Cplx denorm(Cplx mu) const { return frame_from_local(frame, mu); }
  bool beyond(Cplx mu) const { return std::abs(denorm(mu)) >= r_stop; }
};

// Forward march from gamma.  Returns false when the march stalls or exits on
// the wrong side; the caller then falls back to the backward trace.
bool trace_forward(const TraceFrame& tf, const LocalDefect& fn,
                   std::vector<Cplx>* out_local) {
  Stepper st{fn, 1e-13};
  std::vector<Cplx>& pts = *out_local;
  pts.clear();
  pts.push_back(tf.gamma_n);

  Cplx cur = tf.gamma_n;
  Cplx dir{1.0, 0.0};  // the curve leaves the junction toward +Re
  const size_t max_steps = 400000;
  int warmup = 6;  // shorter first steps: curvature is largest at the junction

  while (!tf.beyond(cur)) {
    if (pts.size() > max_steps) return false;
    double r = warmup > 0 ? 0.25 * tf.step_n : tf.step_n;
    bool ok = false;
    Cplx nxt;
    for (int halving = 0; halving < 10 && !ok; ++halving, r *= 0.5) {
      Cplx cand;
      if (!st.advance(cur, dir, r, &cand)) continue;
      Cplx nd = (cand - cur) / std::abs(cand - cur);
      // keep the tangent coherent; anything sharper than ~78 degrees is a
      // branch hop or a kink artifact -> shorten the step
      if (nd.real() * dir.real() + nd.imag() * dir.imag() < 0.2) continue;
      nxt = cand;
      dir = nd;
      ok = true;
    }
    if (!ok) return false;
    cur = nxt;
    pts.push_back(cur);
    if (warmup > 0) --warmup;
  }
  return true;
}

// Backward fallback: pick the curve up on the vertical line through
// Re = r_stop * 1.02 (original units), march toward the junction, close with
// gamma, and reverse.
bool trace_backward(const TraceFrame& tf, const LocalDefect& fn,
                    std::vector<Cplx>* out_local) {
  const double x0 =
      (1.02 * tf.r_stop - tf.frame.center.real()) / tf.frame.half_span;
  // On this line the curve sits near the asymptote, which maps to the local
  // real axis; bracket the sign change nearest to it.
  double best_lo = 0.0, best_hi = 0.0, best_flo = 0.0;
  bool found = false;
  const int m = 160;
  const double w = 2.0;
  double prev_s = -w, prev_f = fn(Cplx(x0, prev_s));
  for (int i = 1; i <= m; ++i) {
    double s = -w + 2.0 * w * i / m;
    double fs = fn(Cplx(x0, s));
    if ((fs < 0) != (prev_f < 0)) {
      if (!found || std::fabs(0.5 * (prev_s + s)) <
                        std::fabs(0.5 * (best_lo + best_hi))) {
        best_lo = prev_s;
        best_hi = s;
        best_flo = prev_f;
        found = true;
      }
    }
    prev_s = s;
    prev_f = fs;
  }
  if (!found) return false;
  double s0 = bisect([&](double t) { return fn(Cplx(x0, t)); }, best_lo,
                     best_hi, best_flo, 1e-13);

  Stepper st{fn, 1e-13};
  std::vector<Cplx> rev;
  Cplx cur(x0, s0);
  rev.push_back(cur);
  Cplx dir{-1.0, 0.0};
  const size_t max_steps = 400000;
  while (std::abs(cur - tf.gamma_n) > 1.5 * tf.step_n) {
    if (rev.size() > max_steps) return false;
    double r = std::min(tf.step_n, 0.5 * std::abs(cur - tf.gamma_n));
    bool ok = false;
    Cplx nxt;
    for (int halving = 0; halving < 10 && !ok; ++halving, r *= 0.5) {
      Cplx cand;
      if (!st.advance(cur, dir, r, &cand)) continue;
      Cplx nd = (cand - cur) / std::abs(cand - cur);
      if (nd.real() * dir.real() + nd.imag() * dir.imag() < 0.2) continue;
      nxt = cand;
      dir = nd;
      ok = true;
    }
    if (!ok) return false;
    cur = nxt;
    rev.push_back(cur);
  }
  rev.push_back(tf.gamma_n);
  std::reverse(rev.begin(), rev.end());
  // drop interior points already beyond the truncation radius, keep one past
  size_t keep = rev.size();
  for (size_t i = 1; i < rev.size(); ++i) {
    if (tf.beyond(rev[i])) {
      keep = i + 1;
      break;
    }
  }
  rev.resize(keep);
  *out_local = std::move(rev);
  return true;
}

std::vector<Cplx> horizontal_ray(Cplx gamma, double r_trunc, double step) {
  std::vector<Cplx> pts{gamma};
  Cplx cur = gamma;
  while (std::abs(cur) < r_trunc) {
    cur += step;
    pts.push_back(cur);
  }
  return pts;
}

double point_segment_distance(Cplx p, Cplx a, Cplx b) {
  Cplx ab = b - a;
  double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

}  // namespace

Cplx gamma_point(Cplx alpha, Cplx beta) {
  SegmentFrame f = segment_frame(alpha, beta);
  double th = f.theta;
  double a3 = std::fabs(th) / 3.0;
  double sgn = th >= 0 ? 1.0 : -1.0;
  Cplx dir_b = unit_phase(2.0 * th / 3.0 - sgn * 2.0 * kPi / 3.0);
  Cplx dir_a = unit_phase(2.0 * th / 3.0);
  Cplx g1 = beta + f.half_span * (4.0 / kSqrt3) * std::sin(a3) * dir_b;
  Cplx g2 =
      alpha + f.half_span * (4.0 / kSqrt3) * std::sin(2.0 * kPi / 3.0 + a3) * dir_a;
  double scale = 1.0 + std::abs(g1) + f.half_span;
  if (std::abs(g1 - g2) > 1e-12 * scale)
    fail(ErrorKind::kNoConvergence, "junction closed forms disagree");
  return 0.5 * (g1 + g2);
}

double equal_curve_defect(Cplx alpha, Cplx beta, Cplx lambda) {
  double theta = std::arg(beta - alpha);
  Cplx rot = unit_phase(-2.0 * theta / 3.0);
  return re_pow_3_2(rot * (alpha - lambda)) - re_pow_3_2(rot * (beta - lambda));
}

std::vector<Cplx> trace_equal_curve(Cplx alpha, Cplx beta, double r_trunc,
                                    double step) {
  SegmentFrame f = segment_frame(alpha, beta);
  if (!(r_trunc > std::abs(alpha) + 1.0 && r_trunc > std::abs(beta) + 1.0))
    fail(ErrorKind::kBadArgument, "trace: r_trunc must exceed the endpoints");
  if (step <= 0.0) step = 1e-2 * f.half_span;

  // Mirror symmetry: the defect satisfies F_{a*,b*}(conj mu) = F_{a,b}(mu),
  // so negative-theta figures are traced as the conjugate of their mirror.
  if (f.theta < 0.0) {
    std::vector<Cplx> pts =
        trace_equal_curve(std::conj(alpha), std::conj(beta), r_trunc, step);
    for (Cplx& p : pts) p = std::conj(p);
    return pts;
  }

  Cplx gamma = gamma_point(alpha, beta);
  if (f.theta <= kStraightTol || kPi - f.theta <= kStraightTol)
    return horizontal_ray(gamma, r_trunc, step);

  TraceFrame tf{f, gamma, frame_to_local(f, gamma), step / f.half_span, r_trunc};
  LocalDefect fn(f.theta);

  std::vector<Cplx> local;
  bool ok = trace_forward(tf, fn, &local);
  if (ok) {
    // the genuine branch exits rightward near the asymptote; anything else
    // means the march latched onto the wrong part of the zero set
    Cplx last = tf.denorm(local.back());
    if (last.real() < 0.7 * r_trunc ||
        std::fabs(last.imag() - f.center.imag()) > 0.05 * r_trunc + 10.0 * step)
      ok = false;
  }
  if (!ok && !trace_backward(tf, fn, &local))
    fail(ErrorKind::kTraceStall, "equal-magnitude curve tracer failed");

  std::vector<Cplx> pts(local.size());
  pts[0] = gamma;  // exact junction, no round trip through the frame
  for (size_t i = 1; i < local.size(); ++i) pts[i] = tf.denorm(local[i]);
  return pts;
}

YFigure y_figure(Cplx alpha, Cplx beta, double r_trunc, double step) {
  YFigure fig;
  fig.alpha = alpha;
  fig.beta = beta;
  fig.frame = segment_frame(alpha, beta);
  fig.gamma = gamma_point(alpha, beta);
  fig.curve = trace_equal_curve(alpha, beta, r_trunc, step);
  fig.asymptote_im = fig.frame.center.imag();
  return fig;
}

SpectralSkeleton skeleton(const PiecewiseLinearPotential& v, double r_trunc,
                          double step) {
  SpectralSkeleton s;
  s.r_trunc = r_trunc;
  for (const Segment& seg : v.segments()) {
    s.figures.push_back(
        y_figure(seg.at(seg.x_lo), seg.at(seg.x_hi), r_trunc, step));
  }
  return s;
}

double distance_to_figure(Cplx lambda, const YFigure& fig) {
  double d = point_segment_distance(lambda, fig.alpha, fig.gamma);
  d = std::min(d, point_segment_distance(lambda, fig.beta, fig.gamma));
  for (size_t i = 0; i + 1 < fig.curve.size(); ++i)
    d = std::min(d, point_segment_distance(lambda, fig.curve[i], fig.curve[i + 1]));
  // beyond the last vertex the curve is its horizontal asymptote
  const Cplx last = fig.curve.back();
  double dx = std::max(0.0, last.real() - lambda.real());
  double dy = lambda.imag() - fig.asymptote_im;
  d = std::min(d, std::hypot(dx, dy));
  return d;
}

double distance_to_skeleton(Cplx lambda, const SpectralSkeleton& s) {
  if (s.figures.empty()) fail(ErrorKind::kBadArgument, "empty skeleton");
  if (std::abs(lambda) > s.r_trunc - 1.0)
    fail(ErrorKind::kBadArgument,
         "distance query too close to the truncation radius");
  double d = std::numeric_limits<double>::infinity();
  for (const YFigure& f : s.figures) d = std::min(d, distance_to_figure(lambda, f));
  return d;
}

}  // namespace yspec
