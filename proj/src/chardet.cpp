#include "yspec/chardet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "yspec/errors.hpp"

namespace yspec {
namespace {

constexpr double kSingularLogRel = -29.933606208922594;  // log(1e-13)

Cplx rotation_of(int k) { return airy::RotationIndex(k).rotation(); }

// Growth exponent Re{(e^{-2k pi i/3} w)^{3/2}} of the k-th solution at scaled
// argument w (up to the constant 2/3): measures how fast Ai_k grows/decays as
// w moves.  Used to order basis pairs by dominance.
double growth_exponent(int k, Cplx w) { return re_pow_3_2(rotation_of(k) * w); }

int rotation_preference(int k) { return k == 0 ? 0 : (k == 1 ? 1 : 2); }

struct SegmentOptions {
  std::vector<std::array<int, 2>> pairs;  // ordered, locally best first
  std::vector<int> allow;                 // allowable rotations at both ends
};

SegmentOptions segment_options(const Segment& seg, double h, Cplx lambda) {
  Cplx wa = scaled_argument(seg, h, lambda, seg.x_lo);
  Cplx wb = scaled_argument(seg, h, lambda, seg.x_hi);
  std::array<int, 3> ks{0, 1, -1};
  std::vector<int> allow;
  for (int k : ks) {
    airy::RotationIndex ri(k);
    if (airy::is_allowable(ri, wa) && airy::is_allowable(ri, wb))
      allow.push_back(k);
  }
  if (allow.size() < 2)
    fail(ErrorKind::kNoAllowablePair,
         "fewer than two allowable rotations on a segment; perturb lambda "
         "away from the anti-Stokes rays");
  struct Cand {
    std::array<int, 2> pair;
    double cond;
  };
  std::vector<Cand> cands;
  for (int k1 : allow)
    for (int k2 : allow) {
      if (k1 == k2) continue;
      // Conditioning estimate for the row-normalized 2x2 endpoint block.
      // s, t: dominance gaps of the pair at the two segment ends.  When the
      // dominance order swaps across the segment each column peaks at O(1)
      // in its own row and the block determinant is O(1) (score 0).  When
      // one member is recessive at both ends its column is uniformly small
      // and the determinant loses the smaller endpoint gap.
      double s = growth_exponent(k1, wa) - growth_exponent(k2, wa);
      double t = growth_exponent(k1, wb) - growth_exponent(k2, wb);
      double cond = (s * t <= 0.0) ? 0.0 : -std::min(std::abs(s), std::abs(t));
      cands.push_back({{k1, k2}, cond});
    }
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.cond != b.cond) return a.cond > b.cond;
    int pa = rotation_preference(a.pair[0]) * 3 + rotation_preference(a.pair[1]);
    int pb = rotation_preference(b.pair[0]) * 3 + rotation_preference(b.pair[1]);
    return pa < pb;
  });
  SegmentOptions out;
  for (const Cand& c : cands) out.pairs.push_back(c.pair);
  out.allow = std::move(allow);
  return out;
}

// At a continuous join the leading derivative factors of the adjoining
// second solutions must differ in sign, i.e. exactly one of the two is the
// k = 0 rotation.
bool join_rule_ok(const std::array<int, 2>& left, const std::array<int, 2>& right) {
  return (left[1] == 0) != (right[1] == 0);
}

// Deterministic cap on how many join-rule-respecting assignments are scored;
// enumeration is depth-first with each segment's locally best pairs first,
// so the cap (only reachable for many-segment potentials) keeps the most
// promising region of the search space.
constexpr int kMaxAssignments = 256;

void enumerate_assignments(const std::vector<SegmentOptions>& opts,
                           const std::vector<bool>& continuous, size_t i,
                           std::vector<std::array<int, 2>>* cur,
                           std::vector<BasisChoice>* out) {
  if (static_cast<int>(out->size()) >= kMaxAssignments) return;
  if (i == opts.size()) {
    out->push_back({*cur});
    return;
  }
  for (const auto& pair : opts[i].pairs) {
    if (i > 0 && continuous[i - 1] && !join_rule_ok((*cur)[i - 1], pair)) continue;
    (*cur)[i] = pair;
    enumerate_assignments(opts, continuous, i + 1, cur, out);
    if (static_cast<int>(out->size()) >= kMaxAssignments) return;
  }
}

// Airy data for one segment, indexed by rotation slot (k = 0, +1, -1) and
// endpoint (0 = x_lo, 1 = x_hi); filled only for allowable rotations.
struct SegmentCache {
  LogValue val[3][2];
  LogValue der[3][2];
};

// Shared layout of the 2n x 2n collocation matrix: a Dirichlet value row at
// x = -1, a value-matching and a derivative-matching row per interior
// breakpoint (right-segment columns negated), a Dirichlet value row at
// x = +1; each row max-normalized with the removed log factor recorded.
// val/der map (segment, member, end) to the basis solution's scaled value
// and x-derivative, with end 0 = x_lo and 1 = x_hi of that segment.
template <class F, class G>
AssembledMatrix assemble_rows(int n, F&& val, G&& der) {
  const int dim = 2 * n;
  AssembledMatrix mat;
  mat.n = n;
  mat.a.assign(static_cast<size_t>(dim) * dim, ScaledComplex::zero());
  mat.row_scales.assign(static_cast<size_t>(dim), 0.0);

  mat.at(0, 0) = val(0, 0, 0);
  mat.at(0, 1) = val(0, 1, 0);
  for (int i = 1; i < n; ++i) {
    int c = 2 * (i - 1);
    mat.at(2 * i - 1, c + 0) = val(i - 1, 0, 1);
    mat.at(2 * i - 1, c + 1) = val(i - 1, 1, 1);
    mat.at(2 * i - 1, c + 2) = -val(i, 0, 0);
    mat.at(2 * i - 1, c + 3) = -val(i, 1, 0);
    mat.at(2 * i, c + 0) = der(i - 1, 0, 1);
    mat.at(2 * i, c + 1) = der(i - 1, 1, 1);
    mat.at(2 * i, c + 2) = -der(i, 0, 0);
    mat.at(2 * i, c + 3) = -der(i, 1, 0);
  }
  mat.at(dim - 1, dim - 2) = val(n - 1, 0, 1);
  mat.at(dim - 1, dim - 1) = val(n - 1, 1, 1);

  for (int r = 0; r < dim; ++r) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < dim; ++c) mx = std::max(mx, mat.at(r, c).log_abs());
    if (std::isinf(mx)) continue;  // all-zero row: determinant will vanish
    mat.row_scales[static_cast<size_t>(r)] = mx;
    for (int c = 0; c < dim; ++c) {
      if (!mat.at(r, c).is_zero()) mat.at(r, c).lg -= mx;
    }
  }
  return mat;
}

}  // namespace

Cplx scaled_argument(const Segment& seg, double h, Cplx lambda, double x) {
  Cplx m23 = std::pow(seg.slope, -2.0 / 3.0);  // principal branch
  return std::pow(h, -2.0 / 3.0) * m23 * (seg.at(x) - lambda);
}

namespace {

struct CandidateScan {
  std::vector<BasisChoice> cands;
  size_t best = 0;        // argmax of log_relative: best conditioned
  double min_log = 0.0;   // min of log_relative (floored at -50)
};

// Enumerate the join-rule-respecting assignments and evaluate the actual
// determinant each produces at this lambda.  The doubly (row- and column-)
// normalized |det| reported as log_relative serves two purposes: its argmax
// is the best-conditioned representation (per-segment dominance gaps cannot
// see how the two 2x2 endpoint blocks couple across an interface, and a
// poorly coupled assignment can lose tens of digits that a well coupled one
// keeps, so the determinant itself is the only reliable score), and its min
// is the strongest vanishing certificate.  Ties keep enumeration order,
// i.e. the deterministic local preference (k = 0, then +1, then -1).  The
// Airy data is cached once per segment, so scoring costs one small
// elimination per candidate.
CandidateScan scan_candidates(const PiecewiseLinearPotential& v, double h,
                              Cplx lambda) {
  const int n = v.size();
  std::vector<SegmentOptions> opts;
  opts.reserve(static_cast<size_t>(n));
  for (const Segment& s : v.segments()) opts.push_back(segment_options(s, h, lambda));
  std::vector<bool> continuous;
  for (int i = 0; i + 1 < n; ++i) continuous.push_back(v.is_continuous_join(i));

  CandidateScan scan;
  std::vector<std::array<int, 2>> cur(static_cast<size_t>(n));
  enumerate_assignments(opts, continuous, 0, &cur, &scan.cands);
  if (scan.cands.empty())
    fail(ErrorKind::kNoAllowablePair,
         "no basis assignment satisfies the continuous-join sign rule; "
         "perturb lambda");

  std::vector<SegmentCache> cache(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Segment& seg = v.segment(i);
    for (int k : opts[static_cast<size_t>(i)].allow) {
      int s = rotation_preference(k);
      auto& sc = cache[static_cast<size_t>(i)];
      sc.val[s][0] = basis_value(seg, k, h, lambda, seg.x_lo);
      sc.val[s][1] = basis_value(seg, k, h, lambda, seg.x_hi);
      sc.der[s][0] = basis_derivative(seg, k, h, lambda, seg.x_lo);
      sc.der[s][1] = basis_derivative(seg, k, h, lambda, seg.x_hi);
    }
  }
  double best_log = -std::numeric_limits<double>::infinity();
  scan.min_log = std::numeric_limits<double>::infinity();
  for (size_t ci = 0; ci < scan.cands.size(); ++ci) {
    const BasisChoice& bc = scan.cands[ci];
    auto val = [&](int seg, int which, int end) {
      int s = rotation_preference(bc.k[static_cast<size_t>(seg)][static_cast<size_t>(which)]);
      return ScaledComplex::from_log_value(cache[static_cast<size_t>(seg)].val[s][end]);
    };
    auto der = [&](int seg, int which, int end) {
      int s = rotation_preference(bc.k[static_cast<size_t>(seg)][static_cast<size_t>(which)]);
      return ScaledComplex::from_log_value(cache[static_cast<size_t>(seg)].der[s][end]);
    };
    ScaledDeterminant d = determinant(assemble_rows(n, val, der));
    if (d.log_relative > best_log) {
      best_log = d.log_relative;
      scan.best = ci;
    }
    scan.min_log = std::min(scan.min_log, std::max(d.log_relative, -50.0));
  }
  return scan;
}

}  // namespace

BasisChoice choose_basis(const PiecewiseLinearPotential& v, double h, Cplx lambda) {
  CandidateScan scan = scan_candidates(v, h, lambda);
  return scan.cands[scan.best];
}

double deepest_residual_log(const PiecewiseLinearPotential& v, double h,
                            Cplx lambda) {
  return scan_candidates(v, h, lambda).min_log;
}

LogValue basis_value(const Segment& seg, int k, double h, Cplx lambda, double x) {
  Cplx w = scaled_argument(seg, h, lambda, x);
  return airy::log_ai(rotation_of(k) * w);
}

LogValue basis_derivative(const Segment& seg, int k, double h, Cplx lambda,
                          double x) {
  Cplx w = scaled_argument(seg, h, lambda, x);
  LogValue l = airy::log_ai_prime(rotation_of(k) * w);
  if (std::isinf(l.log_mag)) return l;
  // chain rule: d/dx Ai(e^{-2k pi i/3} w(x)) picks up
  // e^{-2k pi i/3} h^{-2/3} m^{1/3} (principal cube root, consistent with the
  // principal m^{-2/3} in the argument).
  l.log_mag += -(2.0 / 3.0) * std::log(h) + std::log(std::abs(seg.slope)) / 3.0;
  l.phase = wrap_angle(l.phase - 2.0 * kPi * k / 3.0 + std::arg(seg.slope) / 3.0);
  return l;
}

Cplx wkb_derivative_factor(const Segment& seg, int k, Cplx lambda, double x) {
  Cplx q = seg.at(x) - lambda;
  if (std::abs(q) <= 1e-12 * (1.0 + std::abs(lambda)))
    fail(ErrorKind::kTurningPoint,
         "WKB factor undefined at a turning point (V(x) = lambda)");
  Cplx root = std::sqrt(q);
  return k == 0 ? -root : root;
}

AssembledMatrix assemble_matrix(const PiecewiseLinearPotential& v, double h,
                                Cplx lambda, const BasisChoice& basis) {
  const int n = v.size();
  if (static_cast<int>(basis.k.size()) != n)
    fail(ErrorKind::kBadArgument, "basis choice size mismatch");
  auto end_x = [&](int seg, int end) {
    const Segment& s = v.segment(seg);
    return end == 0 ? s.x_lo : s.x_hi;
  };
  auto val = [&](int seg, int which, int end) {
    return ScaledComplex::from_log_value(
        basis_value(v.segment(seg), basis.k[static_cast<size_t>(seg)][static_cast<size_t>(which)],
                    h, lambda, end_x(seg, end)));
  };
  auto der = [&](int seg, int which, int end) {
    return ScaledComplex::from_log_value(
        basis_derivative(v.segment(seg), basis.k[static_cast<size_t>(seg)][static_cast<size_t>(which)],
                         h, lambda, end_x(seg, end)));
  };
  return assemble_rows(n, val, der);
}

ScaledDeterminant determinant(const AssembledMatrix& m) {
  const int dim = 2 * m.n;
  std::vector<ScaledComplex> a = m.a;
  auto at = [&](int r, int c) -> ScaledComplex& {
    return a[static_cast<size_t>(r) * dim + c];
  };

  double scale_sum = 0.0;
  for (double s : m.row_scales) scale_sum += s;

  // Column equilibration on top of the row normalization done at assembly:
  // a basis member that is recessive at every row it touches produces a
  // uniformly small column, which would masquerade as near-singularity.
  // Scaling each column to unit maximum is a positive real factor per
  // column, so phases (hence windings) and the restored full value are
  // unchanged, while log_relative becomes a genuine singularity measure.
  for (int c = 0; c < dim; ++c) {
    double cmax = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < dim; ++r)
      if (!at(r, c).is_zero()) cmax = std::max(cmax, at(r, c).log_abs());
    if (std::isinf(cmax)) {
      ScaledDeterminant zero_out;
      zero_out.mantissa = {0.0, 0.0};
      zero_out.log_scale = 0.0;
      zero_out.log_relative = -std::numeric_limits<double>::infinity();
      zero_out.singular_to_precision = true;
      return zero_out;
    }
    for (int r = 0; r < dim; ++r)
      if (!at(r, c).is_zero()) at(r, c).lg -= cmax;
    scale_sum += cmax;
  }

  ScaledDeterminant out;
  int parity = 1;
  ScaledComplex det{Cplx(1.0, 0.0), 0.0};
  for (int col = 0; col < dim; ++col) {
    int piv = col;
    double best = at(col, col).log_abs();
    for (int r = col + 1; r < dim; ++r) {
      double la = at(r, col).log_abs();
      if (la > best) {
        best = la;
        piv = r;
      }
    }
    if (at(piv, col).is_zero()) {
      out.mantissa = {0.0, 0.0};
      out.log_scale = 0.0;
      out.log_relative = -std::numeric_limits<double>::infinity();
      out.singular_to_precision = true;
      return out;
    }
    if (piv != col) {
      for (int c = col; c < dim; ++c) std::swap(at(piv, c), at(col, c));
      parity = -parity;
    }
    det = det * at(col, col);
    for (int r = col + 1; r < dim; ++r) {
      if (at(r, col).is_zero()) continue;
      ScaledComplex f = at(r, col) / at(col, col);
      for (int c = col + 1; c < dim; ++c)
        at(r, c) = at(r, c) - f * at(col, c);
      at(r, col) = ScaledComplex::zero();
    }
  }
  if (parity < 0) det = -det;

  out.log_relative = det.log_abs();
  double full_log = out.log_relative + scale_sum;
  const double ln2 = 0.6931471805599453;
  double rem = full_log - std::floor(full_log / ln2) * ln2;
  out.log_scale = full_log - rem;
  out.mantissa = std::exp(rem) * unit_phase(det.arg());
  out.singular_to_precision = !(out.log_relative >= kSingularLogRel);
  return out;
}

ScaledDeterminant chardet(const PiecewiseLinearPotential& v, double h, Cplx lambda,
                          const BasisChoice& basis) {
  return determinant(assemble_matrix(v, h, lambda, basis));
}

ScaledDeterminant chardet(const PiecewiseLinearPotential& v, double h, Cplx lambda) {
  return chardet(v, h, lambda, choose_basis(v, h, lambda));
}

}  // namespace yspec
