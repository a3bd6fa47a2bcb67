#include "yspec/solver.hpp"

#include <algorithm>
#include <cmath>

#include "yspec/errors.hpp"

namespace yspec {

double SearchRegion::diameter() const { return std::hypot(width(), height()); }

bool SearchRegion::contains(Cplx z, double margin) const {
  return z.real() >= re_lo - margin && z.real() <= re_hi + margin &&
         z.imag() >= im_lo - margin && z.imag() <= im_hi + margin;
}

SearchRegion SearchRegion::inflated(double factor) const {
  Cplx c = center();
  double hw = 0.5 * width() * factor, hh = 0.5 * height() * factor;
  return {c.real() - hw, c.real() + hw, c.imag() - hh, c.imag() + hh};
}

namespace {

// Contour values whose doubly-normalized |det| falls below this are too deep
// in the cancellation noise for their phase to be trusted (the phase error of
// an IEEE-double evaluation grows like e^{-|log_relative|} relative to the
// ~1e-15 floor; at e^{-32} it is ~0.1 rad, still well under the pi/2 the
// walker needs, with margin for elimination growth).
constexpr double kBoundarySingularLog = -32.0;

// Required decrease (in e-folds) of |det| at a converged Newton point below
// the values one finite-difference step away.  A zero within newton_tol of
// the point gives ~log(fd/newton_tol) = log(1e4) ~ 9.2; noise gives ~0.
constexpr double kMinAcceptDrop = 4.6;

// choose_basis with a deterministic nudge when the seed lambda happens to sit
// on an anti-Stokes ray of some segment.
BasisChoice robust_basis(const PiecewiseLinearPotential& v, double h, Cplx seed,
                         double scale) {
  try {
    return choose_basis(v, h, seed);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNoAllowablePair) throw;
    return choose_basis(v, h, seed + Cplx(1.3e-7, 0.7e-7) * (1.0 + scale));
  }
}

struct PhaseWalker {
  const PiecewiseLinearPotential& v;
  double h;
  const BasisChoice& basis;

  Cplx det_mantissa(Cplx lambda) const {
    ScaledDeterminant d = chardet(v, h, lambda, basis);
    if (!(d.log_relative > kBoundarySingularLog))
      fail(ErrorKind::kBoundaryZero,
           "determinant vanishes to precision on the contour");
    return d.mantissa;
  }

  // phase increment along the straight contour piece [a, b], adaptively
  // bisected until each sub-increment is < pi/2 AND a midpoint probe
  // confirms it.  The confirmation matters: a zero lying close to the
  // contour can rotate the phase by nearly 2*pi inside one step while the
  // endpoint-only increment presents as something small (the wrap is
  // invisible modulo 2*pi), which would silently undercount the winding.
  // The midpoint sees the wrap, and on disagreement the step is split, so
  // an alias would have to survive its own verification at every level.
  double walk(Cplx a, Cplx ma, Cplx b, Cplx mb, int depth) const {
    if (depth >= 42)
      fail(ErrorKind::kBoundaryZero,
           "contour phase cannot be resolved (zero on or near the boundary)");
    double inc = std::arg(mb * std::conj(ma));
    Cplx mid = 0.5 * (a + b);
    Cplx mm = det_mantissa(mid);
    if (std::fabs(inc) < 0.5 * kPi) {
      double i1 = std::arg(mm * std::conj(ma));
      double i2 = std::arg(mb * std::conj(mm));
      if (std::fabs(i1) < 0.5 * kPi && std::fabs(i2) < 0.5 * kPi &&
          std::fabs(i1 + i2 - inc) < 1e-3)
        return i1 + i2;
    }
    return walk(a, ma, mid, mm, depth + 1) + walk(mid, mm, b, mb, depth + 1);
  }
};

}  // namespace

int winding_count(const PiecewiseLinearPotential& v, double h,
                  const SearchRegion& region, const BasisChoice* basis) {
  BasisChoice local;
  if (!basis) {
    local = robust_basis(v, h, region.center(), region.diameter());
    basis = &local;
  }
  PhaseWalker pw{v, h, *basis};

  const Cplx corners[4] = {{region.re_lo, region.im_lo},
                           {region.re_hi, region.im_lo},
                           {region.re_hi, region.im_hi},
                           {region.re_lo, region.im_hi}};
  // initial samples per edge keep each naive increment usually < pi/2
  const int per_edge = 12;
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    Cplx a = corners[e], b = corners[(e + 1) % 4];
    Cplx prev = a;
    Cplx mp = pw.det_mantissa(prev);
    for (int i = 1; i <= per_edge; ++i) {
      Cplx cur = a + (b - a) * (static_cast<double>(i) / per_edge);
      Cplx mc = pw.det_mantissa(cur);
      total += pw.walk(prev, mp, cur, mc, 0);
      prev = cur;
      mp = mc;
    }
  }
  double turns = total / (2.0 * kPi);
  long w = std::lround(turns);
  if (std::fabs(turns - static_cast<double>(w)) > 0.25)
    fail(ErrorKind::kBoundaryZero, "winding number is not an integer");
  return static_cast<int>(w);
}

namespace {

struct NewtonResult {
  bool ok = false;
  Cplx lambda;
  double residual_log = 0.0;
};

NewtonResult newton_polish(const PiecewiseLinearPotential& v, double h,
                           const SearchRegion& box, const SolveOptions& opt) {
  NewtonResult res;
  BasisChoice basis;
  try {
    basis = robust_basis(v, h, box.center(), box.diameter());
  } catch (const Error&) {
    return res;
  }
  // full determinant value as a ScaledComplex: mantissa * e^{log_scale}
  auto full_value = [](const ScaledDeterminant& d) {
    return ScaledComplex::from_log_value(
        {d.log_scale + std::log(std::abs(d.mantissa)), std::arg(d.mantissa)});
  };
  Cplx lam = box.center();
  double margin = 0.35 * std::max(box.width(), box.height());
  for (int it = 0; it < opt.max_newton; ++it) {
    double fd = 1e-6 * (1.0 + std::abs(lam));
    ScaledDeterminant d0 = chardet(v, h, lam, basis);
    ScaledDeterminant dp = chardet(v, h, lam + fd, basis);
    ScaledDeterminant dm = chardet(v, h, lam - fd, basis);
    ScaledComplex num = full_value(d0);
    ScaledComplex den = full_value(dp) - full_value(dm);
    if (den.is_zero()) return res;
    Cplx step = -ScaledComplex::ratio(num, den) * (2.0 * fd);
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return res;
    lam += step;
    // Bound the wander to the box neighborhood; the iteration may stray a
    // little while homing in, but a step that leaves this neighborhood is
    // chasing some other box's zero (or noise) and the hunt stops here.
    // Boxes produced by boundary-dodging inflation can stick out past the
    // originally requested region; a zero they certify is genuine, so no
    // check against the top-level region is made.
    if (!box.contains(lam, margin)) return res;
    if (std::abs(step) <= opt.newton_tol * (1.0 + std::abs(lam))) {
      // Two-part acceptance.  First a representation-independent drop test:
      // the converged value must sit several e-folds below the values one
      // finite-difference step away in the same basis.  For a genuine zero
      // at distance d the ratio is ~fd/d >= fd/newton_tol; a spurious
      // convergence onto noise shows no such drop.
      ScaledComplex f0 = full_value(chardet(v, h, lam, basis));
      ScaledComplex fp = full_value(chardet(v, h, lam + fd, basis));
      ScaledComplex fm = full_value(chardet(v, h, lam - fd, basis));
      double drop = std::min(fp.log_abs(), fm.log_abs()) - f0.log_abs();
      if (!(drop >= kMinAcceptDrop)) return res;
      // Then the vanishing certificate: the deepest log_relative over the
      // candidate representations at the root must reach the singularity
      // threshold.  (The floor of a single representation is the entry
      // roundoff amplified by that representation's internal cancellation,
      // which can sit far above the threshold even at a true eigenvalue;
      // the best-cancelling representation is free of that amplification.)
      // The root must lie in this box: a winding count of 1 certifies an
      // interior zero, so only convergence-level slack is allowed (it
      // matches the duplicate-merge radius).  The wander margin above lets
      // the iteration stray while homing in, but accepting a converged
      // point outside the box would steal a neighboring box's root and
      // silently drop this box's own occupant (the stolen duplicate is
      // merged away later, the occupant never found).
      if (!box.contains(lam, 1e-7 * (1.0 + std::abs(lam)))) return res;
      double resid;
      try {
        resid = deepest_residual_log(v, h, lam);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNoAllowablePair) throw;
        resid = chardet(v, h, lam, basis).log_relative;
      }
      if (!(resid <= opt.accept_residual_log)) return res;
      res.ok = true;
      res.lambda = lam;
      res.residual_log = resid;
      return res;
    }
  }
  return res;
}

// mantissa/log_scale of a ScaledDeterminant recombined for Newton is handled
// above; here the subdivision bookkeeping.  winding == -1 marks a box whose
// boundary count could not be established; such boxes are subdivided until
// their pieces become countable or hit the resolution floor.
struct BoxTask {
  SearchRegion box;
  int winding;
};

const double kSplitFractions[4] = {0.5, 0.53, 0.47, 0.515};

struct CountResult {
  SearchRegion box;   // the rectangle that was (last) counted
  int winding = -1;   // -1: boundary unreadable even after inflation
  bool inflated = false;
};

// Count zeros inside box, retrying on a boundary hit with the rectangle
// inflated by 1.7% up to three times (deterministic sequence).  On total
// failure returns winding -1 with the most inflated rectangle, so the caller
// still covers the original area when it subdivides.
CountResult try_count(const PiecewiseLinearPotential& v, double h,
                      SearchRegion box) {
  CountResult cr;
  for (int attempt = 0;; ++attempt) {
    try {
      cr.winding = winding_count(v, h, box);
      cr.box = box;
      return cr;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kBoundaryZero) throw;
      if (attempt >= 3) {
        cr.box = box;
        return cr;
      }
      box = box.inflated(1.017);
      cr.inflated = true;
    }
  }
}

}  // namespace

EigenvalueSet solve_spectrum(const PiecewiseLinearPotential& v, double h,
                             const SearchRegion& region, const SolveOptions& opt) {
  EigenvalueSet out;
  out.h = h;

  // The top-level rectangle is often far too large for any single basis to
  // stay readable along its whole boundary (the representation degrades
  // exponentially with the distance from the point where the basis was
  // chosen), so an unreadable count here is normal: the area is subdivided
  // with unknown total and the counts are established on smaller pieces.
  CountResult root_cr = try_count(v, h, region);

  std::vector<BoxTask> stack{{root_cr.box, root_cr.winding}};
  while (!stack.empty()) {
    BoxTask task = stack.back();
    stack.pop_back();
    if (task.winding == 0) continue;

    if (task.winding == 1) {
      NewtonResult nr = newton_polish(v, h, task.box, opt);
      if (nr.ok) {
        out.entries.push_back({nr.lambda, 1, nr.residual_log});
        continue;
      }
    }
    if (std::max(task.box.width(), task.box.height()) <= opt.min_box) {
      out.unresolved.push_back({task.box, task.winding});
      continue;
    }

    bool split_done = false;
    for (double frac : kSplitFractions) {
      SearchRegion a = task.box, b = task.box;
      if (task.box.width() >= task.box.height()) {
        double cut = task.box.re_lo + frac * task.box.width();
        a.re_hi = cut;
        b.re_lo = cut;
      } else {
        double cut = task.box.im_lo + frac * task.box.height();
        a.im_hi = cut;
        b.im_lo = cut;
      }
      CountResult ca = try_count(v, h, a);
      CountResult cb = try_count(v, h, b);
      if (ca.winding < 0 && cb.winding < 0) continue;  // cut resolved nothing
      // Counts must add up across an exact tiling.  An inflated child
      // overlaps its sibling, so a zero in the sliver may legitimately be
      // counted twice (deduplicated later); only exact tilings are checked.
      if (task.winding >= 0 && !ca.inflated && !cb.inflated && ca.winding >= 0 &&
          cb.winding >= 0 && ca.winding + cb.winding != task.winding)
        continue;  // phase leaked across this cut; try another fraction
      if (ca.winding != 0) stack.push_back({ca.box, ca.winding});
      if (cb.winding != 0) stack.push_back({cb.box, cb.winding});
      split_done = true;
      break;
    }
    if (!split_done) {
      // Every cut left both halves unreadable.  Far above the resolution
      // floor that just means the pieces are still too large for a single
      // basis, so halve blindly and keep going; the floor test above stops
      // the recursion.
      SearchRegion a = task.box, b = task.box;
      if (task.box.width() >= task.box.height()) {
        double cut = task.box.re_lo + 0.5 * task.box.width();
        a.re_hi = cut;
        b.re_lo = cut;
      } else {
        double cut = task.box.im_lo + 0.5 * task.box.height();
        a.im_hi = cut;
        b.im_lo = cut;
      }
      stack.push_back({a, -1});
      stack.push_back({b, -1});
    }
  }

  // canonical order, then drop duplicates found from overlapping Newton basins
  auto lt = [](const Eigenvalue& x, const Eigenvalue& y) {
    if (x.lambda.real() != y.lambda.real())
      return x.lambda.real() < y.lambda.real();
    return x.lambda.imag() < y.lambda.imag();
  };
  std::sort(out.entries.begin(), out.entries.end(), lt);
  std::vector<Eigenvalue> dedup;
  for (const Eigenvalue& e : out.entries) {
    bool dup = false;
    for (const Eigenvalue& f : dedup) {
      if (std::abs(e.lambda - f.lambda) < 1e-7 * (1.0 + std::abs(e.lambda))) {
        dup = true;
        break;
      }
    }
    if (!dup) dedup.push_back(e);
  }
  out.entries = std::move(dedup);

  std::sort(out.unresolved.begin(), out.unresolved.end(),
            [](const UnresolvedCluster& a, const UnresolvedCluster& b) {
              if (a.box.re_lo != b.box.re_lo) return a.box.re_lo < b.box.re_lo;
              return a.box.im_lo < b.box.im_lo;
            });
  return out;
}

ContainmentReport containment_report(const EigenvalueSet& eigs,
                                     const SpectralSkeleton& skel, double eps,
                                     double window) {
  ContainmentReport rep;
  rep.eps = eps;
  rep.window = window;
  for (const Eigenvalue& e : eigs.entries) {
    if (std::abs(e.lambda) > window) continue;
    double d = distance_to_skeleton(e.lambda, skel);
    bool pass = d <= eps;
    rep.rows.push_back({e.lambda, d, pass});
    rep.max_distance = std::max(rep.max_distance, d);
    rep.all_pass = rep.all_pass && pass;
  }
  // unlocated zeros inside the window invalidate a containment claim
  for (const UnresolvedCluster& c : eigs.unresolved) {
    if (std::abs(c.box.center()) <= window + c.box.diameter()) rep.all_pass = false;
  }
  return rep;
}

LimitReport limit_experiment(double p, const std::vector<double>& h_list,
                             const SearchRegion& region, double window,
                             const SolveOptions& opt) {
  if (!(p > 0)) fail(ErrorKind::kBadArgument, "limit experiment requires p > 0");
  LimitReport rep;
  rep.p = p;
  rep.window = window;

  const double r_trunc = 10.0;
  PiecewiseLinearPotential single({{-1.0, 1.0, Cplx(0.0, 1.0), Cplx(0.0, 0.0)}});
  SpectralSkeleton single_skel = skeleton(single, r_trunc);

  for (double h : h_list) {
    double delta = std::pow(h, 1.0 / p);
    PiecewiseLinearPotential v = jump_potential(delta);
    EigenvalueSet eigs = solve_spectrum(v, h, region, opt);
    eigs.delta = delta;
    eigs.p = p;
    SpectralSkeleton double_skel = skeleton(v, r_trunc);
    LimitRow row;
    row.h = h;
    row.delta = delta;
    for (const Eigenvalue& e : eigs.entries) {
      if (std::abs(e.lambda) > window) continue;
      row.dist_single =
          std::max(row.dist_single, distance_to_skeleton(e.lambda, single_skel));
      row.dist_double =
          std::max(row.dist_double, distance_to_skeleton(e.lambda, double_skel));
    }
    rep.rows.push_back(row);
  }

  rep.predicted_monotone = rep.rows.size() >= 2;
  for (size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    double a = p < 1.0 ? rep.rows[i].dist_single : rep.rows[i].dist_double;
    double b = p < 1.0 ? rep.rows[i + 1].dist_single : rep.rows[i + 1].dist_double;
    if (!(b < a)) rep.predicted_monotone = false;
  }
  return rep;
}

}  // namespace yspec
