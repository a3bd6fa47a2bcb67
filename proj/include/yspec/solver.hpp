#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "yspec/chardet.hpp"
#include "yspec/potential.hpp"
#include "yspec/stokes.hpp"

namespace yspec {

struct SearchRegion {
  double re_lo = 0.0, re_hi = 0.0;
  double im_lo = 0.0, im_hi = 0.0;

  Cplx center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
  double width() const { return re_hi - re_lo; }
  double height() const { return im_hi - im_lo; }
  double diameter() const;
  bool contains(Cplx z, double margin = 0.0) const;
  SearchRegion inflated(double factor) const;  // about its center
};

// Number of determinant zeros inside the region (with multiplicity), from the
// winding of arg chardet around the boundary.  Phase steps are refined until
// each increment is < pi/2.  Throws kBoundaryZero when the determinant falls
// so deep into cancellation noise on the boundary that its phase cannot be
// trusted, or when the total does not come out near an integer.  The basis is
// fixed once for the whole contour (at the region center when not supplied),
// which keeps the sampled function entire in lambda; since any two such
// representations differ by a nonvanishing entire factor, the count does not
// depend on the choice, but the readable contour length does (it shrinks like
// h), so large regions generally need subdividing before they can be counted.
int winding_count(const PiecewiseLinearPotential& v, double h,
                  const SearchRegion& region,
                  const BasisChoice* basis = nullptr);

struct Eigenvalue {
  Cplx lambda;
  int winding = 1;          // zero count of the isolating box
  double residual_log = 0;  // deepest_residual_log at lambda (floored -50)
};

struct UnresolvedCluster {
  SearchRegion box;
  int winding = 0;  // zeros inside (with multiplicity); -1 when unreadable
};

struct SolveOptions {
  double min_box = 1e-4;       // smallest box edge before giving up
  double newton_tol = 1e-10;   // |step| convergence threshold
  int max_newton = 60;
  // log(1e-13), the singularity threshold: deepest_residual_log at an
  // accepted root must reach it (the re-evaluated determinant is singular
  // to working precision in its best-cancelling representation).
  double accept_residual_log = -29.933606208922594;
};

struct EigenvalueSet {
  double h = 0.0;
  std::optional<double> delta;  // set by the jump-potential experiments
  std::optional<double> p;      // set by the coupled-limit experiments
  std::vector<Eigenvalue> entries;           // sorted by (Re, Im)
  std::vector<UnresolvedCluster> unresolved;
};

// Quadtree search: winding count on the region, zero-count boxes pruned,
// count-one boxes polished by a Newton iteration on the scaled determinant
// (accepted only when a basis chosen at the root itself puts the residual at
// the cancellation floor), larger counts subdivided.  Boundary zeros are
// dodged by inflating the failing box by 1.7% up to three times, then by
// cutting at a different fraction; a box whose count stays unreadable is
// subdivided with unknown total (parent/child count consistency is only
// checked across exact tilings).  Boxes at the min_box floor are reported as
// unresolved clusters instead of being silently dropped.
EigenvalueSet solve_spectrum(const PiecewiseLinearPotential& v, double h,
                             const SearchRegion& region,
                             const SolveOptions& opt = {});

struct ContainmentRow {
  Cplx lambda;
  double distance = 0.0;
  bool pass = false;
};

struct ContainmentReport {
  std::vector<ContainmentRow> rows;  // eigenvalues with |lambda| <= window
  double max_distance = 0.0;
  bool all_pass = true;
  double eps = 0.0;
  double window = 0.0;
};

ContainmentReport containment_report(const EigenvalueSet& eigs,
                                     const SpectralSkeleton& skel, double eps,
                                     double window);

// Coupled-limit experiment: for each h in h_list solve the jump-potential
// spectrum with delta = h^{1/p} and measure the farthest eigenvalue (within
// the window) from (a) the single-Y skeleton of V = ix and (b) the double-Y
// skeleton of the jump potential at that delta.  For p < 1 the distances to
// (a) should decrease with h; for p >= 1 the distances to (b) should.
struct LimitRow {
  double h = 0.0;
  double delta = 0.0;
  double dist_single = 0.0;
  double dist_double = 0.0;
};

struct LimitReport {
  double p = 0.0;
  double window = 0.0;
  std::vector<LimitRow> rows;  // in the given h order (decreasing h expected)
  bool predicted_monotone = false;  // the predicted column decreases strictly
};

LimitReport limit_experiment(double p, const std::vector<double>& h_list,
                             const SearchRegion& region, double window,
                             const SolveOptions& opt = {});

}  // namespace yspec
