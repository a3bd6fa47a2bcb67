#pragma once

#include <complex>

#include "yspec/complexutil.hpp"
#include "yspec/scaled.hpp"

namespace yspec::airy {

// Branch switch radius between the Maclaurin series and the large-argument
// expansion.  Below the radius the series is summed in double precision for
// |z| <= 2.5 and in quad precision beyond, since the summation cancels at
// least exp((2/3)|z|^{3/2}) peak-to-result in every direction (twice that in
// the recessive cone).  Above the radius the expansion of DLMF 9.7 is used
// directly for |Arg z| <= 2pi/3 and through the rotation identity otherwise.
inline constexpr double kSeriesRadius = 9.0;

// Quad-precision takeover radius for the Maclaurin series.
inline constexpr double kQuadRadius = 2.5;

// log_ai_asymptotic refuses evaluation within this angular margin of the
// branch cut Arg z = pi.
inline constexpr double kCutMargin = 0.05;

// Index of a rotated Airy solution Ai_k(z) = Ai(e^{-2 k pi i/3} z), k in
// {0, +1, -1}.
class RotationIndex {
 public:
  explicit RotationIndex(int k);
  int value() const noexcept { return k_; }
  // e^{-2 k pi i / 3}
  Cplx rotation() const noexcept;

 private:
  int k_;
};

// Plain values.  Valid for all finite z; may overflow/underflow the double
// range when Re{(2/3) z^{3/2}} is large in magnitude.
Cplx ai(Cplx z);
Cplx ai_prime(Cplx z);

// Plain value plus a flag set when the magnitude left the representable
// double range (value saturates to 0 or to a non-finite sentinel).
struct AiValue {
  Cplx value;
  bool overflow;
};
AiValue ai_checked(Cplx z);
AiValue ai_prime_checked(Cplx z);

// Ai(e^{-2 k pi i/3} z).
Cplx ai_rotated(RotationIndex k, Cplx z);
Cplx ai_prime_rotated(RotationIndex k, Cplx z);

// Logarithmic evaluation via the large-argument expansion, usable when the
// plain value would over- or underflow.  Preconditions: |z| >= kSeriesRadius
// (kBadArgument otherwise) and |Arg z| <= pi - kCutMargin (kDomain
// otherwise).  Within |Arg z| <= 2pi/3 this is the direct expansion; beyond,
// the value is assembled from the rotation identity
//   Ai(z) = -e^{-2pi i/3} Ai(z e^{-2pi i/3}) - e^{2pi i/3} Ai(z e^{2pi i/3}),
// whose two rotated arguments both land in the direct cone.
LogValue log_ai_asymptotic(Cplx z);
LogValue log_ai_prime_asymptotic(Cplx z);

// Logarithmic evaluation valid for every finite z (series below the switch
// radius, expansion/rotation identity above, no cut margin: both one-sided
// limits on the cut agree because Ai is entire).
LogValue log_ai(Cplx z);
LogValue log_ai_prime(Cplx z);

// Stokes sectors of the Airy function:
//   S0 = {|Arg z| < pi/3}, S1 = {pi/3 < Arg z < pi},
//   Sm1 = {-pi < Arg z < -pi/3}.
enum class SectorTag { kS0, kS1, kSm1, kBoundary };
enum class BoundaryRay { kNone, kArgPiOver3, kArgMinusPiOver3, kArgPi, kOrigin };
struct SectorClass {
  SectorTag tag;
  BoundaryRay ray;  // set when tag == kBoundary
};
SectorClass sector_of(Cplx z, double tol = 1e-12);

// True when |Arg(e^{-2 k pi i/3} z)| < pi, i.e. the rotated argument stays
// off the cut ray of Ai_k.  z = 0 is allowable for every k.
bool is_allowable(RotationIndex k, Cplx z);

namespace detail {
// Individual branches, exposed for cross-validation tests.
Cplx ai_series(Cplx z);        // Maclaurin branch incl. quad-precision cone
Cplx ai_prime_series(Cplx z);
LogValue log_ai_direct(Cplx z);        // one-expansion branch, |Arg z| <= 2pi/3
LogValue log_ai_prime_direct(Cplx z);
}  // namespace detail

}  // namespace yspec::airy
