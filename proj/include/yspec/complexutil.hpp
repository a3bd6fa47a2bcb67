#pragma once

#include <cmath>
#include <complex>

namespace yspec {

using Cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  if (a > kPi || a <= -kPi) {
    a = std::remainder(a, 2.0 * kPi);  // lands in [-pi, pi]
    if (a <= -kPi) a = kPi;            // remainder can return -pi
  }
  return a;
}

// Principal z^{3/2}.  z*sqrt(z) equals exp(1.5*Log z) for the principal
// square root and avoids the log/exp round trip.
inline Cplx pow_3_2(Cplx z) { return z * std::sqrt(z); }

// Re(z^{3/2}) extended continuously across the negative real axis:
// |z|^{3/2} cos(1.5 Arg z) is even in Arg z, so the two branch limits at
// Arg z = +-pi agree and the function is continuous on all of C (with a
// directional kink along the negative axis, not a jump).
inline double re_pow_3_2(Cplx z) {
  double r = std::abs(z);
  if (r == 0.0) return 0.0;
  return r * std::sqrt(r) * std::cos(1.5 * std::arg(z));
}

// Unit complex number e^{i a}.
inline Cplx unit_phase(double a) { return Cplx(std::cos(a), std::sin(a)); }

}  // namespace yspec
