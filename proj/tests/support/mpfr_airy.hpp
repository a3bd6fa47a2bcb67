#pragma once

// Arbitrary-precision reference evaluation of Ai and Ai' for complex
// argument, used only by tests.  Entirely independent of the library
// implementation path: it sums the two defining Maclaurin series
//   f(z) = sum z^{3k} / prod, g(z) = sum z^{3k+1} / prod
// in MPFR at `prec_bits` working precision, with the initial values
// Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3) obtained from
// mpfr_gamma.  At 768 bits the results are accurate to far beyond double
// precision for |z| <= 46 (the series cancellation costs ~|z|^{3/2} digits).

#include <complex>
#include <string>

namespace yspec::testsupport {

struct MpAiry {
  std::complex<double> ai;
  std::complex<double> ai_prime;
  double log_abs_ai;    // ln|Ai(z)|, computed before rounding to double
  double arg_ai;        // Arg Ai(z)
  double log_abs_aip;   // ln|Ai'(z)|
  double arg_aip;       // Arg Ai'(z)
};

MpAiry mp_airy(std::complex<double> z, int prec_bits = 768);

// Decimal string of Ai(0) / Ai'(0) with `digits` significant digits.
std::string mp_airy_at_zero(int digits, bool derivative, int prec_bits = 768);

// Largest (closest to zero) real root of Ai, by bisection of the series at
// full working precision.
double mp_airy_first_zero(int prec_bits = 768);

}  // namespace yspec::testsupport
