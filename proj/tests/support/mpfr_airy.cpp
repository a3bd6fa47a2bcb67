#include "support/mpfr_airy.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <limits>

namespace yspec::testsupport {
namespace {

// Minimal complex layer over mpfr_t.
struct MpC {
  mpfr_t re, im;
  explicit MpC(mpfr_prec_t p) {
    mpfr_init2(re, p);
    mpfr_init2(im, p);
    mpfr_set_zero(re, 1);
    mpfr_set_zero(im, 1);
  }
  ~MpC() {
    mpfr_clear(re);
    mpfr_clear(im);
  }
  MpC(const MpC&) = delete;
  MpC& operator=(const MpC&) = delete;

  void set(double r, double i) {
    mpfr_set_d(re, r, MPFR_RNDN);
    mpfr_set_d(im, i, MPFR_RNDN);
  }
  void set(const MpC& o) {
    mpfr_set(re, o.re, MPFR_RNDN);
    mpfr_set(im, o.im, MPFR_RNDN);
  }
  void add(const MpC& o) {
    mpfr_add(re, re, o.re, MPFR_RNDN);
    mpfr_add(im, im, o.im, MPFR_RNDN);
  }
};

// a *= b, using scratch registers t1, t2.
void mul(MpC& a, const MpC& b, mpfr_t t1, mpfr_t t2) {
  mpfr_mul(t1, a.re, b.re, MPFR_RNDN);
  mpfr_mul(t2, a.im, b.im, MPFR_RNDN);
  mpfr_sub(t1, t1, t2, MPFR_RNDN);  // new re
  mpfr_mul(t2, a.re, b.im, MPFR_RNDN);
  mpfr_fma(t2, a.im, b.re, t2, MPFR_RNDN);  // new im
  mpfr_set(a.re, t1, MPFR_RNDN);
  mpfr_set(a.im, t2, MPFR_RNDN);
}

void div_ui(MpC& a, unsigned long q) {
  mpfr_div_ui(a.re, a.re, q, MPFR_RNDN);
  mpfr_div_ui(a.im, a.im, q, MPFR_RNDN);
}

// log2(|re| + |im|), a cheap magnitude proxy; very negative for zero.
double log2_mag(const MpC& a, mpfr_t t1, mpfr_t t2) {
  mpfr_abs(t1, a.re, MPFR_RNDN);
  mpfr_abs(t2, a.im, MPFR_RNDN);
  mpfr_add(t1, t1, t2, MPFR_RNDN);
  if (mpfr_zero_p(t1)) return -1e18;
  long exp2 = 0;
  double m = mpfr_get_d_2exp(&exp2, t1, MPFR_RNDN);
  return std::log2(std::fabs(m)) + static_cast<double>(exp2);
}

// Ai(0) and Ai'(0) at precision p.
void airy_origin(mpfr_prec_t p, mpfr_t ai0, mpfr_t aip0) {
  mpfr_t g, t;
  mpfr_init2(g, p);
  mpfr_init2(t, p);
  // ai0 = 3^{-2/3} / Gamma(2/3), the power taken as exp((-2/3) ln 3) so the
  // exponent is formed at working precision.
  mpfr_set_ui(t, 3, MPFR_RNDN);
  mpfr_log(ai0, t, MPFR_RNDN);            // ln 3
  mpfr_mul_si(ai0, ai0, -2, MPFR_RNDN);   // -2 ln 3
  mpfr_div_ui(ai0, ai0, 3, MPFR_RNDN);    // -(2/3) ln 3
  mpfr_exp(ai0, ai0, MPFR_RNDN);          // 3^{-2/3}
  mpfr_set_d(g, 2.0, MPFR_RNDN);
  mpfr_div_ui(g, g, 3, MPFR_RNDN);        // 2/3 correctly rounded
  mpfr_gamma(g, g, MPFR_RNDN);            // Gamma(2/3)
  mpfr_div(ai0, ai0, g, MPFR_RNDN);
  // aip0 = -3^{-1/3} / Gamma(1/3)
  mpfr_log(aip0, t, MPFR_RNDN);
  mpfr_mul_si(aip0, aip0, -1, MPFR_RNDN);
  mpfr_div_ui(aip0, aip0, 3, MPFR_RNDN);
  mpfr_exp(aip0, aip0, MPFR_RNDN);        // 3^{-1/3}
  mpfr_set_ui(g, 1, MPFR_RNDN);
  mpfr_div_ui(g, g, 3, MPFR_RNDN);
  mpfr_gamma(g, g, MPFR_RNDN);            // Gamma(1/3)
  mpfr_div(aip0, aip0, g, MPFR_RNDN);
  mpfr_neg(aip0, aip0, MPFR_RNDN);
  mpfr_clear(g);
  mpfr_clear(t);
}

struct SeriesSums {
  MpC f, g, fp, gp;
  explicit SeriesSums(mpfr_prec_t p) : f(p), g(p), fp(p), gp(p) {}
};

// Sum f, g, f', g' at z.  Term recurrences (ratio z^3 / q_k):
//   a_0 = 1,     a_{k+1} = a_k z^3 / ((3k+2)(3k+3))   -> f
//   b_0 = z,     b_{k+1} = b_k z^3 / ((3k+3)(3k+4))   -> g
//   c_1 = z^2/2, c_{k+1} = c_k z^3 / ((3k)(3k+2))     -> f'
//   d_0 = 1,     d_{k+1} = d_k z^3 / ((3k+1)(3k+3))   -> g'
void series_sums(const MpC& z, mpfr_prec_t p, SeriesSums& out) {
  mpfr_t t1, t2;
  mpfr_init2(t1, p);
  mpfr_init2(t2, p);
  MpC z3(p), a(p), b(p), c(p), d(p);
  z3.set(z);
  mul(z3, z, t1, t2);
  mul(z3, z, t1, t2);  // z^3

  a.set(1.0, 0.0);
  b.set(z);
  c.set(z);
  mul(c, z, t1, t2);
  mpfr_div_ui(c.re, c.re, 2, MPFR_RNDN);
  mpfr_div_ui(c.im, c.im, 2, MPFR_RNDN);  // z^2/2
  d.set(1.0, 0.0);

  out.f.set(a);
  out.g.set(b);
  out.fp.set(c);
  out.gp.set(d);

  const double cutoff = -static_cast<double>(p) - 40.0;
  double max_a = log2_mag(a, t1, t2), max_b = log2_mag(b, t1, t2);
  double max_c = log2_mag(c, t1, t2), max_d = log2_mag(d, t1, t2);

  for (unsigned long k = 0; k < 20000; ++k) {
    mul(a, z3, t1, t2);
    div_ui(a, (3 * k + 2) * (3 * k + 3));
    mul(b, z3, t1, t2);
    div_ui(b, (3 * k + 3) * (3 * k + 4));
    // c index starts at 1: the recurrence below maps c_{k+1} -> c_{k+2}
    mul(c, z3, t1, t2);
    div_ui(c, (3 * k + 3) * (3 * k + 5));
    mul(d, z3, t1, t2);
    div_ui(d, (3 * k + 1) * (3 * k + 3));

    out.f.add(a);
    out.g.add(b);
    out.fp.add(c);
    out.gp.add(d);

    double la = log2_mag(a, t1, t2), lb = log2_mag(b, t1, t2);
    double lc = log2_mag(c, t1, t2), ld = log2_mag(d, t1, t2);
    max_a = std::max(max_a, la);
    max_b = std::max(max_b, lb);
    max_c = std::max(max_c, lc);
    max_d = std::max(max_d, ld);
    if (la - max_a < cutoff && lb - max_b < cutoff && lc - max_c < cutoff &&
        ld - max_d < cutoff) {
      break;
    }
  }
  mpfr_clear(t1);
  mpfr_clear(t2);
}

double to_double(const mpfr_t v) { return mpfr_get_d(v, MPFR_RNDN); }

// (ln|w|, Arg w) of an MpC at working precision.
void log_abs_arg(const MpC& w, mpfr_prec_t p, double* log_abs, double* arg) {
  mpfr_t t1, t2;
  mpfr_init2(t1, p);
  mpfr_init2(t2, p);
  mpfr_hypot(t1, w.re, w.im, MPFR_RNDN);
  if (mpfr_zero_p(t1)) {
    *log_abs = -std::numeric_limits<double>::infinity();
    *arg = 0.0;
  } else {
    mpfr_log(t2, t1, MPFR_RNDN);
    *log_abs = to_double(t2);
    mpfr_atan2(t2, w.im, w.re, MPFR_RNDN);
    *arg = to_double(t2);
  }
  mpfr_clear(t1);
  mpfr_clear(t2);
}

}  // namespace

MpAiry mp_airy(std::complex<double> z, int prec_bits) {
  const mpfr_prec_t p = prec_bits;
  mpfr_t ai0, aip0;
  mpfr_init2(ai0, p);
  mpfr_init2(aip0, p);
  airy_origin(p, ai0, aip0);

  MpC zz(p);
  zz.set(z.real(), z.imag());
  SeriesSums s(p);
  series_sums(zz, p, s);

  // ai = ai0*f + aip0*g ; aip = ai0*f' + aip0*g'
  MpC ai(p), aip(p), tmp(p);
  ai.set(s.f);
  mpfr_mul(ai.re, ai.re, ai0, MPFR_RNDN);
  mpfr_mul(ai.im, ai.im, ai0, MPFR_RNDN);
  tmp.set(s.g);
  mpfr_mul(tmp.re, tmp.re, aip0, MPFR_RNDN);
  mpfr_mul(tmp.im, tmp.im, aip0, MPFR_RNDN);
  ai.add(tmp);

  aip.set(s.fp);
  mpfr_mul(aip.re, aip.re, ai0, MPFR_RNDN);
  mpfr_mul(aip.im, aip.im, ai0, MPFR_RNDN);
  tmp.set(s.gp);
  mpfr_mul(tmp.re, tmp.re, aip0, MPFR_RNDN);
  mpfr_mul(tmp.im, tmp.im, aip0, MPFR_RNDN);
  aip.add(tmp);

  MpAiry out;
  out.ai = {to_double(ai.re), to_double(ai.im)};
  out.ai_prime = {to_double(aip.re), to_double(aip.im)};
  log_abs_arg(ai, p, &out.log_abs_ai, &out.arg_ai);
  log_abs_arg(aip, p, &out.log_abs_aip, &out.arg_aip);

  mpfr_clear(ai0);
  mpfr_clear(aip0);
  return out;
}

std::string mp_airy_at_zero(int digits, bool derivative, int prec_bits) {
  const mpfr_prec_t p = prec_bits;
  mpfr_t ai0, aip0;
  mpfr_init2(ai0, p);
  mpfr_init2(aip0, p);
  airy_origin(p, ai0, aip0);
  char buf[256];
  mpfr_snprintf(buf, sizeof(buf), "%.*Rg", digits, derivative ? aip0 : ai0);
  mpfr_clear(ai0);
  mpfr_clear(aip0);
  return buf;
}

double mp_airy_first_zero(int prec_bits) {
  // Ai is real on the real axis; bisect the sign change in [-2.4, -2.3].
  double lo = -2.4, hi = -2.3;
  double flo = mp_airy({lo, 0.0}, prec_bits).ai.real();
  assert(flo * mp_airy({hi, 0.0}, prec_bits).ai.real() < 0);
  for (int i = 0; i < 70; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = mp_airy({mid, 0.0}, prec_bits).ai.real();
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace yspec::testsupport
