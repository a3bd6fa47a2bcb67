#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "yspec/complexutil.hpp"

namespace yspec {

// A nonzero complex number represented as exp(log_mag) * exp(i*phase).
// log_mag = -inf encodes zero.  Used wherever values span more orders of
// magnitude than double exponents allow (Airy values for large arguments,
// characteristic determinants at small h).
struct LogValue {
  double log_mag = -std::numeric_limits<double>::infinity();
  double phase = 0.0;
};

// A complex number m * exp(lg) with the mantissa m kept in a moderate band by
// renorm().  Exact zero is m == 0 with lg == -inf.  Sums and products stay
// representable even when intermediate magnitudes would overflow a double.
struct ScaledComplex {
  Cplx m{0.0, 0.0};
  double lg = -std::numeric_limits<double>::infinity();

  static ScaledComplex zero() { return {}; }

  static ScaledComplex from_cplx(Cplx v) {
    if (v == Cplx(0.0, 0.0)) return {};
    ScaledComplex s{v, 0.0};
    s.renorm();
    return s;
  }

  static ScaledComplex from_log_value(const LogValue& v) {
    if (std::isinf(v.log_mag) && v.log_mag < 0) return {};
    return {unit_phase(v.phase), v.log_mag};
  }

  bool is_zero() const { return m == Cplx(0.0, 0.0); }

  void renorm() {
    if (is_zero()) {
      lg = -std::numeric_limits<double>::infinity();
      return;
    }
    double am = std::abs(m);
    if (am > 1e8 || am < 1e-8) {
      double s = std::log(am);
      lg += s;
      m /= am;
    }
  }

  // lg + log|m|; -inf for zero.
  double log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return lg + std::log(std::abs(m));
  }

  double arg() const { return std::arg(m); }

  LogValue to_log_value() const { return {log_abs(), arg()}; }

  // exp(lg)*m; overflows to inf for log_abs() beyond ~709.
  Cplx to_cplx() const {
    if (is_zero()) return {0.0, 0.0};
    return m * std::exp(lg);
  }

  friend ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
    if (a.is_zero() || b.is_zero()) return {};
    ScaledComplex r{a.m * b.m, a.lg + b.lg};
    r.renorm();
    return r;
  }

  friend ScaledComplex operator-(const ScaledComplex& a) {
    if (a.is_zero()) return {};
    return {-a.m, a.lg};
  }

  friend ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // Bring both to the larger scale; a summand more than ~40 e-folds below
    // the other cannot affect the double mantissa.
    const ScaledComplex* hi = &a;
    const ScaledComplex* lo = &b;
    double la = a.log_abs(), lb = b.log_abs();
    if (lb > la) {
      hi = &b;
      lo = &a;
      std::swap(la, lb);
    }
    if (la - lb > 40.0) return *hi;
    ScaledComplex r{hi->m + lo->m * std::exp(lo->lg - hi->lg), hi->lg};
    r.renorm();
    return r;
  }

  friend ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) {
    return a + (-b);
  }

  // b must be nonzero.
  friend ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b) {
    if (a.is_zero()) return {};
    ScaledComplex r{a.m / b.m, a.lg - b.lg};
    r.renorm();
    return r;
  }

  // a/b as a plain complex number; requires the quotient to be representable.
  static Cplx ratio(const ScaledComplex& a, const ScaledComplex& b) {
    if (a.is_zero()) return {0.0, 0.0};
    double dl = a.lg - b.lg;
    if (dl > 690.0) dl = 690.0;  // saturate; caller checks magnitude
    return (a.m / b.m) * std::exp(dl);
  }
};

}  // namespace yspec
