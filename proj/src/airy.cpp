#include "yspec/airy.hpp"

#include <quadmath.h>

#include <array>
#include <cmath>

#include "yspec/errors.hpp"

namespace yspec::airy {
namespace {

// Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3).
constexpr double kAi0 = 0.35502805388781723926006318600418317640;
constexpr double kAip0 = -0.25881940379280679840518356018920396348;
const __float128 kAi0Q =
    strtoflt128("0.355028053887817239260063186004183176397979174", nullptr);
const __float128 kAip0Q =
    strtoflt128("-0.258819403792806798405183560189203963479091138", nullptr);

const double kLog2SqrtPi = std::log(2.0 * std::sqrt(kPi));

struct AiPair {
  Cplx ai;
  Cplx aip;
};

// ---------------------------------------------------------------------------
// Maclaurin branch.  Ai = Ai(0) f + Ai'(0) g with
//   f = sum a_k, a_0 = 1,     a_{k+1} = a_k z^3/((3k+2)(3k+3))
//   g = sum b_k, b_0 = z,     b_{k+1} = b_k z^3/((3k+3)(3k+4))
// and the term-wise derivatives
//   f' = sum c_k, c_1 = z^2/2, c_{k+1} = c_k z^3/((3k+3)(3k+5))  (k from 0)
//   g' = sum d_k, d_0 = 1,     d_{k+1} = d_k z^3/((3k+1)(3k+3)).
// ---------------------------------------------------------------------------

AiPair series_eval_double(Cplx z) {
  const Cplx z3 = z * z * z;
  Cplx a{1.0, 0.0}, b = z, c = 0.5 * z * z, d{1.0, 0.0};
  Cplx f = a, g = b, fp = c, gp = d;
  for (unsigned long k = 0; k < 400; ++k) {
    a *= z3 / static_cast<double>((3 * k + 2) * (3 * k + 3));
    b *= z3 / static_cast<double>((3 * k + 3) * (3 * k + 4));
    c *= z3 / static_cast<double>((3 * k + 3) * (3 * k + 5));
    d *= z3 / static_cast<double>((3 * k + 1) * (3 * k + 3));
    f += a;
    g += b;
    fp += c;
    gp += d;
    double t = std::abs(a.real()) + std::abs(a.imag()) + std::abs(b.real()) +
               std::abs(b.imag()) + std::abs(c.real()) + std::abs(c.imag()) +
               std::abs(d.real()) + std::abs(d.imag());
    if (t < 1e-40 * (1.0 + std::abs(f.real()) + std::abs(f.imag()))) break;
  }
  return {kAi0 * f + kAip0 * g, kAi0 * fp + kAip0 * gp};
}

// Quad-precision complex with just the operations the series needs.
struct QC {
  __float128 re, im;
};

inline QC qmul(QC a, QC b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline QC qdiv_ul(QC a, unsigned long q) {
  __float128 d = q;
  return {a.re / d, a.im / d};
}
inline QC qadd(QC a, QC b) { return {a.re + b.re, a.im + b.im}; }
inline __float128 qmag(QC a) { return fabsq(a.re) + fabsq(a.im); }

AiPair series_eval_quad(Cplx z) {
  const QC zq{z.real(), z.imag()};
  const QC z3 = qmul(qmul(zq, zq), zq);
  QC a{1.0, 0.0}, b = zq, c = qmul(zq, zq), d{1.0, 0.0};
  c.re *= 0.5;
  c.im *= 0.5;
  QC f = a, g = b, fp = c, gp = d;
  __float128 peak = 1.0;
  for (unsigned long k = 0; k < 600; ++k) {
    a = qdiv_ul(qmul(a, z3), (3 * k + 2) * (3 * k + 3));
    b = qdiv_ul(qmul(b, z3), (3 * k + 3) * (3 * k + 4));
    c = qdiv_ul(qmul(c, z3), (3 * k + 3) * (3 * k + 5));
    d = qdiv_ul(qmul(d, z3), (3 * k + 1) * (3 * k + 3));
    f = qadd(f, a);
    g = qadd(g, b);
    fp = qadd(fp, c);
    gp = qadd(gp, d);
    __float128 t = qmag(a) + qmag(b) + qmag(c) + qmag(d);
    if (t > peak) peak = t;
    if (t < peak * static_cast<__float128>(1e-36)) break;
  }
  QC ai = qadd(QC{kAi0Q * f.re, kAi0Q * f.im}, QC{kAip0Q * g.re, kAip0Q * g.im});
  QC aip =
      qadd(QC{kAi0Q * fp.re, kAi0Q * fp.im}, QC{kAip0Q * gp.re, kAip0Q * gp.im});
  return {Cplx(static_cast<double>(ai.re), static_cast<double>(ai.im)),
          Cplx(static_cast<double>(aip.re), static_cast<double>(aip.im))};
}

// The series' peak term is ~exp((2/3)|z|^{3/2}) in every direction, so the
// summation cancels at least that many e-folds down to the result (twice as
// many in the recessive cone, where the result is itself exponentially
// small).  The burn reaches the ~1e-13 relative-accuracy budget near
// |z| ~ 2.5; beyond that the summation moves to quad precision, whose 34
// digits keep ~18 of them at the switch radius even in the worst direction.
bool needs_quad(Cplx z) { return std::abs(z) > kQuadRadius; }

AiPair series_eval(Cplx z) {
  return needs_quad(z) ? series_eval_quad(z) : series_eval_double(z);
}

// ---------------------------------------------------------------------------
// Large-argument branch (DLMF 9.7): with zeta = (2/3) z^{3/2},
//   Ai(z)  ~  exp(-zeta) / (2 sqrt(pi) z^{1/4}) * sum (-1)^k u_k zeta^{-k}
//   Ai'(z) ~ -z^{1/4} exp(-zeta) / (2 sqrt(pi)) * sum (-1)^k v_k zeta^{-k}
// Adaptive truncation: stop on relative convergence or at the smallest term.
// ---------------------------------------------------------------------------

constexpr int kMaxAsym = 60;

struct AsymCoeffs {
  std::array<double, kMaxAsym + 1> u{}, v{};
  AsymCoeffs() {
    u[0] = 1.0;
    v[0] = 1.0;
    for (int k = 1; k <= kMaxAsym; ++k) {
      double kk = k;
      u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) /
             ((2 * kk - 1) * 216.0 * kk);
      v[k] = u[k] * (6 * kk + 1) / (1.0 - 6 * kk);
    }
  }
};

const AsymCoeffs& asym_coeffs() {
  static const AsymCoeffs c;
  return c;
}

// sum_k coeff_k (-zeta)^{-k} truncated adaptively.
Cplx asym_sum(const std::array<double, kMaxAsym + 1>& coeff, Cplx zeta) {
  const Cplx inv = -1.0 / zeta;
  Cplx term{1.0, 0.0};
  Cplx sum = term;
  double prev_mag = 1.0;
  for (int k = 1; k <= kMaxAsym; ++k) {
    term *= inv * (coeff[k] / coeff[k - 1]);
    double mag = std::abs(term);
    if (mag > prev_mag) break;  // past the optimal truncation point
    sum += term;
    if (mag < 1e-17 * std::abs(sum)) break;
    prev_mag = mag;
  }
  return sum;
}

LogValue log_ai_direct_impl(Cplx z) {
  const Cplx zeta = (2.0 / 3.0) * pow_3_2(z);
  const Cplx s = asym_sum(asym_coeffs().u, zeta);
  const double lr = std::log(std::abs(z));
  return {-zeta.real() - 0.25 * lr - kLog2SqrtPi + std::log(std::abs(s)),
          wrap_angle(-zeta.imag() - 0.25 * std::arg(z) + std::arg(s))};
}

LogValue log_ai_prime_direct_impl(Cplx z) {
  const Cplx zeta = (2.0 / 3.0) * pow_3_2(z);
  const Cplx s = asym_sum(asym_coeffs().v, zeta);
  const double lr = std::log(std::abs(z));
  // leading minus sign contributes a phase of pi
  return {-zeta.real() + 0.25 * lr - kLog2SqrtPi + std::log(std::abs(s)),
          wrap_angle(-zeta.imag() + 0.25 * std::arg(z) + std::arg(s) + kPi)};
}

// exp(i 2pi/3) and exp(-i 2pi/3)
const Cplx kRotPlus{-0.5, 0.8660254037844386467637231707529362};
const Cplx kRotMinus{-0.5, -0.8660254037844386467637231707529362};

LogValue log_add(const LogValue& a, const LogValue& b) {
  return (ScaledComplex::from_log_value(a) + ScaledComplex::from_log_value(b))
      .to_log_value();
}

// Full-plane logarithmic evaluation for |z| >= kSeriesRadius.  Inside
// |Arg z| <= 2pi/3 the direct expansion; beyond, the rotation identity
//   Ai(z) = -e^{-2pi i/3} Ai(z e^{-2pi i/3}) - e^{2pi i/3} Ai(z e^{2pi i/3})
// whose two arguments both land back in the direct cone.
LogValue log_ai_full(Cplx z) {
  double phi = std::arg(z);
  if (phi < 0) {  // Ai(conj z) = conj Ai(z)
    LogValue l = log_ai_full(std::conj(z));
    return {l.log_mag, wrap_angle(-l.phase)};
  }
  if (phi <= 2.0 * kPi / 3.0) return log_ai_direct_impl(z);
  LogValue l1 = log_ai_direct_impl(z * kRotMinus);
  LogValue l2 = log_ai_direct_impl(z * kRotPlus);
  // -e^{-2pi i/3} A1: phase shift pi - 2pi/3;  -e^{2pi i/3} A2: pi + 2pi/3
  LogValue t1{l1.log_mag, wrap_angle(l1.phase + kPi / 3.0)};
  LogValue t2{l2.log_mag, wrap_angle(l2.phase - kPi / 3.0)};
  return log_add(t1, t2);
}

LogValue log_ai_prime_full(Cplx z) {
  double phi = std::arg(z);
  if (phi < 0) {
    LogValue l = log_ai_prime_full(std::conj(z));
    return {l.log_mag, wrap_angle(-l.phase)};
  }
  if (phi <= 2.0 * kPi / 3.0) return log_ai_prime_direct_impl(z);
  // d/dz of the rotation identity:
  //   Ai'(z) = -e^{2pi i/3} Ai'(z e^{-2pi i/3}) - e^{-2pi i/3} Ai'(z e^{2pi i/3})
  LogValue l1 = log_ai_prime_direct_impl(z * kRotMinus);
  LogValue l2 = log_ai_prime_direct_impl(z * kRotPlus);
  LogValue t1{l1.log_mag, wrap_angle(l1.phase + kPi + 2.0 * kPi / 3.0)};
  LogValue t2{l2.log_mag, wrap_angle(l2.phase + kPi - 2.0 * kPi / 3.0)};
  return log_add(t1, t2);
}

AiValue exponentiate(const LogValue& l) {
  if (std::isinf(l.log_mag) && l.log_mag < 0) return {{0.0, 0.0}, false};
  if (l.log_mag > 709.0) {
    double inf = std::numeric_limits<double>::infinity();
    return {inf * unit_phase(l.phase), true};
  }
  if (l.log_mag < -745.0) return {{0.0, 0.0}, true};
  return {std::exp(l.log_mag) * unit_phase(l.phase), false};
}

}  // namespace

RotationIndex::RotationIndex(int k) : k_(k) {
  if (k < -1 || k > 1) fail(ErrorKind::kBadArgument, "rotation index must be in {-1,0,1}");
}

Cplx RotationIndex::rotation() const noexcept {
  if (k_ == 0) return {1.0, 0.0};
  return k_ == 1 ? kRotMinus : kRotPlus;  // e^{-2k pi i/3}
}

AiValue ai_checked(Cplx z) {
  if (std::abs(z) <= kSeriesRadius) return {series_eval(z).ai, false};
  return exponentiate(log_ai_full(z));
}

AiValue ai_prime_checked(Cplx z) {
  if (std::abs(z) <= kSeriesRadius) return {series_eval(z).aip, false};
  return exponentiate(log_ai_prime_full(z));
}

Cplx ai(Cplx z) { return ai_checked(z).value; }
Cplx ai_prime(Cplx z) { return ai_prime_checked(z).value; }

Cplx ai_rotated(RotationIndex k, Cplx z) { return ai(k.rotation() * z); }
Cplx ai_prime_rotated(RotationIndex k, Cplx z) {
  return ai_prime(k.rotation() * z);
}

LogValue log_ai(Cplx z) {
  if (std::abs(z) <= kSeriesRadius) {
    Cplx v = series_eval(z).ai;
    if (v == Cplx(0.0, 0.0)) return {};
    return {std::log(std::abs(v)), std::arg(v)};
  }
  return log_ai_full(z);
}

LogValue log_ai_prime(Cplx z) {
  if (std::abs(z) <= kSeriesRadius) {
    Cplx v = series_eval(z).aip;
    if (v == Cplx(0.0, 0.0)) return {};
    return {std::log(std::abs(v)), std::arg(v)};
  }
  return log_ai_prime_full(z);
}

namespace {
void check_asymptotic_domain(Cplx z) {
  if (std::abs(z) < kSeriesRadius)
    fail(ErrorKind::kBadArgument,
         "log_ai_asymptotic requires |z| >= switch radius");
  if (kPi - std::fabs(std::arg(z)) < kCutMargin)
    fail(ErrorKind::kDomain,
         "log_ai_asymptotic: argument within margin of the branch cut");
}
}  // namespace

LogValue log_ai_asymptotic(Cplx z) {
  check_asymptotic_domain(z);
  return log_ai_full(z);
}

LogValue log_ai_prime_asymptotic(Cplx z) {
  check_asymptotic_domain(z);
  return log_ai_prime_full(z);
}

SectorClass sector_of(Cplx z, double tol) {
  if (z == Cplx(0.0, 0.0)) return {SectorTag::kBoundary, BoundaryRay::kOrigin};
  double phi = std::arg(z);
  const double third = kPi / 3.0;
  if (std::fabs(phi - third) <= tol)
    return {SectorTag::kBoundary, BoundaryRay::kArgPiOver3};
  if (std::fabs(phi + third) <= tol)
    return {SectorTag::kBoundary, BoundaryRay::kArgMinusPiOver3};
  if (kPi - std::fabs(phi) <= tol)
    return {SectorTag::kBoundary, BoundaryRay::kArgPi};
  if (std::fabs(phi) < third) return {SectorTag::kS0, BoundaryRay::kNone};
  if (phi > 0) return {SectorTag::kS1, BoundaryRay::kNone};
  return {SectorTag::kSm1, BoundaryRay::kNone};
}

bool is_allowable(RotationIndex k, Cplx z) {
  if (z == Cplx(0.0, 0.0)) return true;
  double psi = wrap_angle(std::arg(z) - 2.0 * kPi * k.value() / 3.0);
  return kPi - std::fabs(psi) > 1e-13;
}

namespace detail {
Cplx ai_series(Cplx z) { return series_eval(z).ai; }
Cplx ai_prime_series(Cplx z) { return series_eval(z).aip; }
LogValue log_ai_direct(Cplx z) { return log_ai_direct_impl(z); }
LogValue log_ai_prime_direct(Cplx z) { return log_ai_prime_direct_impl(z); }
}  // namespace detail

}  // namespace yspec::airy
