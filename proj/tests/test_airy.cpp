// Tests for the rotated-Airy evaluation kernel.  The numeric oracle is the
// arbitrary-precision series evaluator in tests/support (MPFR at 768 bits,
// independent of the library code paths); structural identities (ODE,
// connection formula, sector relations) are checked directly.
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "support/mpfr_airy.hpp"
#include "yspec/airy.hpp"
#include "yspec/errors.hpp"

namespace airy = yspec::airy;
using yspec::Cplx;
using yspec::ErrorKind;
using yspec::kPi;
using yspec::LogValue;
using yspec::testsupport::mp_airy;
using yspec::testsupport::MpAiry;

namespace {

double wrapped(double a) { return std::abs(yspec::wrap_angle(a)); }

// Compare the library against the reference on `count` points with radius in
// [r_lo, r_hi], any direction.  Tolerances are relative for the plain values
// and absolute for log-magnitude/phase (the reference log is exact to well
// below these levels on |z| <= 46 at 768 bits).
void compare_regime(double r_lo, double r_hi, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ur(r_lo, r_hi);
  std::uniform_real_distribution<double> ua(-kPi, kPi);
  for (int i = 0; i < count; ++i) {
    Cplx z = ur(rng) * yspec::unit_phase(ua(rng));
    MpAiry ref = mp_airy(z);

    Cplx a = airy::ai(z);
    Cplx ap = airy::ai_prime(z);
    CHECK(std::abs(a - ref.ai) <= 1e-12 * std::abs(ref.ai));
    CHECK(std::abs(ap - ref.ai_prime) <= 1e-12 * std::abs(ref.ai_prime));

    LogValue la = airy::log_ai(z);
    LogValue lp = airy::log_ai_prime(z);
    CHECK(std::abs(la.log_mag - ref.log_abs_ai) <=
          1e-12 * std::max(1.0, std::abs(ref.log_abs_ai)));
    CHECK(wrapped(la.phase - ref.arg_ai) <= 1e-12);
    CHECK(std::abs(lp.log_mag - ref.log_abs_aip) <=
          1e-12 * std::max(1.0, std::abs(ref.log_abs_aip)));
    CHECK(wrapped(lp.phase - ref.arg_aip) <= 1e-12);
  }
}

}  // namespace

TEST_CASE("reference agreement: double-precision series core, |z| <= 2.5") {
  compare_regime(0.05, 2.5, 300, 13579);
}

TEST_CASE("reference agreement: quad-precision series shell, 2.5 < |z| <= 9") {
  compare_regime(2.5, 9.0, 300, 13580);
}

TEST_CASE("reference agreement: expansion regime, 9 < |z| <= 30") {
  compare_regime(9.0, 30.0, 300, 13581);
}

TEST_CASE("reference agreement: far expansion regime, 30 < |z| <= 45") {
  compare_regime(30.0, 45.0, 300, 13582);
}

TEST_CASE("values at distinguished points") {
  // Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3); reference
  // strings come from the MPFR-side gamma evaluation.
  double ai0 = std::stod(yspec::testsupport::mp_airy_at_zero(20, false));
  double aip0 = std::stod(yspec::testsupport::mp_airy_at_zero(20, true));
  CHECK(airy::ai(Cplx(0.0, 0.0)).real() == doctest::Approx(ai0).epsilon(1e-15));
  CHECK(airy::ai(Cplx(0.0, 0.0)).imag() == 0.0);
  CHECK(airy::ai_prime(Cplx(0.0, 0.0)).real() ==
        doctest::Approx(aip0).epsilon(1e-15));
  CHECK(ai0 == doctest::Approx(0.35502805388781723926).epsilon(1e-15));
  CHECK(aip0 == doctest::Approx(-0.25881940379280679841).epsilon(1e-15));

  CHECK(airy::ai(Cplx(1.0, 0.0)).real() ==
        doctest::Approx(0.13529241631288141).epsilon(1e-14));
  CHECK(airy::ai_prime(Cplx(1.0, 0.0)).real() ==
        doctest::Approx(-0.15914744129679328).epsilon(1e-14));

  // First real zero of Ai, located independently by high-precision bisection.
  double z1 = yspec::testsupport::mp_airy_first_zero();
  CHECK(z1 == doctest::Approx(-2.3381074104597674).epsilon(1e-15));
  CHECK(std::abs(airy::ai(Cplx(z1, 0.0))) <= 5e-16);

  // Logarithmic derivative deep in the decaying direction: Ai'/Ai -> -sqrt(z).
  Cplx ld = airy::ai_prime(Cplx(25.0, 0.0)) / airy::ai(Cplx(25.0, 0.0));
  CHECK(ld.real() == doctest::Approx(-5.009951).epsilon(1e-6));
  CHECK(std::abs(ld.imag()) <= 1e-12);
}

TEST_CASE("log_ai_asymptotic matches the reference at the switch radius") {
  MpAiry ref = mp_airy(Cplx(9.0, 0.0));
  LogValue l = airy::log_ai_asymptotic(Cplx(9.0, 0.0));
  CHECK(l.log_mag == doctest::Approx(ref.log_abs_ai).epsilon(1e-12));
  CHECK(l.log_mag == doctest::Approx(-19.8185747492).epsilon(1e-10));
  CHECK(wrapped(l.phase - ref.arg_ai) <= 1e-12);
}

TEST_CASE("log_ai_asymptotic rejects small arguments and the cut neighborhood") {
  CHECK_THROWS_AS(airy::log_ai_asymptotic(Cplx(5.0, 0.0)), yspec::Error);
  try {
    airy::log_ai_asymptotic(Cplx(5.0, 0.0));
  } catch (const yspec::Error& e) {
    CHECK(e.kind() == ErrorKind::kBadArgument);
  }
  try {
    airy::log_ai_asymptotic(10.0 * yspec::unit_phase(kPi - 0.01));
  } catch (const yspec::Error& e) {
    CHECK(e.kind() == ErrorKind::kDomain);
  }
  // Just outside the margin it evaluates.
  CHECK_NOTHROW(airy::log_ai_asymptotic(10.0 * yspec::unit_phase(kPi - 0.06)));
  // log_ai has no cut restriction: both one-sided limits on the cut agree.
  LogValue above = airy::log_ai(12.0 * yspec::unit_phase(kPi - 1e-13));
  LogValue below = airy::log_ai(12.0 * yspec::unit_phase(-kPi + 1e-13));
  CHECK(above.log_mag == doctest::Approx(below.log_mag).epsilon(1e-10));
}

TEST_CASE("second-difference ODE residual: Ai'' = z Ai") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> ur(0.05, 5.0);
  std::uniform_real_distribution<double> ua(-kPi, kPi);
  const double h = 1e-3;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    Cplx z = ur(rng) * yspec::unit_phase(ua(rng));
    Cplx second =
        (airy::ai(z + h) - 2.0 * airy::ai(z) + airy::ai(z - h)) / (h * h);
    double resid = std::abs(second - z * airy::ai(z));
    worst = std::max(worst, resid);
    // Central difference derivative against ai_prime as well.
    Cplx first = (airy::ai(z + h) - airy::ai(z - h)) / (2.0 * h);
    CHECK(std::abs(first - airy::ai_prime(z)) <= 1e-5);
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("connection formula over the rotated triple") {
  // Ai_0(z) + e^{-2pi i/3} Ai_1(z) + e^{2pi i/3} Ai_{-1}(z) = 0.
  const Cplx wm = yspec::unit_phase(-2.0 * kPi / 3.0);
  const Cplx wp = yspec::unit_phase(2.0 * kPi / 3.0);
  auto defect = [&](Cplx z) {
    return airy::ai(z) + wm * airy::ai_rotated(airy::RotationIndex(1), z) +
           wp * airy::ai_rotated(airy::RotationIndex(-1), z);
  };
  auto dominant = [&](Cplx z) {
    double m = std::abs(airy::ai(z));
    m = std::max(m, std::abs(airy::ai_rotated(airy::RotationIndex(1), z)));
    m = std::max(m, std::abs(airy::ai_rotated(airy::RotationIndex(-1), z)));
    return m;
  };

  CHECK(std::abs(defect(Cplx(2.0, 0.0))) <= 1e-13);

  std::mt19937_64 rng(31415);
  std::uniform_real_distribution<double> ur(0.0, 8.0);
  std::uniform_real_distribution<double> ua(-kPi, kPi);
  for (int i = 0; i < 300; ++i) {
    Cplx z = ur(rng) * yspec::unit_phase(ua(rng));
    // One of the three terms grows like exp((2/3)|z|^{3/2}); the identity can
    // only hold relative to that dominant size in fixed precision.
    CHECK(std::abs(defect(z)) <= 1e-10 * std::max(1.0, dominant(z)));
    if (std::abs(z) <= 5.0) CHECK(std::abs(defect(z)) <= 1e-10);
  }
}

TEST_CASE("series and expansion branches agree across the switch annulus") {
  std::mt19937_64 rng(112358);
  std::uniform_real_distribution<double> ur(9.0, 11.0);
  std::uniform_real_distribution<double> ua(-0.9 * kPi, 0.9 * kPi);
  for (int i = 0; i < 400; ++i) {
    Cplx z = ur(rng) * yspec::unit_phase(ua(rng));
    Cplx series = airy::detail::ai_series(z);
    LogValue expansion = airy::log_ai_asymptotic(z);
    CHECK(std::abs(expansion.log_mag - std::log(std::abs(series))) <= 1e-6);
    CHECK(wrapped(expansion.phase - std::arg(series)) <= 1e-6);

    Cplx series_p = airy::detail::ai_prime_series(z);
    LogValue expansion_p = airy::log_ai_prime_asymptotic(z);
    CHECK(std::abs(expansion_p.log_mag - std::log(std::abs(series_p))) <= 1e-6);
    CHECK(wrapped(expansion_p.phase - std::arg(series_p)) <= 1e-6);
  }
}

TEST_CASE("neutral rays: |Ai| follows the algebraic prefactor on Arg z = ±pi/3") {
  // On the two rays where Re z^{3/2} = 0 the exponential factor is a pure
  // phase, so ln|Ai(r e^{±i pi/3})| ~ -(1/4) ln r - ln(2 sqrt(pi)).
  const double ln2sqrtpi = std::log(2.0 * std::sqrt(kPi));
  double worst = 0.0;
  for (double r = 9.0; r <= 100.0; r += 0.5) {
    for (double s : {1.0, -1.0}) {
      Cplx z = r * yspec::unit_phase(s * kPi / 3.0);
      LogValue l = airy::log_ai(z);
      double predicted = -0.25 * std::log(r) - ln2sqrtpi;
      worst = std::max(worst, std::abs(l.log_mag - predicted));
    }
  }
  CHECK(worst <= 0.01);
}

TEST_CASE("|Ai| decays monotonically along the positive axis") {
  double prev = std::abs(airy::ai(Cplx(5.0, 0.0)));
  CHECK(airy::ai(Cplx(5.0, 0.0)).real() > 0.0);
  for (double x = 5.25; x <= 30.0; x += 0.25) {
    double cur = std::abs(airy::ai(Cplx(x, 0.0)));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("sector classification") {
  using airy::BoundaryRay;
  using airy::SectorTag;
  CHECK(airy::sector_of(Cplx(1.0, 0.0)).tag == SectorTag::kS0);
  CHECK(airy::sector_of(Cplx(1.0, 0.0)).ray == BoundaryRay::kNone);
  CHECK(airy::sector_of(Cplx(-1.0, 0.0)).tag == SectorTag::kBoundary);
  CHECK(airy::sector_of(Cplx(-1.0, 0.0)).ray == BoundaryRay::kArgPi);
  CHECK(airy::sector_of(Cplx(0.0, 1.0)).tag == SectorTag::kS1);
  CHECK(airy::sector_of(Cplx(0.0, -1.0)).tag == SectorTag::kSm1);
  CHECK(airy::sector_of(Cplx(0.0, 0.0)).ray == BoundaryRay::kOrigin);
  CHECK(airy::sector_of(yspec::unit_phase(kPi / 3.0)).ray ==
        BoundaryRay::kArgPiOver3);
  CHECK(airy::sector_of(yspec::unit_phase(-kPi / 3.0)).ray ==
        BoundaryRay::kArgMinusPiOver3);
  // The tolerance widens the boundary strip.
  CHECK(airy::sector_of(yspec::unit_phase(kPi / 3.0 + 1e-3), 1e-2).tag ==
        SectorTag::kBoundary);
}

TEST_CASE("sector identities for the rotated exponents") {
  // r_k(z) = Re{(e^{-2k pi i/3} z)^{3/2}} (continuous extension across the
  // negative axis).  Within each open sector the three exponents satisfy
  // pairwise ±-relations fixed by which rotation lands where.
  using airy::SectorTag;
  auto rk = [](int k, Cplx z) {
    return yspec::re_pow_3_2(airy::RotationIndex(k).rotation() * z);
  };
  std::mt19937_64 rng(8642);
  std::uniform_real_distribution<double> ur(0.1, 20.0);
  std::uniform_real_distribution<double> ua(-kPi, kPi);
  int tested = 0;
  while (tested < 500) {
    Cplx z = ur(rng) * yspec::unit_phase(ua(rng));
    airy::SectorClass s = airy::sector_of(z, 1e-9);
    if (s.tag == SectorTag::kBoundary) continue;
    ++tested;
    double r0 = rk(0, z), r1 = rk(1, z), rm = rk(-1, z);
    double scale = std::abs(r0) + std::abs(r1) + std::abs(rm) + 1e-300;
    double s1 = (s.tag == SectorTag::kS0) ? 1.0 : -1.0;   // r_1 vs r_{-1}
    double s2 = (s.tag == SectorTag::kSm1) ? 1.0 : -1.0;  // r_0 vs r_1
    double s3 = (s.tag == SectorTag::kS1) ? 1.0 : -1.0;   // r_0 vs r_{-1}
    CHECK(std::abs(r1 - s1 * rm) <= 1e-12 * scale);
    CHECK(std::abs(r0 - s2 * r1) <= 1e-12 * scale);
    CHECK(std::abs(r0 - s3 * rm) <= 1e-12 * scale);
  }
}

TEST_CASE("rotation index validity and allowability") {
  CHECK_THROWS_AS(airy::RotationIndex(2), yspec::Error);
  CHECK_THROWS_AS(airy::RotationIndex(-2), yspec::Error);
  CHECK(airy::RotationIndex(0).value() == 0);
  CHECK(std::abs(airy::RotationIndex(1).rotation() -
                 yspec::unit_phase(-2.0 * kPi / 3.0)) <= 1e-15);
  CHECK(std::abs(airy::RotationIndex(-1).rotation() -
                 yspec::unit_phase(2.0 * kPi / 3.0)) <= 1e-15);

  // Allowable = rotated argument off the cut ray of that member.
  CHECK_FALSE(airy::is_allowable(airy::RotationIndex(0), Cplx(-1.0, 0.0)));
  CHECK(airy::is_allowable(airy::RotationIndex(1), Cplx(-1.0, 0.0)));
  CHECK(airy::is_allowable(airy::RotationIndex(-1), Cplx(-1.0, 0.0)));
  for (int k : {-1, 0, 1}) {
    CHECK(airy::is_allowable(airy::RotationIndex(k), Cplx(1.0, 0.0)));
    CHECK(airy::is_allowable(airy::RotationIndex(k), Cplx(0.0, 0.0)));
  }
  // The cut of member k sits at Arg z = pi + 2k pi/3 (mod 2pi).
  CHECK_FALSE(airy::is_allowable(airy::RotationIndex(1),
                                 yspec::unit_phase(-kPi / 3.0)));
  CHECK_FALSE(airy::is_allowable(airy::RotationIndex(-1),
                                 yspec::unit_phase(kPi / 3.0)));
}

TEST_CASE("rotated evaluation equals evaluation of the rotated argument") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> ur(0.1, 12.0);
  std::uniform_real_distribution<double> ua(-kPi, kPi);
  for (int i = 0; i < 50; ++i) {
    Cplx z = ur(rng) * yspec::unit_phase(ua(rng));
    for (int k : {-1, 0, 1}) {
      airy::RotationIndex rk(k);
      Cplx direct = airy::ai(rk.rotation() * z);
      CHECK(std::abs(airy::ai_rotated(rk, z) - direct) <=
            1e-14 * std::max(1e-300, std::abs(direct)));
    }
  }
}

TEST_CASE("checked evaluation flags range departures") {
  airy::AiValue mid = airy::ai_checked(Cplx(5.0, 0.0));
  CHECK_FALSE(mid.overflow);
  CHECK(std::abs(mid.value) > 0.0);

  // Deep decay direction: |Ai| ~ e^{-876} underflows the double range.
  airy::AiValue low = airy::ai_checked(Cplx(120.0, 0.0));
  CHECK(low.overflow);
  CHECK(low.value == Cplx(0.0, 0.0));

  // Growth direction: |Ai| ~ e^{+876} overflows.
  airy::AiValue high = airy::ai_checked(120.0 * yspec::unit_phase(2.0 * kPi / 3.0));
  CHECK(high.overflow);
  CHECK(!std::isfinite(std::abs(high.value)));

  // The logarithmic path stays finite in both directions.
  CHECK(std::isfinite(airy::log_ai(Cplx(120.0, 0.0)).log_mag));
  CHECK(std::isfinite(
      airy::log_ai(120.0 * yspec::unit_phase(2.0 * kPi / 3.0)).log_mag));
}
