#include "yspec/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "yspec/errors.hpp"

namespace yspec {

DiscreteOperator discretize(const PiecewiseLinearPotential& v, double h, int n,
                            bool midpoint_average_at_jumps) {
  if (n < 1) fail(ErrorKind::kBadArgument, "discretize: n must be >= 1");
  DiscreteOperator a;
  a.n = n;
  a.h = h;
  a.dx = 2.0 / (n + 1);
  a.off = Cplx(-h * h / (a.dx * a.dx), 0.0);
  a.diag.resize(static_cast<size_t>(n));
  a.x.resize(static_cast<size_t>(n));
  const double kin = 2.0 * h * h / (a.dx * a.dx);
  std::vector<double> bps = v.breakpoints();
  for (int j = 1; j <= n; ++j) {
    double xj = -1.0 + j * a.dx;
    Cplx vx = v.evaluate(xj);
    if (midpoint_average_at_jumps) {
      for (size_t b = 0; b < bps.size(); ++b) {
        if (std::fabs(xj - bps[b]) <= 1e-12) {
          // V(x-) from segment b, V(x+) from segment b+1
          vx = 0.5 * (v.segment(static_cast<int>(b)).at(xj) +
                      v.segment(static_cast<int>(b) + 1).at(xj));
          break;
        }
      }
    }
    a.x[static_cast<size_t>(j - 1)] = xj;
    a.diag[static_cast<size_t>(j - 1)] = vx + kin;
  }
  return a;
}

double operator_scale(const DiscreteOperator& a) {
  double m = 0.0;
  for (const Cplx& d : a.diag) m = std::max(m, std::abs(d));
  return m + 2.0 * std::abs(a.off);
}

namespace {

bool offdiag_small(const std::vector<Cplx>& d, const std::vector<Cplx>& e, int i) {
  return std::abs(e[static_cast<size_t>(i)]) <=
         1e-15 * (std::abs(d[static_cast<size_t>(i)]) +
                  std::abs(d[static_cast<size_t>(i) + 1])) +
             1e-280;
}

// Eigenvalue of [[a, b], [b, c]] closer to c.
Cplx wilkinson_shift(Cplx a, Cplx b, Cplx c) {
  Cplx m = 0.5 * (a + c), delta = 0.5 * (a - c);
  Cplx q = std::sqrt(delta * delta + b * b);
  Cplx m1 = m + q, m2 = m - q;
  return std::abs(m1 - c) <= std::abs(m2 - c) ? m1 : m2;
}

// One implicit QR sweep on the window [lo, hi] with shift mu, using
// complex-orthogonal rotations (c^2 + s^2 = 1, G^T G = I).  Returns false on
// isotropic breakdown (x^2 + z^2 ~ 0 with x, z not both tiny) so the caller
// can retry with a perturbed shift.
bool qr_sweep(std::vector<Cplx>& d, std::vector<Cplx>& e, int lo, int hi, Cplx mu) {
  Cplx x = d[static_cast<size_t>(lo)] - mu;
  Cplx z = e[static_cast<size_t>(lo)];
  for (int k = lo; k < hi; ++k) {
    const size_t uk = static_cast<size_t>(k);
    Cplx r = std::sqrt(x * x + z * z);
    double mag = std::abs(x) + std::abs(z);
    if (mag == 0.0) return false;
    if (std::abs(r) < 1e-30 * mag) return false;  // isotropic vector
    Cplx c = x / r, s = z / r;
    if (std::norm(c) + std::norm(s) > 1e12) return false;  // rotation blow-up
    if (k > lo) e[uk - 1] = r;
    Cplx dk = d[uk], dk1 = d[uk + 1], ek = e[uk];
    d[uk] = c * c * dk + 2.0 * c * s * ek + s * s * dk1;
    d[uk + 1] = s * s * dk - 2.0 * c * s * ek + c * c * dk1;
    e[uk] = (c * c - s * s) * ek + c * s * (dk1 - dk);
    if (k < hi - 1) {
      Cplx b = s * e[uk + 1];
      e[uk + 1] = c * e[uk + 1];
      x = e[uk];
      z = b;
    }
  }
  return true;
}

}  // namespace

std::vector<Cplx> tridiag_eigenvalues(std::vector<Cplx> d, std::vector<Cplx> e) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return {};
  if (e.size() + 1 != d.size())
    fail(ErrorKind::kBadArgument, "tridiag: e must have size n-1");

  const long cap = 40L * n;
  long sweeps = 0;
  int hi = n - 1;
  int last_hi = -1, stuck = 0;

  while (hi > 0) {
    if (offdiag_small(d, e, hi - 1)) {
      e[static_cast<size_t>(hi) - 1] = Cplx(0.0, 0.0);
      --hi;
      continue;
    }
    int lo = hi - 1;
    while (lo > 0 && !offdiag_small(d, e, lo - 1)) --lo;

    if (hi == last_hi) {
      ++stuck;
    } else {
      stuck = 0;
      last_hi = hi;
    }
    Cplx mu =
        wilkinson_shift(d[static_cast<size_t>(hi) - 1],
                        e[static_cast<size_t>(hi) - 1], d[static_cast<size_t>(hi)]);
    if (stuck > 0 && stuck % 9 == 0) {
      // deterministic exceptional shift to break limit cycles
      mu = d[static_cast<size_t>(hi)] +
           Cplx(1.46, 0.86) * std::abs(e[static_cast<size_t>(hi) - 1]);
    }
    bool ok = false;
    for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
      std::vector<Cplx> dt = d, et = e;
      if (qr_sweep(dt, et, lo, hi, mu)) {
        d = std::move(dt);
        e = std::move(et);
        ok = true;
      } else {
        // nudge the shift off the isotropic configuration
        double s = std::abs(d[static_cast<size_t>(hi)]) +
                   std::abs(e[static_cast<size_t>(hi) - 1]) + 1.0;
        mu += Cplx(3e-9, 2e-9) * s * static_cast<double>(attempt + 1);
      }
    }
    if (!ok)
      fail(ErrorKind::kQrStagnation, "QR sweep breakdown could not be dodged");
    if (++sweeps > cap)
      fail(ErrorKind::kQrStagnation, "QR iteration exceeded its sweep budget");
  }
  return d;
}

std::vector<Cplx> eig_all(const DiscreteOperator& a) {
  std::vector<Cplx> e(a.diag.size() > 1 ? a.diag.size() - 1 : 0, a.off);
  std::vector<Cplx> lam = tridiag_eigenvalues(a.diag, e);
  std::sort(lam.begin(), lam.end(), [](Cplx x, Cplx y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return lam;
}

namespace {

// Tridiagonal LU with partial pivoting (3-band U plus multipliers), and the
// corresponding solve.  Layout mirrors the classic gttrf/gtts2 pair.
struct TriLU {
  int n = 0;
  std::vector<Cplx> dd, du, du2, mult;
  std::vector<bool> swapped;
  bool ok = false;
};

TriLU tri_lu(const std::vector<Cplx>& diag, Cplx off) {
  TriLU f;
  f.n = static_cast<int>(diag.size());
  f.dd = diag;
  f.du.assign(std::max(f.n - 1, 0), off);
  f.du2.assign(std::max(f.n - 2, 0), Cplx(0.0, 0.0));
  f.mult.assign(std::max(f.n - 1, 0), Cplx(0.0, 0.0));
  f.swapped.assign(std::max(f.n - 1, 0), false);
  std::vector<Cplx> sub(std::max(f.n - 1, 0), off);

  for (int i = 0; i + 1 < f.n; ++i) {
    const size_t ui = static_cast<size_t>(i);
    Cplx l = sub[ui];
    if (std::abs(f.dd[ui]) >= std::abs(l)) {
      if (f.dd[ui] == Cplx(0.0, 0.0)) return f;  // ok stays false
      Cplx fac = l / f.dd[ui];
      f.mult[ui] = fac;
      f.dd[ui + 1] -= fac * f.du[ui];
    } else {
      Cplx fac = f.dd[ui] / l;
      f.mult[ui] = fac;
      f.swapped[ui] = true;
      Cplx old_d1 = f.dd[ui + 1];
      Cplx old_u1 = (i + 2 < f.n) ? f.du[ui + 1] : Cplx(0.0, 0.0);
      f.dd[ui] = l;
      f.dd[ui + 1] = f.du[ui] - fac * old_d1;
      f.du[ui] = old_d1;
      if (i + 2 < f.n) {
        f.du2[ui] = old_u1;
        f.du[ui + 1] = -fac * old_u1;
      }
    }
  }
  if (f.dd[static_cast<size_t>(f.n) - 1] == Cplx(0.0, 0.0)) return f;
  f.ok = true;
  return f;
}

std::vector<Cplx> tri_lu_solve(const TriLU& f, std::vector<Cplx> b) {
  const int n = f.n;
  for (int i = 0; i + 1 < n; ++i) {
    const size_t ui = static_cast<size_t>(i);
    if (f.swapped[ui]) std::swap(b[ui], b[ui + 1]);
    b[ui + 1] -= f.mult[ui] * b[ui];
  }
  std::vector<Cplx>& x = b;
  x[static_cast<size_t>(n) - 1] /= f.dd[static_cast<size_t>(n) - 1];
  if (n >= 2) {
    size_t i = static_cast<size_t>(n) - 2;
    x[i] = (x[i] - f.du[i] * x[i + 1]) / f.dd[i];
  }
  for (int i = n - 3; i >= 0; --i) {
    const size_t ui = static_cast<size_t>(i);
    x[ui] = (x[ui] - f.du[ui] * x[ui + 1] - f.du2[ui] * x[ui + 2]) / f.dd[ui];
  }
  return b;
}

// Givens-QR factor/solve of a tridiagonal system, used when the LU pivot
// chain breaks down exactly.
std::vector<Cplx> tri_qr_solve(const std::vector<Cplx>& diag, Cplx off,
                               std::vector<Cplx> b) {
  const int n = static_cast<int>(diag.size());
  std::vector<Cplx> r0 = diag;
  std::vector<Cplx> r1(std::max(n - 1, 0), off);
  std::vector<Cplx> r2(std::max(n - 2, 0), Cplx(0.0, 0.0));
  for (int i = 0; i + 1 < n; ++i) {
    const size_t ui = static_cast<size_t>(i);
    Cplx a = r0[ui], c = off;  // column i entries at rows i, i+1
    double t = std::hypot(std::abs(a), std::abs(c));
    if (t == 0.0) continue;
    Cplx ca = std::conj(a) / t, cb = std::conj(c) / t;
    // G = [[ca, cb], [-c/t, a/t]] maps (a, c) to (t, 0)
    Cplx g10 = -c / t, g11 = a / t;
    r0[ui] = Cplx(t, 0.0);
    Cplx u1 = r1[ui], d1 = r0[ui + 1];
    r1[ui] = ca * u1 + cb * d1;
    r0[ui + 1] = g10 * u1 + g11 * d1;
    if (i + 2 < n) {
      Cplx u2 = r2[ui], s1 = r1[ui + 1];
      r2[ui] = ca * u2 + cb * s1;
      r1[ui + 1] = g10 * u2 + g11 * s1;
    }
    Cplx b0 = b[ui], b1 = b[ui + 1];
    b[ui] = ca * b0 + cb * b1;
    b[ui + 1] = g10 * b0 + g11 * b1;
  }
  std::vector<Cplx>& x = b;
  for (int i = n - 1; i >= 0; --i) {
    const size_t ui = static_cast<size_t>(i);
    Cplx acc = x[ui];
    if (i + 1 < n) acc -= r1[ui] * x[ui + 1];
    if (i + 2 < n) acc -= r2[ui] * x[ui + 2];
    Cplx dv = r0[ui];
    if (dv == Cplx(0.0, 0.0)) dv = Cplx(1e-290, 0.0);
    x[ui] = acc / dv;
  }
  return b;
}

double vec_norm(const std::vector<Cplx>& v) {
  double s = 0.0;
  for (const Cplx& c : v) s += std::norm(c);
  return std::sqrt(s);
}

}  // namespace

double sigma_min(const DiscreteOperator& a, Cplx z) {
  const int n = a.n;
  std::vector<Cplx> diag(a.diag);
  for (Cplx& d : diag) d -= z;
  if (n == 1) return std::abs(diag[0]);

  TriLU lu = tri_lu(diag, a.off);
  auto solve = [&](std::vector<Cplx> rhs) {
    return lu.ok ? tri_lu_solve(lu, std::move(rhs))
                 : tri_qr_solve(diag, a.off, std::move(rhs));
  };
  // B^{-H} rhs via complex symmetry: B^H w = rhs <=> B conj(w) = conj(rhs)
  auto solve_adj = [&](std::vector<Cplx> rhs) {
    for (Cplx& c : rhs) c = std::conj(c);
    std::vector<Cplx> w = solve(std::move(rhs));
    for (Cplx& c : w) c = std::conj(c);
    return w;
  };
  auto apply = [&](const std::vector<Cplx>& v) {
    std::vector<Cplx> bv(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      const size_t uj = static_cast<size_t>(j);
      Cplx acc = diag[uj] * v[uj];
      if (j > 0) acc += a.off * v[uj - 1];
      if (j + 1 < n) acc += a.off * v[uj + 1];
      bv[uj] = acc;
    }
    return bv;
  };
  auto dot = [n](const std::vector<Cplx>& x, const std::vector<Cplx>& y) {
    Cplx s{0.0, 0.0};
    for (int j = 0; j < n; ++j)
      s += std::conj(x[static_cast<size_t>(j)]) * y[static_cast<size_t>(j)];
    return s;
  };

  // Two-vector subspace iteration on (B^H B)^{-1} with Rayleigh-Ritz
  // extraction: a near-tie between the two smallest singular values is
  // resolved exactly by the projected 2x2 problem (single-vector power
  // iteration stalls there, its convergence ratio being the square of the
  // tie ratio), so convergence is governed by the gap to the third value.
  std::vector<std::vector<Cplx>> v(2, std::vector<Cplx>(static_cast<size_t>(n)));
  for (int j = 0; j < n; ++j) {
    v[0][static_cast<size_t>(j)] =
        Cplx(std::cos(0.7 * j + 0.3), std::sin(1.3 * j + 1.1));
    v[1][static_cast<size_t>(j)] =
        Cplx(std::cos(1.9 * j + 0.5), std::sin(0.6 * j + 2.0));
  }
  auto orthonormalize = [&]() {
    double n0 = vec_norm(v[0]);
    for (Cplx& c : v[0]) c /= n0;
    Cplx p = dot(v[0], v[1]);
    for (int j = 0; j < n; ++j) v[1][static_cast<size_t>(j)] -= p * v[0][static_cast<size_t>(j)];
    double n1 = vec_norm(v[1]);
    if (!(n1 > 1e-14)) {  // degenerate second direction: reseed
      for (int j = 0; j < n; ++j)
        v[1][static_cast<size_t>(j)] = Cplx(std::sin(0.4 * j + 1.7), std::cos(2.1 * j));
      p = dot(v[0], v[1]);
      for (int j = 0; j < n; ++j) v[1][static_cast<size_t>(j)] -= p * v[0][static_cast<size_t>(j)];
      n1 = vec_norm(v[1]);
    }
    for (Cplx& c : v[1]) c /= n1;
  };
  orthonormalize();

  // Smallest eigenvalue of the 2x2 Hermitian Gram matrix of (B v0, B v1):
  // the Rayleigh-Ritz value for sigma^2 on span(v0, v1).
  auto ritz_sigma = [&]() {
    std::vector<Cplx> b0 = apply(v[0]), b1 = apply(v[1]);
    double g00 = dot(b0, b0).real(), g11 = dot(b1, b1).real();
    Cplx g01 = dot(b0, b1);
    double mid = 0.5 * (g00 + g11);
    double rad = std::sqrt(0.25 * (g00 - g11) * (g00 - g11) + std::norm(g01));
    return std::sqrt(std::max(mid - rad, 0.0));
  };

  double prev = -1.0;
  for (int it = 0; it < 200; ++it) {
    for (auto& vi : v) {
      std::vector<Cplx> w = solve(solve_adj(vi));  // (B^H B)^{-1} vi
      double nw = vec_norm(w);
      if (!(nw > 0.0) || !std::isfinite(nw)) return ritz_sigma();
      for (Cplx& c : w) c /= nw;
      vi = std::move(w);
    }
    orthonormalize();
    double est = ritz_sigma();
    if (prev >= 0.0 && std::fabs(est - prev) <= 1e-12 * est + 1e-300) break;
    prev = est;
  }
  return ritz_sigma();
}

PseudospectraGrid pseudospectra_grid(const DiscreteOperator& a,
                                     const SearchRegion& box, int nx, int ny,
                                     int threads) {
  if (nx < 1 || ny < 1) fail(ErrorKind::kBadArgument, "grid: nx, ny must be >= 1");
  PseudospectraGrid g;
  g.box = box;
  g.nx = nx;
  g.ny = ny;
  g.scale = operator_scale(a);
  g.log10_sigma.assign(static_cast<size_t>(nx) * ny, 0.0);

  int t = threads > 0 ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  t = std::min(t, ny);

  const double dxg = box.width() / nx, dyg = box.height() / ny;
  auto run_rows = [&](int j0, int j1) {
    for (int j = j0; j < j1; ++j) {
      for (int k = 0; k < nx; ++k) {
        Cplx z(box.re_lo + (k + 0.5) * dxg, box.im_lo + (j + 0.5) * dyg);
        double s = sigma_min(a, z);
        g.log10_sigma[static_cast<size_t>(j) * nx + k] =
            std::log10(std::max(s, 1e-300));
      }
    }
  };
  if (t == 1) {
    run_rows(0, ny);
  } else {
    std::vector<std::thread> pool;
    int per = (ny + t - 1) / t;
    for (int i = 0; i < t; ++i) {
      int j0 = i * per, j1 = std::min(ny, j0 + per);
      if (j0 >= j1) break;
      pool.emplace_back(run_rows, j0, j1);
    }
    for (std::thread& th : pool) th.join();
  }
  return g;
}

}  // namespace yspec
