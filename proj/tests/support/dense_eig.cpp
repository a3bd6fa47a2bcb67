#include "support/dense_eig.hpp"

#include <algorithm>
#include <stdexcept>

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

namespace yspec::testsupport {

namespace {

void sort_re_im(std::vector<Cplx>& w) {
  std::sort(w.begin(), w.end(), [](Cplx a, Cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

std::vector<Cplx> tridiag_dense(const std::vector<Cplx>& d,
                                const std::vector<Cplx>& e) {
  const int n = static_cast<int>(d.size());
  if (e.size() + 1 != d.size()) throw std::invalid_argument("tridiag sizes");
  std::vector<Cplx> a(static_cast<size_t>(n) * n, Cplx(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    a[static_cast<size_t>(i) * n + i] = d[static_cast<size_t>(i)];
    if (i + 1 < n) {
      a[static_cast<size_t>(i) * n + i + 1] = e[static_cast<size_t>(i)];
      a[static_cast<size_t>(i + 1) * n + i] = e[static_cast<size_t>(i)];
    }
  }
  return a;
}

}  // namespace

std::vector<Cplx> dense_eigenvalues(std::vector<Cplx> a, int n) {
  std::vector<Cplx> w(static_cast<size_t>(n));
  // LAPACKE's row-major wrapper insists on ldvl/ldvr >= n even with 'N'.
  int info = LAPACKE_zgeev(LAPACK_ROW_MAJOR, 'N', 'N', n, a.data(), n, w.data(),
                           nullptr, n, nullptr, n);
  if (info != 0) throw std::runtime_error("zgeev failed");
  sort_re_im(w);
  return w;
}

std::vector<Cplx> tridiag_eigenvalues_oracle(const std::vector<Cplx>& d,
                                             const std::vector<Cplx>& e) {
  return dense_eigenvalues(tridiag_dense(d, e), static_cast<int>(d.size()));
}

std::vector<double> dense_singular_values(std::vector<Cplx> a, int n) {
  std::vector<double> s(static_cast<size_t>(n));
  std::vector<double> superb(static_cast<size_t>(n));
  int info = LAPACKE_zgesvd(LAPACK_ROW_MAJOR, 'N', 'N', n, n, a.data(), n,
                            s.data(), nullptr, 1, nullptr, 1, superb.data());
  if (info != 0) throw std::runtime_error("zgesvd failed");
  return s;
}

double tridiag_sigma_min_oracle(const std::vector<Cplx>& d,
                                const std::vector<Cplx>& e, Cplx z) {
  const int n = static_cast<int>(d.size());
  std::vector<Cplx> a = tridiag_dense(d, e);
  for (int i = 0; i < n; ++i) a[static_cast<size_t>(i) * n + i] -= z;
  std::vector<double> s = dense_singular_values(std::move(a), n);
  return s.back();
}

}  // namespace yspec::testsupport
