// Compiled with -mavx2 -mfma. Complex values are interleaved (re, im), so one
// __m256d holds two complex numbers.

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace pdmean::kernels::avx2 {

namespace {

inline const double* dptr(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dptr(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (re0, im0, re1, im1) -> sum of even lanes, sum of odd lanes
inline void hsum_pairs(__m256d v, double& even, double& odd) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  even = _mm_cvtsd_f64(s);
  odd = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

}  // namespace

void matmul(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  const std::size_t pairs = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = dptr(c + i * n);
    for (std::size_t j = 0; j < 2 * n; ++j) ci[j] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a[i * n + k];
      const __m256d ar = _mm256_set1_pd(aik.real());
      const __m256d ai = _mm256_set1_pd(aik.imag());
      const double* bk = dptr(b + k * n);
      for (std::size_t p = 0; p < pairs; ++p) {
        const __m256d bv = _mm256_loadu_pd(bk + 4 * p);
        const __m256d bs = _mm256_permute_pd(bv, 0b0101);
        // even lanes: ar*br - ai*bi, odd lanes: ar*bi + ai*br
        const __m256d prod = _mm256_fmaddsub_pd(ar, bv, _mm256_mul_pd(ai, bs));
        _mm256_storeu_pd(ci + 4 * p, _mm256_add_pd(_mm256_loadu_pd(ci + 4 * p), prod));
      }
      if (n % 2) {
        const std::size_t j = n - 1;
        const cplx r = aik * b[k * n + j];
        ci[2 * j] += r.real();
        ci[2 * j + 1] += r.imag();
      }
    }
  }
}

void matmul_adjoint(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  const std::size_t pairs = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = dptr(a + i * n);
    for (std::size_t j = 0; j < n; ++j) {
      const double* bj = dptr(b + j * n);
      __m256d direct = _mm256_setzero_pd();   // (ar br, ai bi, ...)
      __m256d crossed = _mm256_setzero_pd();  // (ar bi, ai br, ...)
      for (std::size_t p = 0; p < pairs; ++p) {
        const __m256d av = _mm256_loadu_pd(ai + 4 * p);
        const __m256d bv = _mm256_loadu_pd(bj + 4 * p);
        direct = _mm256_fmadd_pd(av, bv, direct);
        crossed = _mm256_fmadd_pd(av, _mm256_permute_pd(bv, 0b0101), crossed);
      }
      double re = hsum(direct);
      double ar_bi = 0.0, ai_br = 0.0;
      hsum_pairs(crossed, ar_bi, ai_br);
      double im = ai_br - ar_bi;
      if (n % 2) {
        const std::size_t k = n - 1;
        const cplx x = a[i * n + k], y = b[j * n + k];
        re += x.real() * y.real() + x.imag() * y.imag();
        im += x.imag() * y.real() - x.real() * y.imag();
      }
      c[i * n + j] = {re, im};
    }
  }
}

void scale_columns(std::size_t n, const cplx* a, const double* d, cplx* c) {
  const std::size_t pairs = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = dptr(a + i * n);
    double* ci = dptr(c + i * n);
    for (std::size_t p = 0; p < pairs; ++p) {
      const __m256d dv = _mm256_set_pd(d[2 * p + 1], d[2 * p + 1], d[2 * p], d[2 * p]);
      _mm256_storeu_pd(ci + 4 * p, _mm256_mul_pd(_mm256_loadu_pd(ai + 4 * p), dv));
    }
    if (n % 2) c[i * n + n - 1] = a[i * n + n - 1] * d[n - 1];
  }
}

void axpy(std::size_t count, double alpha, const cplx* x, cplx* y) {
  const std::size_t len = 2 * count;
  const double* xs = dptr(x);
  double* ys = dptr(y);
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4)
    _mm256_storeu_pd(ys + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(xs + i), _mm256_loadu_pd(ys + i)));
  for (; i < len; ++i) ys[i] += alpha * xs[i];
}

double sum_abs_sq(std::size_t count, const cplx* x) {
  const std::size_t len = 2 * count;
  const double* xs = dptr(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d v = _mm256_loadu_pd(xs + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < len; ++i) s += xs[i] * xs[i];
  return s;
}

}  // namespace pdmean::kernels::avx2
