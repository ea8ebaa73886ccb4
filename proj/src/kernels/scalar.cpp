#include "kernels_internal.hpp"

namespace pdmean::kernels::scalar {

void matmul(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < n * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx* ci = c + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a[i * n + k];
      const cplx* bk = b + k * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
}

void matmul_adjoint(std::size_t n, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx* ai = a + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const cplx* bj = b + j * n;
      double re = 0.0, im = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        // a * conj(b)
        re += ai[k].real() * bj[k].real() + ai[k].imag() * bj[k].imag();
        im += ai[k].imag() * bj[k].real() - ai[k].real() * bj[k].imag();
      }
      c[i * n + j] = {re, im};
    }
  }
}

void scale_columns(std::size_t n, const cplx* a, const double* d, cplx* c) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] = a[i * n + j] * d[j];
}

void axpy(std::size_t count, double alpha, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < count; ++i) y[i] += alpha * x[i];
}

double sum_abs_sq(std::size_t count, const cplx* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < count; ++i) s += std::norm(x[i]);
  return s;
}

}  // namespace pdmean::kernels::scalar
