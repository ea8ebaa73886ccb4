#pragma once

#include "pdmean/kernels.hpp"

namespace pdmean::kernels {

namespace scalar {
void matmul(std::size_t n, const cplx* a, const cplx* b, cplx* c);
void matmul_adjoint(std::size_t n, const cplx* a, const cplx* b, cplx* c);
void scale_columns(std::size_t n, const cplx* a, const double* d, cplx* c);
void axpy(std::size_t count, double alpha, const cplx* x, cplx* y);
double sum_abs_sq(std::size_t count, const cplx* x);
}  // namespace scalar

#ifdef PDMEAN_HAVE_AVX2
namespace avx2 {
void matmul(std::size_t n, const cplx* a, const cplx* b, cplx* c);
void matmul_adjoint(std::size_t n, const cplx* a, const cplx* b, cplx* c);
void scale_columns(std::size_t n, const cplx* a, const double* d, cplx* c);
void axpy(std::size_t count, double alpha, const cplx* x, cplx* y);
double sum_abs_sq(std::size_t count, const cplx* x);
}  // namespace avx2
#endif

}  // namespace pdmean::kernels
