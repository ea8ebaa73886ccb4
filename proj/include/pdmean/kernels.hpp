#pragma once

// Dense complex inner loops behind Matrix arithmetic. Every kernel has a
// portable scalar reference; an AVX2+FMA variant is compiled on x86-64 and
// chosen at first use when the CPU supports it. Setting the environment
// variable PDMEAN_KERNELS=scalar forces the reference path.

#include <complex>
#include <cstddef>

namespace pdmean::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  const char* name;
  /// c = a * b, all n x n row-major. c must not alias a or b.
  void (*matmul)(std::size_t n, const cplx* a, const cplx* b, cplx* c);
  /// c = a * b^H.
  void (*matmul_adjoint)(std::size_t n, const cplx* a, const cplx* b, cplx* c);
  /// c = a * diag(d).
  void (*scale_columns)(std::size_t n, const cplx* a, const double* d, cplx* c);
  /// y += alpha * x over `count` entries.
  void (*axpy)(std::size_t count, double alpha, const cplx* x, cplx* y);
  /// sum |x_i|^2
  double (*sum_abs_sq)(std::size_t count, const cplx* x);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_table() noexcept;

/// The table used by the library; fixed for the lifetime of the process.
const KernelTable& active() noexcept;

}  // namespace pdmean::kernels
