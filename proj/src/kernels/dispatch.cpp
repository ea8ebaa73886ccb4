#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace pdmean::kernels {

namespace {

constexpr KernelTable kScalar{Backend::Scalar,        "scalar",           scalar::matmul,
                              scalar::matmul_adjoint, scalar::scale_columns, scalar::axpy,
                              scalar::sum_abs_sq};

#ifdef PDMEAN_HAVE_AVX2
constexpr KernelTable kAvx2{Backend::Avx2,          "avx2",            avx2::matmul,
                            avx2::matmul_adjoint,   avx2::scale_columns, avx2::axpy,
                            avx2::sum_abs_sq};
#endif

const KernelTable& select() noexcept {
  if (const char* env = std::getenv("PDMEAN_KERNELS"); env && std::string_view(env) == "scalar")
    return kScalar;
  if (const KernelTable* t = avx2_table()) return *t;
  return kScalar;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#ifdef PDMEAN_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace pdmean::kernels
