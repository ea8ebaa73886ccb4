#pragma once

// Antisymmetric tensor powers (compound matrices).

#include <cstddef>
#include <vector>

#include "pdmean/matrix.hpp"

namespace pdmean {

/// Largest ambient dimension accepted by compound_matrix (C(12,6) = 924).
inline constexpr std::size_t kMaxCompoundDim = 12;

/// The C(m, k) k-element subsets of {0..m-1} in lexicographic order.
struct CompoundIndex {
  std::size_t m = 0;
  std::size_t k = 0;
  std::vector<std::vector<std::size_t>> subsets;
};

CompoundIndex compound_index(std::size_t m, std::size_t k);

std::size_t binomial(std::size_t n, std::size_t k);

/// Determinant by LU with partial pivoting.
cplx determinant(const Matrix& x);

/// k-th compound: entry (S, T) is the minor det X[S, T]. Requires
/// 1 <= k <= m <= kMaxCompoundDim; DomainError otherwise.
Matrix compound_matrix(const Matrix& x, std::size_t k);

/// value[k-1] = sum_{i<=k} log lambda_i(A), eigenvalues decreasing.
std::vector<double> leading_log_products(const SpdMatrix& a);

}  // namespace pdmean
