#include "pdmean/compound.hpp"

#include <cmath>

#include "pdmean/error.hpp"

namespace pdmean {

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

CompoundIndex compound_index(std::size_t m, std::size_t k) {
  if (k < 1 || k > m) throw DomainError("compound order k must satisfy 1 <= k <= m");
  CompoundIndex idx{m, k, {}};
  idx.subsets.reserve(binomial(m, k));
  std::vector<std::size_t> s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = i;
  while (true) {
    idx.subsets.push_back(s);
    // advance to the next combination in lexicographic order
    std::size_t i = k;
    while (i > 0 && s[i - 1] == m - k + i - 1) --i;
    if (i == 0) break;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
  }
  return idx;
}

cplx determinant(const Matrix& x) {
  const std::size_t n = x.dim();
  Matrix lu = x;
  cplx det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(lu(r, c)) > std::abs(lu(piv, c))) piv = r;
    if (lu(piv, c) == cplx(0.0)) return 0.0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(c, j), lu(piv, j));
      det = -det;
    }
    det *= lu(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const cplx f = lu(r, c) / lu(c, c);
      for (std::size_t j = c + 1; j < n; ++j) lu(r, j) -= f * lu(c, j);
    }
  }
  return det;
}

Matrix compound_matrix(const Matrix& x, std::size_t k) {
  const std::size_t m = x.dim();
  if (m > kMaxCompoundDim)
    throw DomainError("compound_matrix: dimension " + std::to_string(m) + " exceeds " +
                      std::to_string(kMaxCompoundDim));
  const CompoundIndex idx = compound_index(m, k);
  const std::size_t n = idx.subsets.size();
  Matrix out(n);
  Matrix minor(k);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& rows = idx.subsets[a];
    for (std::size_t b = 0; b < n; ++b) {
      const auto& cols = idx.subsets[b];
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) minor(i, j) = x(rows[i], cols[j]);
      out(a, b) = determinant(minor);
    }
  }
  return out;
}

std::vector<double> leading_log_products(const SpdMatrix& a) {
  std::vector<double> out;
  out.reserve(a.dim());
  double acc = 0.0;
  for (double v : a.eigenvalues()) {
    acc += std::log(v);
    out.push_back(acc);
  }
  return out;
}

}  // namespace pdmean
