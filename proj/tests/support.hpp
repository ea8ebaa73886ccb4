#pragma once

// Independent oracles and seeded generators shared by the unit tests. The
// oracles avoid the library's own linear algebra: eigenvalues come from a
// cyclic Jacobi sweep on the real 2m x 2m embedding of a Hermitian matrix.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "pdmean/matrix.hpp"
#include "pdmean/random.hpp"

namespace oracle {

using pdmean::cplx;
using pdmean::Matrix;

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.dim();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline Matrix adjoint(const Matrix& a) {
  Matrix c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) c(i, j) = std::conj(a(j, i));
  return c;
}

inline double frob(const Matrix& a) {
  double s = 0.0;
  for (cplx v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

inline double rel_diff(const Matrix& a, const Matrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(d) / std::max(frob(b), 1e-300);
}

/// Real symmetric eigenproblem by cyclic Jacobi. `a` is n x n row-major.
/// Returns eigenvalues; `v` receives eigenvectors as columns.
inline std::vector<double> jacobi(std::vector<double> a, std::size_t n, std::vector<double>& v) {
  v.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        total += a[i * n + j] * a[i * n + j];
        if (i != j) off += a[i * n + j] * a[i * n + j];
      }
    if (off <= 1e-32 * total) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
  }
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i * n + i];
  return d;
}

inline std::vector<double> embed(const Matrix& h) {
  const std::size_t m = h.dim(), n = 2 * m;
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      a[i * n + j] = h(i, j).real();
      a[(i + m) * n + (j + m)] = h(i, j).real();
      a[i * n + (j + m)] = -h(i, j).imag();
      a[(i + m) * n + j] = h(i, j).imag();
    }
  return a;
}

/// Eigenvalues of a Hermitian matrix, decreasing. Each appears twice in the
/// embedding; every other one is kept.
inline std::vector<double> eigenvalues(const Matrix& h) {
  std::vector<double> v;
  std::vector<double> d = jacobi(embed(h), 2 * h.dim(), v);
  std::sort(d.begin(), d.end(), std::greater<>());
  std::vector<double> out;
  for (std::size_t i = 0; i < d.size(); i += 2) out.push_back(d[i]);
  return out;
}

/// f(H) through the embedding: V f(D) V^T, read back as Re + i Im blocks.
inline Matrix function(const Matrix& h, const std::function<double(double)>& f) {
  const std::size_t m = h.dim(), n = 2 * m;
  std::vector<double> v;
  const std::vector<double> d = jacobi(embed(h), n, v);
  Matrix out(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double re = 0.0, im = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double fk = f(d[k]);
        re += v[i * n + k] * fk * v[j * n + k];
        im += v[(i + m) * n + k] * fk * v[j * n + k];
      }
      out(i, j) = cplx(re, im);
    }
  return out;
}

inline Matrix power(const Matrix& h, double r) {
  return function(h, [r](double x) { return std::pow(x, r); });
}

inline double operator_norm(const Matrix& x) {
  const std::vector<double> ev = eigenvalues(matmul(adjoint(x), x));
  return std::sqrt(std::max(ev.front(), 0.0));
}

/// Weighted scalar power mean (sum w x^t)^{1/t}; t = 0 is the geometric mean.
inline double scalar_power_mean(const std::vector<double>& x, const std::vector<double>& w, double t) {
  double s = 0.0;
  if (t == 0.0) {
    for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * std::log(x[j]);
    return std::exp(s);
  }
  for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * std::pow(x[j], t);
  return std::pow(s, 1.0 / t);
}

}  // namespace oracle

namespace gen {

/// Seeded stream for property case `i` of a named property.
inline pdmean::Rng stream(const std::string& property, int i) {
  return pdmean::Rng::derive(0x5eed0000ull + static_cast<std::uint64_t>(i), property);
}

inline std::size_t dim(pdmean::Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next() % (hi - lo + 1));
}

}  // namespace gen
