#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pdmean/compound.hpp"
#include "pdmean/linalg.hpp"
#include "support.hpp"

using namespace pdmean;

namespace {

/// Minor det X[S, T] by cofactor expansion, independent of the LU path.
cplx cofactor_det(const Matrix& x, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  const std::size_t k = rows.size();
  if (k == 1) return x(rows[0], cols[0]);
  cplx s = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<std::size_t> sub(cols);
    sub.erase(sub.begin() + static_cast<long>(j));
    const std::vector<std::size_t> r(rows.begin() + 1, rows.end());
    s += (j % 2 ? -1.0 : 1.0) * x(rows[0], cols[j]) * cofactor_det(x, r, sub);
  }
  return s;
}

Matrix oracle_compound(const Matrix& x, std::size_t k) {
  const auto idx = compound_index(x.dim(), k);
  Matrix c(idx.subsets.size());
  for (std::size_t i = 0; i < idx.subsets.size(); ++i)
    for (std::size_t j = 0; j < idx.subsets.size(); ++j) c(i, j) = cofactor_det(x, idx.subsets[i], idx.subsets[j]);
  return c;
}

}  // namespace

TEST_CASE("compound_matrix examples") {
  CHECK(compound_matrix(Matrix::diagonal(std::vector<double>{3, 2, 1}), 2) ==
        Matrix::diagonal(std::vector<double>{6, 3, 2}));
  CHECK(oracle::rel_diff(compound_matrix(Matrix::identity(4), 2), Matrix::identity(6)) == 0.0);
  const Matrix c = compound_matrix(Matrix{{1, 2}, {3, 4}}, 2);
  REQUIRE(c.dim() == 1);
  CHECK(c(0, 0).real() == doctest::Approx(-2.0));
  CHECK(std::abs(c(0, 0).imag()) < 1e-15);
}

TEST_CASE("compound_index and binomial") {
  const auto idx = compound_index(4, 2);
  CHECK(idx.subsets.size() == 6);
  CHECK(idx.subsets.front() == std::vector<std::size_t>{0, 1});
  CHECK(idx.subsets.back() == std::vector<std::size_t>{2, 3});
  CHECK(binomial(12, 6) == 924);
  CHECK(binomial(5, 0) == 1);
}

TEST_CASE("compound_matrix domain") {
  CHECK_THROWS_AS(compound_matrix(Matrix::identity(3), 0), DomainError);
  CHECK_THROWS_AS(compound_matrix(Matrix::identity(3), 4), DomainError);
  CHECK_THROWS_AS(compound_matrix(Matrix::identity(13), 2), DomainError);
  CHECK(compound_matrix(Matrix::identity(12), 6).dim() == 924);
}

TEST_CASE("leading_log_products examples") {
  for (double v : leading_log_products(SpdMatrix::identity(3))) CHECK(std::abs(v) < 1e-15);
  const auto p = leading_log_products(SpdMatrix::diagonal(std::vector<double>{4, 2}));
  CHECK(p[0] == doctest::Approx(std::log(4.0)));
  CHECK(p[1] == doctest::Approx(std::log(8.0)));
  for (int i = 0; i < 20; ++i) {
    Rng rng = gen::stream("llp-det", i);
    const std::size_t m = gen::dim(rng, 1, 6);
    const SpdMatrix a = random_spd(rng, m);
    const cplx d = compound_matrix(a, m)(0, 0);
    CHECK(leading_log_products(a).back() == doctest::Approx(std::log(d.real())).epsilon(1e-9));
  }
}

TEST_CASE("determinant agrees with cofactor expansion") {
  for (int i = 0; i < 30; ++i) {
    Rng rng = gen::stream("det", i);
    const std::size_t m = gen::dim(rng, 1, 5);
    const Matrix x = random_gaussian(rng, m);
    std::vector<std::size_t> all(m);
    for (std::size_t j = 0; j < m; ++j) all[j] = j;
    const cplx want = cofactor_det(x, all, all);
    CHECK(std::abs(determinant(x) - want) <= 1e-12 * (1 + std::abs(want)));
  }
}

TEST_CASE("compound entries agree with cofactor minors") {
  for (int i = 0; i < 20; ++i) {
    Rng rng = gen::stream("compound-oracle", i);
    const std::size_t m = gen::dim(rng, 2, 5);
    const Matrix x = random_gaussian(rng, m);
    for (std::size_t k = 1; k <= m; ++k) CHECK(oracle::rel_diff(compound_matrix(x, k), oracle_compound(x, k)) < 1e-12);
  }
}

TEST_CASE("property: compound of cI is c^k I") {
  for (int i = 0; i < 20; ++i) {
    Rng rng = gen::stream("compound-scalar", i);
    const std::size_t m = gen::dim(rng, 2, 6), k = gen::dim(rng, 1, m);
    const double c = rng.uniform(0.2, 3);
    const Matrix got = compound_matrix(c * Matrix::identity(m), k);
    CHECK(oracle::rel_diff(got, std::pow(c, static_cast<double>(k)) * Matrix::identity(binomial(m, k))) < 1e-9);
  }
}

TEST_CASE("property: compound is multiplicative on 4x4 inputs") {
  for (int i = 0; i < 30; ++i) {
    Rng rng = gen::stream("compound-mult", i);
    const Matrix x = random_gaussian(rng, 4), y = random_gaussian(rng, 4);
    for (std::size_t k = 1; k <= 3; ++k)
      CHECK(relative_frobenius(compound_matrix(x * y, k), compound_matrix(x, k) * compound_matrix(y, k)) < 1e-9);
  }
}

TEST_CASE("property: compound commutes with real powers") {
  for (int i = 0; i < 30; ++i) {
    Rng rng = gen::stream("compound-power", i);
    const std::size_t m = gen::dim(rng, 2, 5);
    const SpdMatrix a = random_spd(rng, m);
    for (double r : {-1.0, 0.5, 2.0})
      for (std::size_t k = 1; k <= m; ++k) {
        const SpdMatrix ck{HermitianMatrix::symmetrize(compound_matrix(a, k))};
        CHECK(relative_frobenius(powm(ck, r), compound_matrix(powm(a, r), k)) < 1e-9);
      }
  }
}

TEST_CASE("property: compound is Loewner monotone") {
  for (int i = 0; i < 30; ++i) {
    Rng rng = gen::stream("compound-monotone", i);
    const std::size_t m = gen::dim(rng, 2, 5);
    const SpdMatrix a = random_spd(rng, m);
    const Matrix g = random_gaussian(rng, m);
    const SpdMatrix b(HermitianMatrix(a.matrix() + 0.5 * multiply_adjoint(g, g)));
    for (std::size_t k = 1; k <= m; ++k)
      CHECK(loewner_leq(HermitianMatrix::symmetrize(compound_matrix(a, k)),
                        HermitianMatrix::symmetrize(compound_matrix(b, k)), 1e-8));
  }
}

TEST_CASE("property: top eigenvalue of the k-th compound is the product of the k largest") {
  for (int i = 0; i < 30; ++i) {
    Rng rng = gen::stream("compound-top", i);
    const std::size_t m = gen::dim(rng, 2, 6);
    const SpdMatrix a = random_spd(rng, m);
    const auto llp = leading_log_products(a);
    for (std::size_t k = 1; k <= m; ++k) {
      const auto ev = oracle::eigenvalues(HermitianMatrix::symmetrize(compound_matrix(a, k)));
      CHECK(ev.front() == doctest::Approx(std::exp(llp[k - 1])).epsilon(1e-9));
    }
  }
}
