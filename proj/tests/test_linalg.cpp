#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string_view>

#include "pdmean/kernels.hpp"
#include "pdmean/linalg.hpp"
#include "support.hpp"

using namespace pdmean;

namespace {

SpdMatrix diag(std::vector<double> d) { return SpdMatrix::diagonal(d); }
SpdMatrix spd(const Matrix& m) { return SpdMatrix(HermitianMatrix(m)); }
const Matrix kTwoOne{{2, 1}, {1, 2}};

}  // namespace

TEST_CASE("kernel backend follows the environment") {
  const char* env = std::getenv("PDMEAN_KERNELS");
  if (env && std::string_view(env) == "scalar") CHECK(kernels::active().backend == kernels::Backend::Scalar);
}

TEST_CASE("eigh examples") {
  SUBCASE("diagonal input sorts decreasing with a permutation basis") {
    const auto s = eigh(HermitianMatrix(Matrix::diagonal(std::vector<double>{3, 1, 2})));
    CHECK(s.values == std::vector<double>{3, 2, 1});
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        const double a = std::abs(s.vectors(i, j));
        CHECK((std::abs(a) < 1e-15 || std::abs(a - 1.0) < 1e-15));
      }
    CHECK(std::abs(s.vectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(s.vectors(2, 1)) == doctest::Approx(1.0));
  }
  SUBCASE("identity") {
    const auto s = eigh(HermitianMatrix(Matrix::identity(4)));
    for (double v : s.values) CHECK(v == doctest::Approx(1.0));
    CHECK(oracle::rel_diff(oracle::matmul(oracle::adjoint(s.vectors), s.vectors), Matrix::identity(4)) < 1e-14);
  }
  SUBCASE("2x2 by characteristic polynomial") {
    const auto s = eigh(HermitianMatrix(kTwoOne));
    CHECK(s.values[0] == doctest::Approx(3.0));
    CHECK(s.values[1] == doctest::Approx(1.0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s.vectors(0, 0)) == doctest::Approx(r));
    CHECK(std::abs(s.vectors(1, 0)) == doctest::Approx(r));
    CHECK(std::abs(s.vectors(0, 0) + s.vectors(1, 0)) == doctest::Approx(2 * r));
    CHECK(std::abs(s.vectors(0, 1) + s.vectors(1, 1)) < 1e-14);
  }
}

TEST_CASE("matrix_function examples") {
  CHECK(oracle::rel_diff(powm(diag({4, 9}), 0.5), Matrix::diagonal(std::vector<double>{2, 3})) < 1e-15);
  CHECK(frobenius_norm(logm(SpdMatrix::identity(3))) < 1e-15);
  const Matrix inv{{2.0 / 3, -1.0 / 3}, {-1.0 / 3, 2.0 / 3}};
  CHECK(oracle::rel_diff(powm(spd(kTwoOne), -1.0), inv) < 1e-14);
  CHECK(oracle::rel_diff(inverse(spd(kTwoOne)), inv) < 1e-14);
  CHECK_THROWS_AS(matrix_function(HermitianMatrix(Matrix::diagonal(std::vector<double>{1, -1})), fn::Log{}),
                  DomainError);
  // exp accepts indefinite input.
  const auto e = expm(HermitianMatrix(Matrix::diagonal(std::vector<double>{1, -1})));
  CHECK(e.lambda_max() == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("congruence examples") {
  const HermitianMatrix a(Matrix::diagonal(std::vector<double>{1, 3}));
  CHECK(congruence(Matrix::identity(2), a) == a);
  CHECK(oracle::rel_diff(congruence(2.0 * Matrix::identity(2), a), Matrix::diagonal(std::vector<double>{4, 12})) <
        1e-15);
  const Matrix c{{1, 1}, {0, 1}};
  CHECK(oracle::rel_diff(congruence(c, HermitianMatrix(Matrix::identity(2))), Matrix{{2, 1}, {1, 1}}) < 1e-15);
}

TEST_CASE("geometric_mean examples") {
  const SpdMatrix a4 = SpdMatrix::identity(2).scaled(4), b9 = SpdMatrix::identity(2).scaled(9);
  CHECK(oracle::rel_diff(geometric_mean(a4, b9, 0.5), 6.0 * Matrix::identity(2)) < 1e-14);
  const SpdMatrix a = spd(kTwoOne);
  CHECK(oracle::rel_diff(geometric_mean(a, b9, 0.0), a) < 1e-14);
  // B = I: A #_{1/2} I = A^{1/2}, eigenvalues (sqrt 3, 1) in A's basis.
  const SpdMatrix g = geometric_mean(a, SpdMatrix::identity(2), 0.5);
  CHECK(g.eigenvalues()[0] == doctest::Approx(std::sqrt(3.0)));
  CHECK(g.eigenvalues()[1] == doctest::Approx(1.0));
  CHECK(oracle::rel_diff(g, oracle::power(a, 0.5)) < 1e-14);
}

TEST_CASE("loewner_leq examples") {
  CHECK(loewner_leq(SpdMatrix::identity(2), SpdMatrix::identity(2).scaled(2), 1e-7));
  CHECK_FALSE(loewner_leq(diag({1, 3}), diag({3, 1}), 1e-7));
  const SpdMatrix a = spd(kTwoOne);
  CHECK(loewner_leq(a, a, 0.0));
}

TEST_CASE("operator_norm examples") {
  CHECK(operator_norm(Matrix::diagonal(std::vector<double>{2, 5})) == doctest::Approx(5.0));
  CHECK(operator_norm(Matrix(3)) == 0.0);
  CHECK(operator_norm(Matrix{{0, 3}, {0, 0}}) == doctest::Approx(3.0));
}

TEST_CASE("thompson_distance examples") {
  const SpdMatrix a = spd(kTwoOne);
  CHECK(thompson_distance(a, a) == doctest::Approx(0.0));
  CHECK(thompson_distance(SpdMatrix::identity(3), SpdMatrix::identity(3).scaled(std::exp(2.0))) ==
        doctest::Approx(2.0));
  CHECK(thompson_distance(SpdMatrix::identity(2), diag({4, 0.25})) == doctest::Approx(std::log(4.0)));
}

TEST_CASE("riemannian_distance examples") {
  const SpdMatrix a = spd(kTwoOne);
  CHECK(riemannian_distance(a, a) == doctest::Approx(0.0));
  CHECK(riemannian_distance(SpdMatrix::identity(2), diag({std::exp(1.0), std::exp(-1.0)})) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(riemannian_distance(SpdMatrix::identity(2).scaled(4), SpdMatrix::identity(2).scaled(9)) ==
        doctest::Approx(std::sqrt(2.0) * std::log(9.0 / 4.0)));
}

TEST_CASE("eigenvalues and matrix functions agree with the Jacobi oracle") {
  for (int i = 0; i < 40; ++i) {
    Rng rng = gen::stream("oracle-eigs", i);
    const std::size_t m = gen::dim(rng, 1, 7);
    const SpdMatrix a = random_spd(rng, m, 2.0);
    const auto ev = oracle::eigenvalues(a);
    for (std::size_t k = 0; k < m; ++k) CHECK(a.eigenvalues()[k] == doctest::Approx(ev[k]).epsilon(1e-12));
    const double r = rng.uniform(-2, 2);
    CHECK(oracle::rel_diff(powm(a, r), oracle::power(a, r)) < 1e-11);
    CHECK(oracle::rel_diff(logm(a), oracle::function(a, [](double x) { return std::log(x); })) < 1e-10);
  }
}

TEST_CASE("property: power composition A^(r s) = (A^r)^s") {
  for (int i = 0; i < 60; ++i) {
    Rng rng = gen::stream("power-compose", i);
    const SpdMatrix a = random_spd(rng, gen::dim(rng, 1, 6));
    const double r = rng.uniform(-2, 2), s = rng.uniform(-2, 2);
    CAPTURE(r);
    CAPTURE(s);
    CHECK(relative_frobenius(powm(powm(a, r), s), powm(a, r * s)) < 1e-9);
  }
}

TEST_CASE("property: exp(log A) = A up to condition number 1e6") {
  for (int i = 0; i < 40; ++i) {
    Rng rng = gen::stream("exp-log", i);
    const SpdMatrix a = random_spd(rng, gen::dim(rng, 1, 6), 0.5 * std::log(1e6) * rng.uniform());
    CHECK(relative_frobenius(expm(logm(a)), a) < 1e-9);
  }
}

TEST_CASE("property: A #_t B = B #_(1-t) A") {
  for (int i = 0; i < 40; ++i) {
    Rng rng = gen::stream("gm-symmetry", i);
    const std::size_t m = gen::dim(rng, 1, 6);
    const SpdMatrix a = random_spd(rng, m), b = random_spd(rng, m);
    const double t = rng.uniform();
    CHECK(relative_frobenius(geometric_mean(a, b, t), geometric_mean(b, a, 1.0 - t)) < 1e-9);
  }
}

TEST_CASE("property: Loewner-Heinz, A <= B implies A^r <= B^r for r in [0, 1]") {
  for (int i = 0; i < 40; ++i) {
    Rng rng = gen::stream("loewner-heinz", i);
    const std::size_t m = gen::dim(rng, 1, 6);
    const SpdMatrix a = random_spd(rng, m);
    const Matrix g = random_gaussian(rng, m);
    const SpdMatrix b(HermitianMatrix(a.matrix() + multiply_adjoint(g, g)));
    REQUIRE(loewner_leq(a, b, 1e-12));
    const double r = rng.uniform();
    CHECK(loewner_leq(powm(a, r), powm(b, r), 1e-8));
  }
}

TEST_CASE("property: operator norm of SPD A is its top eigenvalue") {
  for (int i = 0; i < 40; ++i) {
    Rng rng = gen::stream("opnorm", i);
    const SpdMatrix a = random_spd(rng, gen::dim(rng, 1, 7));
    CHECK(std::abs(operator_norm(a.matrix()) - a.lambda_max()) <= 1e-10 * a.lambda_max());
    const Matrix x = random_gaussian(rng, a.dim());
    CHECK(operator_norm(x) == doctest::Approx(oracle::operator_norm(x)).epsilon(1e-11));
  }
}

TEST_CASE("sandwich_power agrees with direct evaluation") {
  for (int i = 0; i < 40; ++i) {
    Rng rng = gen::stream("sandwich", i);
    const std::size_t m = gen::dim(rng, 1, 6);
    const SpdMatrix o = random_spd(rng, m), in = random_spd(rng, m);
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1), z = rng.uniform(0.2, 2);
    const Matrix oa = oracle::power(o, a);
    const Matrix inner = oracle::matmul(oracle::matmul(oa, oracle::power(in, b)), oa);
    const Matrix expected = oracle::power(HermitianMatrix::symmetrize(inner), z);
    CHECK(oracle::rel_diff(sandwich_power(o, a, in, b, z), expected) < 1e-10);
  }
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(SpdMatrix(HermitianMatrix(Matrix::diagonal(std::vector<double>{1, 0}))), DomainError);
  CHECK_THROWS_AS(HermitianMatrix(Matrix{{1, 2}, {0, 1}}), DomainError);
  CHECK_THROWS_AS(thompson_distance(SpdMatrix::identity(2), SpdMatrix::identity(3)), DomainError);
}
