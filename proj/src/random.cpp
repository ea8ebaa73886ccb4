#include "pdmean/random.hpp"

#include <cmath>
#include <numbers>

#include "pdmean/error.hpp"
#include "pdmean/linalg.hpp"

namespace pdmean {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> random_weights_for(Rng& rng, std::size_t n, bool random) {
  std::vector<double> w(n, 1.0);
  if (random)
    for (double& v : w) v = rng.uniform(0.1, 1.0);
  return w;
}

}  // namespace

double Rng::uniform() {
  // 53 random bits.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Rng Rng::derive(std::uint64_t seed, std::string_view label) {
  return Rng(splitmix(splitmix(seed) ^ fnv1a(label)));
}

Matrix random_gaussian(Rng& rng, std::size_t m) {
  Matrix g(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = cplx(re, im) * std::sqrt(0.5);
    }
  return g;
}

Matrix random_unitary(Rng& rng, std::size_t m) {
  // Modified Gram-Schmidt on the columns, run twice for orthogonality.
  Matrix q = random_gaussian(rng, m);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        cplx dot = 0.0;
        for (std::size_t i = 0; i < m; ++i) dot += std::conj(q(i, k)) * q(i, j);
        for (std::size_t i = 0; i < m; ++i) q(i, j) -= dot * q(i, k);
      }
      double norm = 0.0;
      for (std::size_t i = 0; i < m; ++i) norm += std::norm(q(i, j));
      norm = std::sqrt(norm);
      if (!(norm > 1e-300)) throw NumericalError("random_unitary: rank-deficient sample");
      for (std::size_t i = 0; i < m; ++i) q(i, j) /= norm;
    }
  }
  return q;
}

SpdMatrix random_spd(Rng& rng, std::size_t m, double c) {
  if (m == 0) throw DomainError("random_spd: dimension must be positive");
  const Matrix q = random_unitary(rng, m);
  std::vector<double> ev(m);
  for (double& v : ev) v = std::exp(rng.uniform(-c, c));
  return SpdMatrix::from_spectrum(std::move(ev), q);
}

Matrix random_contraction(Rng& rng, std::size_t m, double norm) {
  Matrix x = random_gaussian(rng, m);
  x *= norm / operator_norm(x);
  return x;
}

Ensemble random_ensemble(Rng& rng, std::size_t m, std::size_t n, double c, bool random_weights) {
  if (n == 0) throw DomainError("random_ensemble: n must be positive");
  std::vector<SpdMatrix> mats;
  mats.reserve(n);
  for (std::size_t j = 0; j < n; ++j) mats.push_back(random_spd(rng, m, c));
  return Ensemble(std::move(mats), WeightVector(random_weights_for(rng, n, random_weights)));
}

Ensemble random_commuting_ensemble(Rng& rng, std::size_t m, std::size_t n, double c,
                                   bool random_weights) {
  if (n == 0 || m == 0) throw DomainError("random_commuting_ensemble: sizes must be positive");
  const Matrix q = random_unitary(rng, m);
  std::vector<SpdMatrix> mats;
  mats.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> ev(m);
    for (double& v : ev) v = std::exp(rng.uniform(-c, c));
    mats.push_back(SpdMatrix::from_spectrum(std::move(ev), q));
  }
  return Ensemble(std::move(mats), WeightVector(random_weights_for(rng, n, random_weights)));
}

}  // namespace pdmean
