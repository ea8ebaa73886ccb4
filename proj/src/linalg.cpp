#include "pdmean/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace pdmean {

namespace {

using EigenMat = Eigen::MatrixXcd;
using RowMajorMap = Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

EigenMat to_eigen(const Matrix& m) {
  return RowMajorMap(m.data().data(), static_cast<Eigen::Index>(m.dim()),
                     static_cast<Eigen::Index>(m.dim()));
}

Matrix from_eigen(const EigenMat& e) {
  const auto n = static_cast<std::size_t>(e.rows());
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return m;
}

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b)
    throw DomainError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

std::vector<double> powered(std::span<const double> v, double r) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::pow(v[i], r);
  return out;
}

Matrix power_matrix(const SpdMatrix& a, double r) {
  return a.spectrum().reconstruct_with(powered(a.eigenvalues(), r)).matrix();
}

}  // namespace

SpectralDecomposition eigh(const HermitianMatrix& a) {
  const std::size_t n = a.dim();
  SpectralDecomposition out;
  if (n == 0) return out;
  Eigen::SelfAdjointEigenSolver<EigenMat> es(to_eigen(a.matrix()));
  if (es.info() != Eigen::Success) throw NumericalError("eigh: eigensolver did not converge");
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  out.values.resize(n);
  out.vectors = Matrix(n);
  // Eigen sorts increasing.
  for (std::size_t c = 0; c < n; ++c) {
    const auto src = static_cast<Eigen::Index>(n - 1 - c);
    out.values[c] = vals(src);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = vecs(static_cast<Eigen::Index>(r), src);
  }
  return out;
}

std::vector<double> eigenvalues(const HermitianMatrix& a) {
  const std::size_t n = a.dim();
  if (n == 0) return {};
  Eigen::SelfAdjointEigenSolver<EigenMat> es(to_eigen(a.matrix()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalues: eigensolver did not converge");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = es.eigenvalues()(static_cast<Eigen::Index>(n - 1 - i));
  return out;
}

HermitianMatrix matrix_function(const HermitianMatrix& a, const MatrixFunction& f) {
  return std::visit(
      [&](const auto& tag) -> HermitianMatrix {
        using T = std::decay_t<decltype(tag)>;
        if constexpr (std::is_same_v<T, fn::Exp>) {
          return expm(a).hermitian();
        } else {
          const SpdMatrix spd(a);  // DomainError for non-SPD input
          if constexpr (std::is_same_v<T, fn::Power>) return powm(spd, tag.r).hermitian();
          else return logm(spd);
        }
      },
      f);
}

SpdMatrix powm(const SpdMatrix& a, double r) {
  if (!std::isfinite(r)) throw DomainError("powm: exponent must be finite");
  return SpdMatrix::from_spectrum(powered(a.eigenvalues(), r), a.spectrum().vectors);
}

SpdMatrix sqrtm(const SpdMatrix& a) { return powm(a, 0.5); }
SpdMatrix inverse(const SpdMatrix& a) { return powm(a, -1.0); }

HermitianMatrix logm(const SpdMatrix& a) {
  return a.spectrum().apply([](double x) { return std::log(x); });
}

SpdMatrix expm(const HermitianMatrix& a) {
  SpectralDecomposition s = eigh(a);
  for (double& v : s.values) v = std::exp(v);
  return SpdMatrix::from_spectrum(std::move(s.values), s.vectors);
}

HermitianMatrix congruence(const Matrix& c, const HermitianMatrix& a) {
  require_same_dim(c.dim(), a.dim());
  return HermitianMatrix::symmetrize(multiply_adjoint(c * a.matrix(), c));
}

SpdMatrix congruence(const Matrix& c, const SpdMatrix& a) {
  return SpdMatrix(congruence(c, a.hermitian()));
}

SpdMatrix geometric_mean(const SpdMatrix& a, const SpdMatrix& b, double t) {
  require_same_dim(a.dim(), b.dim());
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("geometric_mean: t must lie in [0, 1]");
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  const Matrix half = power_matrix(a, 0.5);
  const Matrix neg_half = power_matrix(a, -0.5);
  const SpdMatrix inner(congruence(neg_half, b.hermitian()));
  return SpdMatrix(congruence(half, powm(inner, t).hermitian()));
}

SpdMatrix sandwich_power(const SpdMatrix& outer, double outer_exp, const SpdMatrix& inner,
                         double inner_exp, double z) {
  require_same_dim(outer.dim(), inner.dim());
  return detail::sandwich_power_rooted(outer, outer_exp, power_matrix(inner, 0.5 * inner_exp), z);
}

SpdMatrix detail::sandwich_power_rooted(const SpdMatrix& outer, double outer_exp,
                                        const Matrix& inner_root, double z) {
  require_same_dim(outer.dim(), inner_root.dim());
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("sandwich_power: z must be positive");
  const std::size_t n = outer.dim();
  const Matrix& basis = outer.spectrum().vectors;
  const std::vector<double> scale = powered(outer.eigenvalues(), outer_exp);
  Matrix scaled_basis(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled_basis(i, j) = basis(i, j) * scale[j];
  const Matrix c = inner_root * scaled_basis;

  Eigen::JacobiSVD<EigenMat> svd(to_eigen(c), Eigen::ComputeFullV);
  const Matrix v = basis * from_eigen(svd.matrixV());
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i)
    values[i] = std::pow(svd.singularValues()(static_cast<Eigen::Index>(i)), 2.0 * z);
  return SpdMatrix::from_spectrum(std::move(values), v);
}

double loewner_margin(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a.dim(), b.dim());
  if (a.dim() == 0) return 0.0;
  const double lo = eigenvalues(b - a).back();
  const double scale = 1.0 + std::max(operator_norm(a), operator_norm(b));
  return lo / scale;
}

bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol) {
  return loewner_margin(a, b) >= -tol;
}

std::vector<double> singular_values(const Matrix& x) {
  const std::size_t n = x.dim();
  if (n == 0) return {};
  Eigen::JacobiSVD<EigenMat> svd(to_eigen(x));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = svd.singularValues()(static_cast<Eigen::Index>(i));
  return out;
}

double operator_norm(const Matrix& x) {
  if (x.dim() == 0) return 0.0;
  return singular_values(x).front();
}

double operator_norm(const HermitianMatrix& x) {
  if (x.dim() == 0) return 0.0;
  const std::vector<double> ev = eigenvalues(x);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

namespace {

std::vector<double> relative_spectrum(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a.dim(), b.dim());
  return eigenvalues(congruence(power_matrix(a, -0.5), b.hermitian()));
}

}  // namespace

double thompson_distance(const SpdMatrix& a, const SpdMatrix& b) {
  double d = 0.0;
  for (double v : relative_spectrum(a, b)) {
    if (!(v > 0.0)) return std::numeric_limits<double>::infinity();
    d = std::max(d, std::abs(std::log(v)));
  }
  return d;
}

double riemannian_distance(const SpdMatrix& a, const SpdMatrix& b) {
  double s = 0.0;
  for (double v : relative_spectrum(a, b)) {
    if (!(v > 0.0)) return std::numeric_limits<double>::infinity();
    const double l = std::log(v);
    s += l * l;
  }
  return std::sqrt(s);
}

}  // namespace pdmean
