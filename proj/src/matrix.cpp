#include "pdmean/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pdmean/error.hpp"
#include "pdmean/kernels.hpp"
#include "pdmean/linalg.hpp"

namespace pdmean {

namespace {

void require_same_dim(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim())
    throw DomainError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                      std::to_string(b.dim()));
}

constexpr double kHermitianTol = 1e-12;
constexpr double kSpdTol = 1e-12;

}  // namespace

Matrix::Matrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()), data_(rows.size() * rows.size()) {
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != dim_) throw DomainError("Matrix: rows must form a square matrix");
    std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * dim_));
    ++i;
  }
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cplx Matrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

Matrix& Matrix::operator+=(const Matrix& rhs) { return add_scaled(1.0, rhs); }
Matrix& Matrix::operator-=(const Matrix& rhs) { return add_scaled(-1.0, rhs); }

Matrix& Matrix::operator*=(double s) {
  for (cplx& v : data_) v *= s;
  return *this;
}

Matrix& Matrix::add_scaled(double s, const Matrix& rhs) {
  require_same_dim(*this, rhs);
  kernels::active().axpy(data_.size(), s, rhs.data_.data(), data_.data());
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(double s, Matrix m) { return m *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b);
  Matrix c(a.dim());
  kernels::active().matmul(a.dim(), a.data().data(), b.data().data(), c.data().data());
  return c;
}

Matrix multiply_adjoint(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b);
  Matrix c(a.dim());
  kernels::active().matmul_adjoint(a.dim(), a.data().data(), b.data().data(), c.data().data());
  return c;
}

double frobenius_norm(const Matrix& m) {
  return std::sqrt(kernels::active().sum_abs_sq(m.size(), m.data().data()));
}

double relative_frobenius(const Matrix& a, const Matrix& b) {
  return frobenius_norm(a - b) / std::max(frobenius_norm(b), 1e-300);
}

// ---------------------------------------------------------------------------

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  const double scale = m.max_abs();
  double asym = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j)
      asym = std::max(asym, std::abs(m(i, j) - std::conj(m(j, i))));
  if (!(asym <= kHermitianTol * scale))
    throw DomainError("matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  m_ = symmetrize(m).m_;
}

HermitianMatrix HermitianMatrix::symmetrize(const Matrix& m) {
  Matrix s(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    s(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.dim(); ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      s(i, j) = v;
      s(j, i) = std::conj(v);
    }
  }
  return HermitianMatrix(std::move(s), Unchecked{});
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& rhs) {
  m_ += rhs.m_;
  return *this;
}
HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& rhs) {
  m_ -= rhs.m_;
  return *this;
}
HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}
HermitianMatrix& HermitianMatrix::add_scaled(double s, const HermitianMatrix& rhs) {
  m_.add_scaled(s, rhs.m_);
  return *this;
}

HermitianMatrix operator+(HermitianMatrix lhs, const HermitianMatrix& rhs) { return lhs += rhs; }
HermitianMatrix operator-(HermitianMatrix lhs, const HermitianMatrix& rhs) { return lhs -= rhs; }
HermitianMatrix operator*(double s, HermitianMatrix m) { return m *= s; }

HermitianMatrix SpectralDecomposition::reconstruct_with(std::span<const double> d) const {
  const std::size_t n = vectors.dim();
  Matrix ud(n);
  kernels::active().scale_columns(n, vectors.data().data(), d.data(), ud.data().data());
  return HermitianMatrix::symmetrize(multiply_adjoint(ud, vectors));
}

// ---------------------------------------------------------------------------

void SpdMatrix::validate(const SpectralDecomposition& s) {
  if (s.values.empty()) throw DomainError("positive definite matrix must have dim >= 1");
  const double hi = s.values.front();
  const double lo = s.values.back();
  const double dim = static_cast<double>(s.values.size());
  if (!std::isfinite(hi) || !std::isfinite(lo) || !(hi > 0.0) || !(lo > dim * kSpdTol * hi))
    throw DomainError("matrix is not positive definite (lambda_min " + std::to_string(lo) +
                      ", lambda_max " + std::to_string(hi) + ")");
}

SpdMatrix::SpdMatrix(const HermitianMatrix& h) : h_(h) {
  auto s = std::make_shared<SpectralDecomposition>(eigh(h));
  validate(*s);
  spec_ = std::move(s);
}

SpdMatrix SpdMatrix::from_spectrum(std::vector<double> values, const Matrix& vectors) {
  const std::size_t n = values.size();
  if (vectors.dim() != n) throw DomainError("from_spectrum: dimension mismatch");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  auto s = std::make_shared<SpectralDecomposition>();
  s->values.resize(n);
  s->vectors = Matrix(n);
  for (std::size_t c = 0; c < n; ++c) {
    s->values[c] = values[order[c]];
    for (std::size_t r = 0; r < n; ++r) s->vectors(r, c) = vectors(r, order[c]);
  }
  validate(*s);
  HermitianMatrix h = s->reconstruct_with(s->values);
  return SpdMatrix(std::move(h), std::move(s));
}

SpdMatrix SpdMatrix::identity(std::size_t dim) {
  return from_spectrum(std::vector<double>(dim, 1.0), Matrix::identity(dim));
}

SpdMatrix SpdMatrix::diagonal(std::span<const double> d) {
  return from_spectrum(std::vector<double>(d.begin(), d.end()), Matrix::identity(d.size()));
}

double SpdMatrix::log_det() const {
  double s = 0.0;
  for (double v : spec_->values) s += std::log(v);
  return s;
}

SpdMatrix SpdMatrix::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scale factor must be positive");
  auto s = std::make_shared<SpectralDecomposition>(*spec_);
  for (double& v : s->values) v *= c;
  validate(*s);
  return SpdMatrix(c * h_, std::move(s));
}

}  // namespace pdmean
