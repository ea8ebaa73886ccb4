#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

namespace pdmean {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  Matrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static Matrix identity(std::size_t dim);
  static Matrix diagonal(std::span<const double> d);
  static Matrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  Matrix adjoint() const;
  cplx trace() const;
  double max_abs() const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(double s);
  /// this += s * rhs
  Matrix& add_scaled(double s, const Matrix& rhs);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(double s, Matrix m);
Matrix operator*(const Matrix& a, const Matrix& b);
/// a * b^H without forming the adjoint.
Matrix multiply_adjoint(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& m);
/// ||a - b||_F / max(||b||_F, tiny)
double relative_frobenius(const Matrix& a, const Matrix& b);

/// Hermitian matrix. Construction from a general matrix verifies Hermitian
/// symmetry to 1e-12 relative to the largest entry, then stores (M + M^H)/2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Matrix& m);

  /// (M + M^H)/2 without the symmetry check; used after composite products
  /// whose exact result is Hermitian.
  static HermitianMatrix symmetrize(const Matrix& m);

  std::size_t dim() const noexcept { return m_.dim(); }
  const Matrix& matrix() const noexcept { return m_; }
  operator const Matrix&() const noexcept { return m_; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix& operator+=(const HermitianMatrix& rhs);
  HermitianMatrix& operator-=(const HermitianMatrix& rhs);
  HermitianMatrix& operator*=(double s);
  HermitianMatrix& add_scaled(double s, const HermitianMatrix& rhs);

  bool operator==(const HermitianMatrix&) const = default;

 private:
  struct Unchecked {};
  HermitianMatrix(Matrix m, Unchecked) : m_(std::move(m)) {}
  Matrix m_;
};

HermitianMatrix operator+(HermitianMatrix lhs, const HermitianMatrix& rhs);
HermitianMatrix operator-(HermitianMatrix lhs, const HermitianMatrix& rhs);
HermitianMatrix operator*(double s, HermitianMatrix m);

/// Eigenvalues sorted decreasing; eigenvectors as the columns of a unitary.
struct SpectralDecomposition {
  std::vector<double> values;
  Matrix vectors;

  /// U diag(f(lambda)) U^H for the stored decomposition.
  template <class F>
  HermitianMatrix apply(F&& f) const;
  HermitianMatrix reconstruct_with(std::span<const double> d) const;
};

/// Positive definite matrix. Carries its spectral decomposition so that
/// matrix functions do not repeat the eigensolve.
class SpdMatrix {
 public:
  /// Rejects lambda_min <= dim * 1e-12 * lambda_max.
  explicit SpdMatrix(const HermitianMatrix& h);
  explicit SpdMatrix(const Matrix& m) : SpdMatrix(HermitianMatrix(m)) {}

  /// Builds U diag(values) U^H; values need not be sorted.
  static SpdMatrix from_spectrum(std::vector<double> values, const Matrix& vectors);

  static SpdMatrix identity(std::size_t dim);
  static SpdMatrix diagonal(std::span<const double> d);
  static SpdMatrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::span<const double>(d.begin(), d.size()));
  }

  std::size_t dim() const noexcept { return h_.dim(); }
  const HermitianMatrix& hermitian() const noexcept { return h_; }
  const Matrix& matrix() const noexcept { return h_.matrix(); }
  operator const HermitianMatrix&() const noexcept { return h_; }
  operator const Matrix&() const noexcept { return h_.matrix(); }
  const cplx& operator()(std::size_t i, std::size_t j) const { return h_(i, j); }

  const SpectralDecomposition& spectrum() const noexcept { return *spec_; }
  std::span<const double> eigenvalues() const noexcept { return spec_->values; }
  double lambda_max() const noexcept { return spec_->values.front(); }
  double lambda_min() const noexcept { return spec_->values.back(); }
  double trace() const { return h_.trace(); }
  double log_det() const;

  /// c * A for c > 0; the eigenbasis is reused.
  SpdMatrix scaled(double c) const;

  bool operator==(const SpdMatrix& rhs) const { return h_ == rhs.h_; }

 private:
  SpdMatrix(HermitianMatrix h, std::shared_ptr<const SpectralDecomposition> s)
      : h_(std::move(h)), spec_(std::move(s)) {}
  static void validate(const SpectralDecomposition& s);

  HermitianMatrix h_;
  std::shared_ptr<const SpectralDecomposition> spec_;
};

template <class F>
HermitianMatrix SpectralDecomposition::apply(F&& f) const {
  std::vector<double> d(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) d[i] = f(values[i]);
  return reconstruct_with(d);
}

}  // namespace pdmean
