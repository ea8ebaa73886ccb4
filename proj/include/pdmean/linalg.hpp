#pragma once

// Spectral calculus on Hermitian and positive definite matrices. Every matrix
// function goes through one eigendecomposition; results are re-symmetrized.

#include <variant>
#include <vector>

#include "pdmean/error.hpp"
#include "pdmean/matrix.hpp"

namespace pdmean {

/// Eigendecomposition with eigenvalues sorted decreasing.
/// Throws NumericalError if the eigensolver does not converge.
SpectralDecomposition eigh(const HermitianMatrix& a);

/// Eigenvalues only, decreasing.
std::vector<double> eigenvalues(const HermitianMatrix& a);

namespace fn {
struct Power {
  double r;
};
struct Log {};
struct Exp {};
}  // namespace fn

using MatrixFunction = std::variant<fn::Power, fn::Log, fn::Exp>;

/// U f(Lambda) U^H. Power and Log require a positive definite argument
/// (DomainError otherwise); Exp accepts any Hermitian matrix.
HermitianMatrix matrix_function(const HermitianMatrix& a, const MatrixFunction& f);

SpdMatrix powm(const SpdMatrix& a, double r);
SpdMatrix sqrtm(const SpdMatrix& a);
SpdMatrix inverse(const SpdMatrix& a);
HermitianMatrix logm(const SpdMatrix& a);
SpdMatrix expm(const HermitianMatrix& a);

/// C A C^H.
HermitianMatrix congruence(const Matrix& c, const HermitianMatrix& a);
/// C A C^H for positive definite A; throws DomainError when C is singular
/// enough that the result leaves the cone.
SpdMatrix congruence(const Matrix& c, const SpdMatrix& a);

/// A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}, t in [0, 1].
SpdMatrix geometric_mean(const SpdMatrix& a, const SpdMatrix& b, double t);

/// (O^a I^b O^a)^z with O = outer, I = inner, z > 0.
///
/// Evaluated as the SVD of C = I^{b/2} O^a: the sandwich equals C^H C, so its
/// z-th power is V diag(sigma^{2z}) V^H. This keeps relative accuracy in the
/// small eigenvalues when O^a I^b O^a is far worse conditioned than C.
SpdMatrix sandwich_power(const SpdMatrix& outer, double outer_exp, const SpdMatrix& inner,
                         double inner_exp, double z);

namespace detail {
/// sandwich_power with the inner factor supplied as R = I^{b/2}, so callers
/// that reuse the same inner matrix skip its eigendecomposition.
SpdMatrix sandwich_power_rooted(const SpdMatrix& outer, double outer_exp, const Matrix& inner_root,
                                double z);
}  // namespace detail

/// lambda_min(B - A) / (1 + max(||A||, ||B||)). Nonnegative iff A <= B.
double loewner_margin(const HermitianMatrix& a, const HermitianMatrix& b);

/// A <= B in the Loewner order, up to tol * (1 + max(||A||, ||B||)).
bool loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b, double tol);

/// Singular values, decreasing.
std::vector<double> singular_values(const Matrix& x);

/// Largest singular value.
double operator_norm(const Matrix& x);
/// max |lambda_i| for Hermitian input.
double operator_norm(const HermitianMatrix& x);
inline double operator_norm(const SpdMatrix& x) { return x.lambda_max(); }

/// max_i |log lambda_i(A^{-1/2} B A^{-1/2})|
double thompson_distance(const SpdMatrix& a, const SpdMatrix& b);

/// ||log A^{-1/2} B A^{-1/2}||_F
double riemannian_distance(const SpdMatrix& a, const SpdMatrix& b);

}  // namespace pdmean
