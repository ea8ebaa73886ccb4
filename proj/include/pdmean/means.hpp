#pragma once

// Multi-variable means of positive definite matrices.

#include <optional>
#include <span>
#include <vector>

#include "pdmean/linalg.hpp"
#include "pdmean/matrix.hpp"

namespace pdmean {

/// Positive probability vector. The constructor rejects non-positive or
/// non-finite entries and normalizes the sum to one.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> w);
  static WeightVector uniform(std::size_t n);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t j) const { return w_[j]; }
  std::span<const double> values() const noexcept { return w_; }

  bool operator==(const WeightVector&) const = default;

 private:
  std::vector<double> w_;
};

/// n >= 1 positive definite matrices of a common dimension with weights.
class Ensemble {
 public:
  Ensemble(std::vector<SpdMatrix> matrices, WeightVector weights);
  explicit Ensemble(std::vector<SpdMatrix> matrices);

  std::size_t size() const noexcept { return matrices_.size(); }
  std::size_t dim() const noexcept { return matrices_.front().dim(); }
  const std::vector<SpdMatrix>& matrices() const noexcept { return matrices_; }
  const SpdMatrix& operator[](std::size_t j) const { return matrices_[j]; }
  const WeightVector& weights() const noexcept { return weights_; }
  double weight(std::size_t j) const { return weights_[j]; }

  /// (A_1^p, ..., A_n^p)
  Ensemble powered(double p) const;
  /// (c A_1, ..., c A_n)
  Ensemble scaled(double c) const;
  Ensemble inverted() const { return powered(-1.0); }

  bool operator==(const Ensemble&) const = default;

 private:
  std::vector<SpdMatrix> matrices_;
  WeightVector weights_;
};

enum class InitKind { Default, ArithmeticMean, LogEuclidean, Identity, Given };

struct SolverConfig {
  double tol = 1e-10;  // Thompson metric
  int max_iter = 10'000;
  double damping = 1.0;
  InitKind init = InitKind::Default;
  std::optional<SpdMatrix> initial;  // used when init == Given

  /// Throws DomainError for tol <= 0, max_iter < 1 or damping outside (0, 1].
  void validate() const;
};

struct SolveResult {
  SpdMatrix value;
  int iterations = 0;
  /// Thompson distance between the last two iterates.
  double residual = 0.0;
  /// Thompson distance between the last iterate and its image under the
  /// defining map (Karcher residual for the Cartan mean).
  double equation_residual = 0.0;
  bool converged = false;
};

SpdMatrix arithmetic_mean(const Ensemble& e);
SpdMatrix harmonic_mean(const Ensemble& e);

/// (sum w_j A_j^t)^{1/t}; t == 0 returns log_euclidean(e).
SpdMatrix quasi_arithmetic(const Ensemble& e, double t);

/// exp(sum w_j log A_j)
SpdMatrix log_euclidean(const Ensemble& e);

/// Lim-Palfia power mean for t in [-1, 0) U (0, 1]. Positive t solves
/// X = sum w_i (X #_t A_i) by damped Picard iteration; negative t uses
/// P_t(A) = P_{-t}(A^{-1})^{-1}.
SolveResult power_mean(const Ensemble& e, double t, const SolverConfig& cfg = {});

/// Cartan (Karcher) mean by the fixed-point step
/// X <- X^{1/2} exp(theta sum w_j log(X^{-1/2} A_j X^{-1/2})) X^{1/2},
/// halving theta (floor 1/64) whenever the Karcher objective fails to drop.
SolveResult cartan_mean(const Ensemble& e, const SolverConfig& cfg = {});

/// ||sum w_j log(X^{-1/2} A_j X^{-1/2})||_F
double karcher_residual(const Ensemble& e, const SpdMatrix& x);
/// sum w_j d_R(A_j, X)^2
double karcher_objective(const Ensemble& e, const SpdMatrix& x);

/// Q_{t,z}(A, B) = (A^{(1-t)/2z} B^{t/z} A^{(1-t)/2z})^z, t in [0, 1], z > 0.
SpdMatrix renyi_entropy(const SpdMatrix& a, const SpdMatrix& b, double t, double z);

/// tr((1-t) A + t B) - tr Q_{t,z}(A, B), 0 < t <= z < 1.
double bw_divergence(const SpdMatrix& a, const SpdMatrix& b, double t, double z);

/// Renyi right mean: solution of X = sum w_j Q_{1-t,z}(X, A_j), 0 < t <= z < 1.
SolveResult renyi_right_mean(const Ensemble& e, double t, double z, const SolverConfig& cfg = {});

/// Thompson distance between the two sides of the equivalent form
/// X^{1-t/z} = sum w_j X^{-t/z} #_z A_j^{(1-t)/z}.
double renyi_right_equation_residual(const Ensemble& e, double t, double z, const SpdMatrix& x);

/// sum w_j Phi_{t,z}(A_j, X), minimized by the Renyi right mean.
double renyi_right_objective(const Ensemble& e, double t, double z, const SpdMatrix& x);

/// Renyi power mean: solution of X = sum w_j Q_{t,z}(A_j, X), 0 < t <= z < 1.
SolveResult renyi_power_mean(const Ensemble& e, double t, double z, const SolverConfig& cfg = {});

}  // namespace pdmean
