#pragma once

// Log-majorization and weak majorization, computed in the log domain.

#include <span>
#include <string_view>
#include <vector>

#include "pdmean/matrix.hpp"

namespace pdmean {

enum class Verdict { LogMajorized, WeaklyLogMajorized, Neither };

std::string_view to_string(Verdict v);

/// Comparison of x against y: is x (weakly) log-majorized by y?
struct MajorizationVerdict {
  /// k_slacks[k-1] = sum_{i<=k} log y_i - sum_{i<=k} log x_i, both sorted
  /// decreasing.
  std::vector<double> k_slacks;
  /// k = m slack.
  double det_gap = 0.0;
  Verdict verdict = Verdict::Neither;
  double tol = 0.0;

  bool weakly() const { return verdict != Verdict::Neither; }
  bool log_majorized() const { return verdict == Verdict::LogMajorized; }
  /// Most negative margin for the weak relation (min over all k).
  double weak_margin() const;
  /// Most negative margin for log-majorization: min over k < m and -|det_gap|.
  double log_margin() const;
};

/// 1e-8 * m
double default_majorization_tol(std::size_t m);

/// Throws DomainError on a non-positive entry or length mismatch.
MajorizationVerdict compare_vectors(std::span<const double> x, std::span<const double> y,
                                    double tol);
MajorizationVerdict compare_vectors(std::span<const double> x, std::span<const double> y);

MajorizationVerdict compare_matrices(const SpdMatrix& a, const SpdMatrix& b, double tol);
MajorizationVerdict compare_matrices(const SpdMatrix& a, const SpdMatrix& b);

/// sum_{i<=k} lambda_i(A) <= sum_{i<=k} lambda_i(B) + tol for every k.
bool weak_majorize_sums(const SpdMatrix& a, const SpdMatrix& b, double tol);

}  // namespace pdmean
