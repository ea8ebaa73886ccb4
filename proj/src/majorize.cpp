#include "pdmean/majorize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "pdmean/error.hpp"

namespace pdmean {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::LogMajorized: return "LogMajorized";
    case Verdict::WeaklyLogMajorized: return "WeaklyLogMajorized";
    case Verdict::Neither: return "Neither";
  }
  return "Neither";
}

double MajorizationVerdict::weak_margin() const {
  return k_slacks.empty() ? 0.0 : *std::min_element(k_slacks.begin(), k_slacks.end());
}

double MajorizationVerdict::log_margin() const {
  double m = -std::abs(det_gap);
  for (std::size_t k = 0; k + 1 < k_slacks.size(); ++k) m = std::min(m, k_slacks[k]);
  return m;
}

double default_majorization_tol(std::size_t m) { return 1e-8 * static_cast<double>(m); }

namespace {

std::vector<double> sorted_logs(std::span<const double> v, const char* name) {
  std::vector<double> out(v.begin(), v.end());
  for (double x : out)
    if (!(x > 0.0) || !std::isfinite(x))
      throw DomainError(std::string("compare_vectors: ") + name + " has a non-positive entry");
  std::sort(out.begin(), out.end(), std::greater<>());
  for (double& x : out) x = std::log(x);
  return out;
}

}  // namespace

MajorizationVerdict compare_vectors(std::span<const double> x, std::span<const double> y,
                                    double tol) {
  if (x.size() != y.size()) throw DomainError("compare_vectors: length mismatch");
  const std::vector<double> lx = sorted_logs(x, "x");
  const std::vector<double> ly = sorted_logs(y, "y");
  MajorizationVerdict v;
  v.tol = tol;
  v.k_slacks.resize(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
    v.k_slacks[k] = sy - sx;
  }
  v.det_gap = v.k_slacks.empty() ? 0.0 : v.k_slacks.back();
  if (v.log_margin() >= -tol) v.verdict = Verdict::LogMajorized;
  else if (v.weak_margin() >= -tol) v.verdict = Verdict::WeaklyLogMajorized;
  else v.verdict = Verdict::Neither;
  return v;
}

MajorizationVerdict compare_vectors(std::span<const double> x, std::span<const double> y) {
  return compare_vectors(x, y, default_majorization_tol(x.size()));
}

MajorizationVerdict compare_matrices(const SpdMatrix& a, const SpdMatrix& b, double tol) {
  if (a.dim() != b.dim()) throw DomainError("compare_matrices: dimension mismatch");
  return compare_vectors(a.eigenvalues(), b.eigenvalues(), tol);
}

MajorizationVerdict compare_matrices(const SpdMatrix& a, const SpdMatrix& b) {
  return compare_matrices(a, b, default_majorization_tol(a.dim()));
}

bool weak_majorize_sums(const SpdMatrix& a, const SpdMatrix& b, double tol) {
  if (a.dim() != b.dim()) throw DomainError("weak_majorize_sums: dimension mismatch");
  double sa = 0.0, sb = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    sa += a.eigenvalues()[k];
    sb += b.eigenvalues()[k];
    if (sa > sb + tol) return false;
  }
  return true;
}

}  // namespace pdmean
