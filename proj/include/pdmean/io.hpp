#pragma once

// JSON forms of matrices, ensembles and verification reports.
//
// Matrix:   {"dim": m, "re": [[...], ...], "im": [[...], ...]}
//           rows may also be given as one flat row-major array; "im" is
//           optional (real matrix) and so is "dim" when rows are nested.
// Ensemble: {"schema_version": 1, "dim": m, "weights": [...],
//            "matrices": [<matrix>, ...]}; weights default to uniform.
//
// Parse failures throw ParseError naming the JSON path, e.g.
// "matrices[2].im[1][0]". Values that fail a mathematical invariant
// (not Hermitian, not positive definite) are reported the same way.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pdmean/means.hpp"
#include "pdmean/verify.hpp"

namespace pdmean::io {

inline constexpr int kSchemaVersion = 1;

std::string emit_matrix(const Matrix& m);
Matrix parse_matrix(std::string_view text);
/// parse_matrix followed by the positive definite check.
SpdMatrix parse_spd_matrix(std::string_view text);

std::string emit_ensemble(const Ensemble& e);
Ensemble parse_ensemble(std::string_view text);

struct ReportFile {
  std::string tool_version;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config;
  std::vector<CheckReport> reports;
  /// Totals per solver over all reports.
  std::vector<SolverStat> solver_stats;

  bool operator==(const ReportFile&) const = default;
};

/// Sums per-report solver statistics, ordered by solver name.
std::vector<SolverStat> aggregate_solver_stats(const std::vector<CheckReport>& reports);

/// Real values appear as 17-significant-digit decimal strings so the file
/// round-trips exactly: parse_report(emit_report(r)) == r.
std::string emit_report(const ReportFile& r);
ReportFile parse_report(std::string_view text);

/// "%.17g"
std::string format_real(double v);

/// Whole-file helpers; I/O failures throw pdmean::Error with kind "io".
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace pdmean::io
