#pragma once

// Theorem checks over ensembles. Every check returns a CheckReport whose
// slacks are margins in the comparator's own units: log domain for
// majorization, normalized eigenvalues for the Loewner order, relative
// differences for norms. A comparison passes when slack >= -tol.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdmean/means.hpp"

namespace pdmean {

struct CheckComponent {
  std::string label;
  double worst_slack = 0.0;
  double tol = 0.0;
  int count = 0;
  int failures = 0;
  bool asserted = true;

  bool operator==(const CheckComponent&) const = default;
};

struct SolverStat {
  std::string solver;
  int calls = 0;
  int failures = 0;
  long total_iterations = 0;
  int max_iterations = 0;

  bool operator==(const SolverStat&) const = default;
};

/// Inputs of the comparison that produced the worst failing slack.
struct Witness {
  std::string label;
  std::vector<SpdMatrix> matrices;
  std::vector<double> weights;
  std::map<std::string, double> params;

  bool operator==(const Witness&) const = default;
};

/// One observation in a probe's slack table.
struct TableRow {
  std::string label;
  std::map<std::string, double> params;
  double value = 0.0;

  bool operator==(const TableRow&) const = default;
};

struct CheckReport {
  std::string check_id;
  bool passed = true;
  bool probe = false;
  /// Slack of the binding comparison (the one closest to failing, measured
  /// against its own tolerance); -inf when a solver failed.
  double worst_slack = 0.0;
  double tol = 0.0;
  std::vector<CheckComponent> components;
  std::map<std::string, std::vector<double>> params;
  std::vector<TableRow> table;
  std::vector<std::string> notes;
  std::vector<SolverStat> solver_stats;
  std::optional<Witness> witness;

  bool operator==(const CheckReport&) const = default;
};

struct TzPair {
  double t;
  double z;
  bool operator==(const TzPair&) const = default;
};

struct CheckGrids {
  std::vector<double> para_t{0.25, 0.5, 1.0};
  std::vector<double> pmean_t{0.25, 0.5, 1.0};
  std::vector<double> pmean_p{0.5, 1.0, 2.0};
  std::vector<double> ando_hiai_t{-1.0, -0.5, 0.5, 1.0};
  std::vector<double> ando_hiai_p{1.0, 2.0, 4.0};
  std::vector<double> cartan_ando_hiai_p{1.0, 2.0, 3.0};
  std::vector<double> cartan_convergence_p{2.0, 1.0, 0.5, 0.25};
  std::vector<double> hansen_p{0.3, 0.7, 1.3, 1.9};
  /// z runs over {t, (t+1)/2, 1}, dropping z = 0.
  std::vector<double> entropy_t{0.0, 0.1, 0.25, 0.5};
  std::vector<TzPair> renyi_tz{{0.3, 0.5}, {0.5, 0.5}, {0.2, 0.8}};
  std::vector<TzPair> renyi_power_tz{{0.4, 0.6}};
  /// Entries above z are dropped per (t, z).
  std::vector<double> renyi_power_p{0.3, 0.6};
  std::vector<double> probe_p{2.0, 1.0, 0.5, 0.25};
  std::vector<double> probe_t{-1.0, -0.5};
  std::vector<double> probe_s{1.0, 0.5, 0.25, 0.125};
  std::vector<TzPair> probe_tz{{0.4, 0.6}};

  bool operator==(const CheckGrids&) const = default;
};

struct CheckContext {
  SolverConfig solver{};
  double loewner_tol = 1e-7;
  double majorization_tol_per_dim = 1e-8;  // multiplied by the dimension
  double norm_tol = 1e-8;                  // relative
  double identity_tol = 1e-9;              // compound identities, relative Frobenius
  std::uint64_t seed = 1;
  int hansen_samples = 20;
  int compound_samples = 20;
  int entropy_pairs = 50;
  CheckGrids grids{};
  /// Test-only: apply each check's deliberate perturbation.
  bool negative_control = false;

  double majorization_tol(std::size_t m) const {
    return majorization_tol_per_dim * static_cast<double>(m);
  }
};

using CheckFn = std::function<CheckReport(const Ensemble&, const CheckContext&)>;

struct CheckInfo {
  std::string id;
  bool assertive;
  CheckFn run;
};

/// All checks, sorted by id.
const std::vector<CheckInfo>& check_registry();
/// nullptr for unknown ids.
const CheckInfo* find_check(std::string_view id);

CheckReport check_para_chain(const Ensemble& e, const CheckContext& ctx);
CheckReport check_power_mean_major(const Ensemble& e, const CheckContext& ctx);
CheckReport check_ando_hiai_power(const Ensemble& e, const CheckContext& ctx);
CheckReport check_cartan_ando_hiai(const Ensemble& e, const CheckContext& ctx);
CheckReport check_cartan_convergence(const Ensemble& e, const CheckContext& ctx);
CheckReport check_yamazaki(const Ensemble& e, const CheckContext& ctx);
/// Samples ctx.hansen_samples contractions and SPD matrices of dimension m.
CheckReport check_hansen(std::size_t m, const CheckContext& ctx);
/// Samples ctx.entropy_pairs SPD pairs of dimension m.
CheckReport check_renyi_entropy_major(std::size_t m, const CheckContext& ctx);
CheckReport check_renyi_right_bounds(const Ensemble& e, const CheckContext& ctx);
CheckReport check_renyi_norm_chain(const Ensemble& e, const CheckContext& ctx);
CheckReport check_renyi_power_bounds(const Ensemble& e, const CheckContext& ctx);
/// Samples ctx.compound_samples instances of dimension m (2 <= m <= 6).
CheckReport check_compound_props(std::size_t m, const CheckContext& ctx);
/// Never fails; reports observed slacks in `table`.
CheckReport probe_open_problems(const Ensemble& e, const CheckContext& ctx);

/// Runs the selected checks (all when `ids` is empty) on up to `threads`
/// workers. Results are ordered by check id. Throws DomainError for an
/// unknown id.
std::vector<CheckReport> run_checks(const Ensemble& e, const CheckContext& ctx,
                                    const std::vector<std::string>& ids = {}, unsigned threads = 1);

inline std::vector<CheckReport> run_all(const Ensemble& e, const CheckContext& ctx,
                                        unsigned threads = 1) {
  return run_checks(e, ctx, {}, threads);
}

/// True when every assertive report passed.
bool all_passed(const std::vector<CheckReport>& reports);

}  // namespace pdmean
