#include "pdmean/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "pdmean/compound.hpp"
#include "pdmean/error.hpp"
#include "pdmean/linalg.hpp"
#include "pdmean/majorize.hpp"
#include "pdmean/random.hpp"

namespace pdmean {

namespace {

using Params = std::map<std::string, double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string describe(const Params& p) {
  std::string s;
  for (const auto& [k, v] : p) {
    if (!s.empty()) s += ' ';
    s += k + "=" + fmt("%g", v);
  }
  return s;
}

/// Collects comparisons for one report.
class Recorder {
 public:
  Recorder(std::string id, const Ensemble* inputs) : inputs_(inputs) { report_.check_id = std::move(id); }

  void set_inputs(const Ensemble* e) { inputs_ = e; }

  /// Asserted comparison; passes when slack >= -tol.
  void compare(const std::string& label, double slack, double tol, const Params& params = {},
               const std::vector<SpdMatrix>* matrices = nullptr) {
    add(label, slack, tol, true, params, matrices);
  }

  /// Recorded but never asserted.
  void observe(const std::string& label, double slack, double tol, const Params& params = {}) {
    add(label, slack, tol, false, params, nullptr);
  }

  void row(const std::string& label, const Params& params, double value) {
    report_.table.push_back({label, params, value});
  }

  void note(std::string text) { report_.notes.push_back(std::move(text)); }
  void param(const std::string& name, std::vector<double> values) { report_.params[name] = std::move(values); }

  /// Tallies a solver call; flags the report when it did not converge.
  SpdMatrix solved(const std::string& solver, SolveResult r, const Params& params = {}) {
    auto it = std::find_if(report_.solver_stats.begin(), report_.solver_stats.end(),
                           [&](const SolverStat& s) { return s.solver == solver; });
    if (it == report_.solver_stats.end()) {
      report_.solver_stats.push_back({solver});
      it = std::prev(report_.solver_stats.end());
    }
    ++it->calls;
    it->total_iterations += r.iterations;
    it->max_iterations = std::max(it->max_iterations, r.iterations);
    if (!r.converged) {
      ++it->failures;
      solver_failed_ = true;
      note("solver " + solver + " did not converge (" + describe(params) + ", residual " +
           fmt("%.3g", r.residual) + ")");
      if (!report_.witness) report_.witness = make_witness("solver:" + solver, params, nullptr);
    }
    return std::move(r.value);
  }

  void fail(const std::string& why) {
    solver_failed_ = true;
    note("error: " + why);
    if (!report_.witness) report_.witness = make_witness("error", {}, nullptr);
  }

  CheckReport finish(bool probe) {
    report_.probe = probe;
    const CheckComponent* binding = nullptr;
    const CheckComponent* lowest = nullptr;
    bool any_failed = false;
    for (const CheckComponent& c : report_.components) {
      if (!lowest || c.worst_slack + c.tol < lowest->worst_slack + lowest->tol) lowest = &c;
      if (!c.asserted) continue;
      if (c.failures > 0) any_failed = true;
      if (!binding || c.worst_slack + c.tol < binding->worst_slack + binding->tol) binding = &c;
    }
    if (probe) {
      report_.passed = true;
      if (lowest) {
        report_.worst_slack = lowest->worst_slack;
        report_.tol = lowest->tol;
      }
      if (!solver_failed_) report_.witness.reset();
      return std::move(report_);
    }
    if (binding) {
      report_.worst_slack = binding->worst_slack;
      report_.tol = binding->tol;
    }
    report_.passed = !any_failed && !solver_failed_;
    if (solver_failed_) report_.worst_slack = -kInf;
    if (report_.passed) report_.witness.reset();
    return std::move(report_);
  }

 private:
  void add(const std::string& label, double slack, double tol, bool asserted, const Params& params,
           const std::vector<SpdMatrix>* matrices) {
    if (std::isnan(slack)) slack = -kInf;
    auto it = std::find_if(report_.components.begin(), report_.components.end(),
                           [&](const CheckComponent& c) { return c.label == label; });
    if (it == report_.components.end()) {
      report_.components.push_back({label, slack, tol, 0, 0, asserted});
      it = std::prev(report_.components.end());
    }
    ++it->count;
    it->worst_slack = std::min(it->worst_slack, slack);
    it->tol = tol;
    if (slack >= -tol) return;
    ++it->failures;
    if (!asserted) return;
    const double excess = slack + tol;
    if (excess < worst_excess_) {
      worst_excess_ = excess;
      report_.witness = make_witness(label, params, matrices);
    }
  }

  Witness make_witness(const std::string& label, const Params& params,
                       const std::vector<SpdMatrix>* matrices) const {
    Witness w{label, {}, {}, params};
    if (matrices) {
      w.matrices = *matrices;
    } else if (inputs_) {
      w.matrices = inputs_->matrices();
      const auto wv = inputs_->weights().values();
      w.weights.assign(wv.begin(), wv.end());
    }
    return w;
  }

  CheckReport report_;
  const Ensemble* inputs_;
  bool solver_failed_ = false;
  double worst_excess_ = 0.0;
};

template <class Body>
CheckReport guarded(const std::string& id, const Ensemble* inputs, bool probe, Body&& body) {
  Recorder r(id, inputs);
  try {
    body(r);
  } catch (const Error& ex) {
    r.fail(ex.what());
  }
  return r.finish(probe);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void require_grid(const std::vector<double>& g, const char* name, double lo, double hi,
                  bool lo_open = true) {
  require(!g.empty(), std::string(name) + ": grid must be nonempty");
  for (double v : g)
    require(std::isfinite(v) && (lo_open ? v > lo : v >= lo) && v <= hi,
            std::string(name) + ": grid value " + fmt("%g", v) + " out of range");
}

void require_tz(const std::vector<TzPair>& g, const char* name) {
  require(!g.empty(), std::string(name) + ": grid must be nonempty");
  for (const TzPair& p : g)
    require(p.t > 0.0 && p.t <= p.z && p.z < 1.0,
            std::string(name) + ": (t, z) = (" + fmt("%g", p.t) + ", " + fmt("%g", p.z) +
                ") violates 0 < t <= z < 1");
}

std::vector<double> tz_flat(const std::vector<TzPair>& g) {
  std::vector<double> out;
  for (const TzPair& p : g) {
    out.push_back(p.t);
    out.push_back(p.z);
  }
  return out;
}

double margin(const HermitianMatrix& a, const HermitianMatrix& b) { return loewner_margin(a, b); }

/// (b - a) / max(a, b); nonnegative iff a <= b.
double relative_gap(double a, double b) {
  const double s = std::max({std::abs(a), std::abs(b), 1e-300});
  return (b - a) / s;
}

HermitianMatrix weighted_powers(const Ensemble& e, double r) {
  HermitianMatrix acc = e.weight(0) * powm(e[0], r).hermitian();
  for (std::size_t j = 1; j < e.size(); ++j) acc.add_scaled(e.weight(j), powm(e[j], r).hermitian());
  return acc;
}

HermitianMatrix scaled_identity(std::size_t m, double c) {
  return c * SpdMatrix::identity(m).hermitian();
}

}  // namespace

// ---------------------------------------------------------------------------

CheckReport check_para_chain(const Ensemble& e, const CheckContext& ctx) {
  const auto& grid = ctx.grids.para_t;
  require_grid(grid, "para_chain", 0.0, 1.0);
  require(std::is_sorted(grid.begin(), grid.end()), "para_chain: grid must be increasing");
  return guarded("para_chain", &e, false, [&](Recorder& r) {
    r.param("t", grid);
    std::vector<std::pair<double, SpdMatrix>> chain;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it)
      chain.emplace_back(-*it, r.solved("power_mean", power_mean(e, -*it, ctx.solver), {{"t", -*it}}));
    chain.emplace_back(0.0, ctx.negative_control ? arithmetic_mean(e)
                                                 : r.solved("cartan_mean", cartan_mean(e, ctx.solver)));
    for (double t : grid)
      chain.emplace_back(t, r.solved("power_mean", power_mean(e, t, ctx.solver), {{"t", t}}));
    for (std::size_t i = 0; i < chain.size(); ++i)
      for (std::size_t j = i + 1; j < chain.size(); ++j)
        r.compare("loewner_chain", margin(chain[i].second, chain[j].second), ctx.loewner_tol,
                  {{"lower", chain[i].first}, {"upper", chain[j].first}});
  });
}

CheckReport check_power_mean_major(const Ensemble& e, const CheckContext& ctx) {
  const auto& tg = ctx.grids.pmean_t;
  const auto& pg = ctx.grids.pmean_p;
  require_grid(tg, "power_mean_major t", 0.0, 1.0);
  require_grid(pg, "power_mean_major p", 0.0, kInf);
  return guarded("power_mean_major", &e, false, [&](Recorder& r) {
    r.param("t", tg);
    r.param("p", pg);
    const double mtol = ctx.majorization_tol(e.dim());
    const SpdMatrix le = log_euclidean(e);
    const double le_norm = operator_norm(le);
    double target_logdet = 0.0;
    for (std::size_t j = 0; j < e.size(); ++j) target_logdet += e.weight(j) * e[j].log_det();
    for (double p : pg) {
      const Ensemble ep = e.powered(p);
      for (double t : tg) {
        const Params at{{"t", t}, {"p", p}};
        const double lower_order = ctx.negative_control ? t : -t;
        const SpdMatrix lo =
            powm(r.solved("power_mean", power_mean(ep, lower_order, ctx.solver), at), 1.0 / p);
        const SpdMatrix hi = powm(r.solved("power_mean", power_mean(ep, t, ctx.solver), at), 1.0 / p);
        r.compare("norm_lower", relative_gap(operator_norm(lo), le_norm), ctx.norm_tol, at);
        r.compare("norm_upper", relative_gap(le_norm, operator_norm(hi)), ctx.norm_tol, at);
        r.compare("weak_log_major", compare_matrices(lo, le, mtol).weak_margin(), mtol, at);
        r.compare("det_bound", target_logdet - lo.log_det(), mtol, at);
      }
    }
  });
}

CheckReport check_ando_hiai_power(const Ensemble& e, const CheckContext& ctx) {
  const auto& tg = ctx.grids.ando_hiai_t;
  const auto& pg = ctx.grids.ando_hiai_p;
  require_grid(tg, "ando_hiai_power t", -1.0, 1.0, false);
  require(std::find(tg.begin(), tg.end(), 0.0) == tg.end(), "ando_hiai_power: t = 0 not allowed");
  require_grid(pg, "ando_hiai_power p", 1.0, kInf, false);
  return guarded("ando_hiai_power", &e, false, [&](Recorder& r) {
    r.param("t", tg);
    r.param("p", pg);
    for (double t : tg) {
      const SpdMatrix x = r.solved("power_mean", power_mean(e, t, ctx.solver), {{"t", t}});
      // (i) wants P_t >= I, (ii) wants P_t <= I. The control puts P_t on the
      // wrong side of I by a factor of two; p = 1 alone is an identity.
      double c = 1.0 / ((t > 0.0) ? x.lambda_min() : x.lambda_max());
      if (ctx.negative_control) c = (t > 0.0) ? 0.5 / x.lambda_max() : 2.0 / x.lambda_min();
      const Ensemble es = e.scaled(c);
      const SpdMatrix xs = x.scaled(c);
      r.set_inputs(&es);
      for (double p : pg) {
        const Params at{{"t", t}, {"p", p}, {"scale", c}};
        const SpdMatrix y = r.solved("power_mean", power_mean(es.powered(p), t, ctx.solver), at);
        if (t > 0.0) r.compare("ando_hiai_i", margin(xs, y), ctx.loewner_tol, at);
        else r.compare("ando_hiai_ii", margin(y, xs), ctx.loewner_tol, at);
      }
      r.set_inputs(&e);
    }
  });
}

CheckReport check_cartan_ando_hiai(const Ensemble& e, const CheckContext& ctx) {
  const auto& pg = ctx.grids.cartan_ando_hiai_p;
  require_grid(pg, "cartan_ando_hiai p", 1.0, kInf, false);
  return guarded("cartan_ando_hiai", &e, false, [&](Recorder& r) {
    r.param("p", pg);
    const SpdMatrix g = r.solved("cartan_mean", cartan_mean(e, ctx.solver));
    const double c = 1.0 / (ctx.negative_control ? g.lambda_min() : g.lambda_max());
    const Ensemble es = e.scaled(c);
    r.set_inputs(&es);
    const HermitianMatrix id = scaled_identity(e.dim(), 1.0);
    for (double p : pg) {
      const Params at{{"p", p}, {"scale", c}};
      const SpdMatrix y = r.solved("cartan_mean", cartan_mean(es.powered(p), ctx.solver), at);
      r.compare("cartan_ando_hiai", margin(y, id), ctx.loewner_tol, at);
    }
  });
}

CheckReport check_cartan_convergence(const Ensemble& e, const CheckContext& ctx) {
  const auto& pg = ctx.grids.cartan_convergence_p;
  require_grid(pg, "cartan_convergence p", 0.0, kInf);
  require(std::adjacent_find(pg.begin(), pg.end(), std::less_equal<>()) == pg.end(),
          "cartan_convergence: grid must be strictly decreasing");
  return guarded("cartan_convergence", &e, false, [&](Recorder& r) {
    r.param("p", pg);
    const double mtol = ctx.majorization_tol(e.dim());
    const SpdMatrix le = log_euclidean(e);
    std::vector<SpdMatrix> terms;
    for (double p : pg)
      terms.push_back(powm(r.solved("cartan_mean", cartan_mean(e.powered(p), ctx.solver), {{"p", p}}),
                           1.0 / p));
    for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
      const Params at{{"p", pg[i]}, {"q", pg[i + 1]}};
      const auto v = ctx.negative_control ? compare_matrices(terms[i + 1], terms[i], mtol)
                                          : compare_matrices(terms[i], terms[i + 1], mtol);
      r.compare("consecutive_log_major", v.log_margin(), mtol, at);
    }
    for (std::size_t i = 0; i < terms.size(); ++i)
      r.compare("log_euclidean_bound", compare_matrices(terms[i], le, mtol).log_margin(), mtol,
                {{"p", pg[i]}});
  });
}

CheckReport check_yamazaki(const Ensemble& e, const CheckContext& ctx) {
  return guarded("yamazaki", &e, false, [&](Recorder& r) {
    HermitianMatrix s = e.weight(0) * logm(e[0]);
    for (std::size_t j = 1; j < e.size(); ++j) s.add_scaled(e.weight(j), logm(e[j]));
    const std::vector<double> ev = eigenvalues(s);
    const double mu = ctx.negative_control ? ev.back() : ev.front();
    const Ensemble shifted = e.scaled(std::exp(-mu));
    r.set_inputs(&shifted);
    const SpdMatrix g = r.solved("cartan_mean", cartan_mean(shifted, ctx.solver));
    r.compare("cartan_le_identity", margin(g, scaled_identity(e.dim(), 1.0)), ctx.loewner_tol,
              {{"shift", mu}});
  });
}

CheckReport check_hansen(std::size_t m, const CheckContext& ctx) {
  const auto& pg = ctx.grids.hansen_p;
  require_grid(pg, "hansen p", 0.0, 2.0, false);
  require(m >= 1, "hansen: dimension must be positive");
  return guarded("hansen", nullptr, false, [&](Recorder& r) {
    r.param("p", pg);
    Rng rng = Rng::derive(ctx.seed, "hansen");
    for (int s = 0; s < ctx.hansen_samples; ++s) {
      // Contraction with sigma_1 = 1 and the rest in [0.1, 1].
      std::vector<double> sv(m);
      for (std::size_t i = 0; i < m; ++i) sv[i] = i == 0 ? 1.0 : rng.uniform(0.1, 1.0);
      const Matrix u = random_unitary(rng, m);
      const Matrix v = random_unitary(rng, m);
      const Matrix x = u * Matrix::diagonal(sv) * v;
      const SpdMatrix a = random_spd(rng, m);
      const SpdMatrix xax = congruence(x, a);
      const std::vector<SpdMatrix> inputs{a};
      for (double p : pg) {
        const Params at{{"sample", s}, {"p", p}};
        const SpdMatrix lhs = powm(xax, p);
        const SpdMatrix rhs = congruence(x, powm(a, p));
        const bool convex = (p >= 1.0) != ctx.negative_control;
        if (convex) r.compare("hansen_convex", margin(lhs, rhs), ctx.loewner_tol, at, &inputs);
        else r.compare("hansen_concave", margin(rhs, lhs), ctx.loewner_tol, at, &inputs);
      }
    }
  });
}

CheckReport check_renyi_entropy_major(std::size_t m, const CheckContext& ctx) {
  const auto& tg = ctx.grids.entropy_t;
  require_grid(tg, "renyi_entropy_major t", 0.0, 0.5, false);
  require(m >= 1, "renyi_entropy_major: dimension must be positive");
  return guarded("renyi_entropy_major", nullptr, false, [&](Recorder& r) {
    r.param("t", tg);
    const double mtol = ctx.majorization_tol(m);
    Rng rng = Rng::derive(ctx.seed, "renyi_entropy_major");
    bool t0_failed = false;
    for (int pair = 0; pair < ctx.entropy_pairs; ++pair) {
      const SpdMatrix a = random_spd(rng, m);
      const SpdMatrix b = random_spd(rng, m);
      const std::vector<SpdMatrix> inputs{a, b};
      const std::vector<double> s = singular_values(sqrtm(a) * sqrtm(b));
      for (double t : tg) {
        std::vector<double> zs;
        for (double z : {t, 0.5 * (t + 1.0), 1.0})
          if (z > 0.0 && std::find(zs.begin(), zs.end(), z) == zs.end()) zs.push_back(z);
        for (double z : zs) {
          const Params at{{"pair", pair}, {"t", t}, {"z", z}};
          const SpdMatrix q = renyi_entropy(a, b, t, z);
          const auto lq = q.eigenvalues();
          const std::vector<double> sq = singular_values(powm(a, t - 0.5) * q * powm(b, 0.5 - t));
          const auto vi = ctx.negative_control ? compare_vectors(s, lq, mtol) : compare_vectors(lq, s, mtol);
          const auto vii = ctx.negative_control ? compare_vectors(s, sq, mtol) : compare_vectors(sq, s, mtol);
          if (t == 0.0) {
            r.observe("entropy_i_t0", vi.log_margin(), mtol, at);
            r.observe("entropy_ii_t0", vii.log_margin(), mtol, at);
            t0_failed = t0_failed || vi.log_margin() < -mtol || vii.log_margin() < -mtol;
          } else {
            r.compare("entropy_i", vi.log_margin(), mtol, at, &inputs);
            r.compare("entropy_ii", vii.log_margin(), mtol, at, &inputs);
          }
        }
      }
    }
    if (std::find(tg.begin(), tg.end(), 0.0) != tg.end())
      r.note(std::string("t = 0 column recorded, not asserted") +
             (t0_failed ? " (violations observed)" : ""));
  });
}

CheckReport check_renyi_right_bounds(const Ensemble& e, const CheckContext& ctx) {
  const auto& grid = ctx.grids.renyi_tz;
  require_tz(grid, "renyi_right_bounds");
  return guarded("renyi_right_bounds", &e, false, [&](Recorder& r) {
    r.param("tz", tz_flat(grid));
    const std::size_t m = e.dim();
    const HermitianMatrix id = scaled_identity(m, 1.0);
    int raw_branch_skips = 0, upper_skips = 0;
    for (const TzPair& tz : grid) {
      const double t = tz.t, z = tz.z;
      const Params at{{"t", t}, {"z", z}};
      const SpdMatrix om = r.solved("renyi_right_mean", renyi_right_mean(e, t, z, ctx.solver), at);
      const double ex = 1.0 - t / z;

      // Arithmetic-mean comparison, on the raw ensemble when a branch applies
      // and on both normalizations.
      const SpdMatrix am = arithmetic_mean(e.powered(1.0 - t));
      if (loewner_leq(om, id, ctx.loewner_tol)) {
        r.compare("am_raw", margin(am, powm(om, ex)), ctx.loewner_tol, at);
      } else if (loewner_leq(id, om, ctx.loewner_tol)) {
        r.compare("am_raw", margin(powm(om, ex), am), ctx.loewner_tol, at);
      } else {
        ++raw_branch_skips;
      }
      for (bool below : {true, false}) {
        const double c = 1.0 / (below ? om.lambda_max() : om.lambda_min());
        const SpdMatrix oms = om.scaled(c);
        const SpdMatrix ams = arithmetic_mean(e.scaled(c).powered(1.0 - t));
        Params sat = at;
        sat["scale"] = c;
        if (below) r.compare("am_below_identity", margin(ams, powm(oms, ex)), ctx.loewner_tol, sat);
        else r.compare("am_above_identity", margin(powm(oms, ex), ams), ctx.loewner_tol, sat);
      }

      // Lower and upper bounds.
      const double s = (1.0 - t) / z;
      const double cc = (1.0 + z - t) / (1.0 - t);
      const double kappa = z / (1.0 - t);
      HermitianMatrix lower = scaled_identity(m, cc);
      lower.add_scaled(-kappa, weighted_powers(e, -s));
      r.compare("lower_bound", ctx.negative_control ? margin(om, lower) : margin(lower, om),
                ctx.loewner_tol, at);

      const HermitianMatrix sum_pos = weighted_powers(e, s);
      auto upper_for = [&](double scale) {
        HermitianMatrix u = scaled_identity(m, cc);
        u.add_scaled(-kappa * std::pow(scale, s), sum_pos);
        return inverse(SpdMatrix(u));
      };
      HermitianMatrix cond = scaled_identity(m, 1.0 + z - t);
      cond.add_scaled(-z, sum_pos);
      if (eigenvalues(cond).back() > 0.0) {
        r.compare("upper_bound_raw", margin(om, upper_for(1.0)), ctx.loewner_tol, at);
      } else {
        ++upper_skips;
      }
      // Scale so that lambda_max(sum w A^s) = 1, where the condition holds.
      const double c = std::pow(eigenvalues(sum_pos).front(), -1.0 / s);
      Params sat = at;
      sat["scale"] = c;
      r.compare("upper_bound_scaled", margin(om.scaled(c), upper_for(c)), ctx.loewner_tol, sat);
    }
    const double n = static_cast<double>(grid.size());
    r.row("am_raw_skip_rate", {}, raw_branch_skips / n);
    r.row("upper_bound_raw_skip_rate", {}, upper_skips / n);
    r.note("raw-ensemble arithmetic branch skipped " + std::to_string(raw_branch_skips) + "/" +
           std::to_string(grid.size()) + "; raw upper bound skipped " + std::to_string(upper_skips) +
           "/" + std::to_string(grid.size()));
  });
}

CheckReport check_renyi_norm_chain(const Ensemble& e, const CheckContext& ctx) {
  const auto& grid = ctx.grids.renyi_tz;
  require_tz(grid, "renyi_norm_chain");
  return guarded("renyi_norm_chain", &e, false, [&](Recorder& r) {
    r.param("tz", tz_flat(grid));
    for (const TzPair& tz : grid) {
      const double t = tz.t, z = tz.z;
      const Params at{{"t", t}, {"z", z}};
      const double n_om =
          operator_norm(r.solved("renyi_right_mean", renyi_right_mean(e, t, z, ctx.solver), at));
      double n_p = operator_norm(r.solved("power_mean", power_mean(e, 1.0 - t, ctx.solver), at));
      double n_q = operator_norm(quasi_arithmetic(e, (1.0 - t) / z));
      const double n_qneg = operator_norm(quasi_arithmetic(e, (t - 1.0) / z));
      if (ctx.negative_control) std::swap(n_p, n_q);
      r.compare("power_le_right_mean", relative_gap(n_p, n_om), ctx.norm_tol, at);
      r.compare("right_mean_le_quasi", relative_gap(n_om, n_q), ctx.norm_tol, at);
      r.compare("quasi_negative_le_right_mean", relative_gap(n_qneg, n_om), ctx.norm_tol, at);
    }
  });
}

CheckReport check_renyi_power_bounds(const Ensemble& e, const CheckContext& ctx) {
  const auto& grid = ctx.grids.renyi_power_tz;
  const auto& pg = ctx.grids.renyi_power_p;
  require_tz(grid, "renyi_power_bounds");
  require_grid(pg, "renyi_power_bounds p", 0.0, 1.0);
  return guarded("renyi_power_bounds", &e, false, [&](Recorder& r) {
    r.param("tz", tz_flat(grid));
    r.param("p", pg);
    const std::size_t m = e.dim();
    const HermitianMatrix id = scaled_identity(m, 1.0);
    double lam_max = 0.0, lam_min = kInf;
    for (const SpdMatrix& a : e.matrices()) {
      lam_max = std::max(lam_max, a.lambda_max());
      lam_min = std::min(lam_min, a.lambda_min());
    }
    const Ensemble below = e.scaled(1.0 / lam_max);
    const Ensemble above = e.scaled(1.0 / lam_min);
    for (const TzPair& tz : grid) {
      const double t = tz.t, z = tz.z;
      const Params at{{"t", t}, {"z", z}};
      std::vector<double> ps;
      for (double p : pg)
        if (p <= z) ps.push_back(p);
      if (ps.size() < pg.size())
        r.note("p values above z = " + fmt("%g", z) + " dropped for t = " + fmt("%g", t));

      // Order preservation and domination on A_j <= I.
      r.set_inputs(&below);
      const SpdMatrix rb =
          r.solved("renyi_power_mean", renyi_power_mean(below, t, z, ctx.solver), at);
      r.compare("order_below", margin(rb, id), ctx.loewner_tol, at);
      for (double p : ps) {
        Params pat = at;
        pat["p"] = p;
        r.compare("quasi_domination", margin(rb, quasi_arithmetic(below.powered(1.0 - t), 1.0 / p)),
                  ctx.loewner_tol, pat);
      }
      r.set_inputs(&above);
      const SpdMatrix ra =
          r.solved("renyi_power_mean", renyi_power_mean(above, t, z, ctx.solver), at);
      r.compare("order_above", margin(id, ra), ctx.loewner_tol, at);

      // Unscaled ensemble.
      r.set_inputs(&e);
      const SpdMatrix rm = r.solved("renyi_power_mean", renyi_power_mean(e, t, z, ctx.solver), at);
      for (double p : ps) {
        Params pat = at;
        pat["p"] = p;
        const SpdMatrix q = quasi_arithmetic(e.powered(1.0 - t), 1.0 / p).scaled(std::pow(lam_max, t));
        r.compare("lambda_max_corollary", margin(rm, q), ctx.loewner_tol, pat);
      }
      const SpdMatrix lhs = powm(rm, 0.5 * (1.0 - t));
      const HermitianMatrix rhs =
          std::pow(lam_max, -(1.0 - t) * (1.0 - z) / (2.0 * z)) * weighted_powers(e, (1.0 - t) / (2.0 * z));
      r.compare("final_lower_bound", ctx.negative_control ? margin(lhs, rhs) : margin(rhs, lhs),
                ctx.loewner_tol, at);
    }
  });
}

CheckReport check_compound_props(std::size_t m, const CheckContext& ctx) {
  require(m >= 2 && m <= 6, "compound_props: dimension must lie in [2, 6]");
  return guarded("compound_props", nullptr, false, [&](Recorder& r) {
    const double itol = ctx.identity_tol;
    const double otol = 1e-8;
    r.param("m", {static_cast<double>(m)});
    r.param("r", {-1.0, 0.5, 2.0});
    Rng rng = Rng::derive(ctx.seed, "compound_props");
    auto herm = [](const Matrix& x) { return HermitianMatrix::symmetrize(x); };
    for (int s = 0; s < ctx.compound_samples; ++s) {
      const Matrix x = random_gaussian(rng, m);
      const Matrix y = random_gaussian(rng, m);
      const SpdMatrix a = random_spd(rng, m);
      Matrix g = random_gaussian(rng, m);
      g *= 0.5;
      const SpdMatrix b(a.hermitian() + HermitianMatrix::symmetrize(multiply_adjoint(g, g)));
      const SpdMatrix c2 = random_spd(rng, m);
      const double c = rng.uniform(0.5, 2.0);
      const std::vector<SpdMatrix> ab{a, b};
      const std::vector<double> llp = leading_log_products(a);
      for (std::size_t k = 1; k <= m; ++k) {
        const Params at{{"sample", s}, {"k", static_cast<double>(k)}};
        const Matrix cid = compound_matrix(c * Matrix::identity(m), k);
        r.compare("scalar_identity",
                  -relative_frobenius(cid, std::pow(c, static_cast<double>(k)) *
                                               Matrix::identity(cid.dim())),
                  itol, at);
        const Matrix prod = ctx.negative_control ? compound_matrix(y * x, k) : compound_matrix(x * y, k);
        r.compare("multiplicative", -relative_frobenius(prod, compound_matrix(x, k) * compound_matrix(y, k)),
                  itol, at);
        const SpdMatrix ca(herm(compound_matrix(a, k)));
        for (double rr : {-1.0, 0.5, 2.0}) {
          Params rat = at;
          rat["r"] = rr;
          r.compare("power_commutes",
                    -relative_frobenius(powm(ca, rr).matrix(), compound_matrix(powm(a, rr), k)), itol,
                    rat, &ab);
        }
        r.compare("monotone", margin(ca.hermitian(), herm(compound_matrix(b, k))), otol, at, &ab);
        r.compare("top_eigenvalue_product", -std::abs(ca.lambda_max() / std::exp(llp[k - 1]) - 1.0), itol,
                  at, &ab);
      }
      // Weak log-majorization implies weak majorization.
      for (const SpdMatrix* other : {&b, &c2}) {
        const auto v = compare_matrices(a, *other, ctx.majorization_tol(m));
        if (!v.weakly()) continue;
        const auto la = a.eigenvalues();
        const auto lb = other->eigenvalues();
        double sa = 0.0, sb = 0.0, worst = kInf;
        for (std::size_t i = 0; i < m; ++i) {
          sa += la[i];
          sb += lb[i];
          worst = std::min(worst, (sb - sa) / (1.0 + sb));
        }
        r.compare("weak_log_implies_weak", worst, itol, {{"sample", s}});
      }
    }
  });
}

CheckReport probe_open_problems(const Ensemble& e, const CheckContext& ctx) {
  const auto& pg = ctx.grids.probe_p;
  const auto& tg = ctx.grids.probe_t;
  const auto& sg = ctx.grids.probe_s;
  require_grid(pg, "probe p", 0.0, kInf);
  require(std::adjacent_find(pg.begin(), pg.end(), std::less_equal<>()) == pg.end(),
          "probe: p grid must be strictly decreasing");
  require_grid(tg, "probe t", -1.0, 0.0, false);
  require(std::find(tg.begin(), tg.end(), 0.0) == tg.end(), "probe: t grid must be negative");
  require_grid(sg, "probe s", 0.0, kInf);
  require_tz(ctx.grids.probe_tz, "probe");
  return guarded("probe_open_problems", &e, true, [&](Recorder& r) {
    r.param("p", pg);
    r.param("t", tg);
    r.param("s", sg);
    r.param("tz", tz_flat(ctx.grids.probe_tz));
    const double mtol = ctx.majorization_tol(e.dim());
    for (double t : tg) {
      std::vector<SpdMatrix> terms;
      for (double p : pg)
        terms.push_back(
            powm(r.solved("power_mean", power_mean(e.powered(p), t, ctx.solver), {{"t", t}, {"p", p}}),
                 1.0 / p));
      for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
        const Params at{{"t", t}, {"p", pg[i + 1]}, {"q", pg[i]}};
        const double slack = compare_matrices(terms[i], terms[i + 1], mtol).weak_margin();
        r.observe("power_mean_weak_log_chain", slack, mtol, at);
        r.row("power_mean_weak_log_chain", at, slack);
      }
    }
    const SpdMatrix le = log_euclidean(e);
    for (const TzPair& tz : ctx.grids.probe_tz) {
      std::vector<double> dist;
      for (double s : sg) {
        const Params at{{"t", tz.t}, {"z", tz.z}, {"s", s}};
        const SpdMatrix x =
            r.solved("renyi_power_mean", renyi_power_mean(e.powered(s), tz.t, tz.z, ctx.solver), at);
        dist.push_back(thompson_distance(powm(x, 1.0 / s), le));
        r.row("renyi_power_lie_trotter_distance", at, dist.back());
      }
      double trend = kInf;
      for (std::size_t i = 0; i + 1 < dist.size(); ++i) trend = std::min(trend, dist[i] - dist[i + 1]);
      if (dist.size() < 2) trend = 0.0;
      r.observe("renyi_power_lie_trotter_trend", trend, 0.0, {{"t", tz.t}, {"z", tz.z}});
      r.row("renyi_power_lie_trotter_trend", {{"t", tz.t}, {"z", tz.z}}, trend);
    }
  });
}

// ---------------------------------------------------------------------------

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> registry = [] {
    auto dim = [](const Ensemble& e) { return e.dim(); };
    std::vector<CheckInfo> r{
        {"ando_hiai_power", true, check_ando_hiai_power},
        {"cartan_ando_hiai", true, check_cartan_ando_hiai},
        {"cartan_convergence", true, check_cartan_convergence},
        {"compound_props", true,
         [](const Ensemble& e, const CheckContext& c) {
           return check_compound_props(std::clamp<std::size_t>(e.dim(), 2, 6), c);
         }},
        {"hansen", true, [dim](const Ensemble& e, const CheckContext& c) { return check_hansen(dim(e), c); }},
        {"para_chain", true, check_para_chain},
        {"power_mean_major", true, check_power_mean_major},
        {"probe_open_problems", false, probe_open_problems},
        {"renyi_entropy_major", true,
         [dim](const Ensemble& e, const CheckContext& c) { return check_renyi_entropy_major(dim(e), c); }},
        {"renyi_norm_chain", true, check_renyi_norm_chain},
        {"renyi_power_bounds", true, check_renyi_power_bounds},
        {"renyi_right_bounds", true, check_renyi_right_bounds},
        {"yamazaki", true, check_yamazaki},
    };
    std::sort(r.begin(), r.end(), [](const CheckInfo& a, const CheckInfo& b) { return a.id < b.id; });
    return r;
  }();
  return registry;
}

const CheckInfo* find_check(std::string_view id) {
  for (const CheckInfo& c : check_registry())
    if (c.id == id) return &c;
  return nullptr;
}

std::vector<CheckReport> run_checks(const Ensemble& e, const CheckContext& ctx,
                                    const std::vector<std::string>& ids, unsigned threads) {
  std::vector<const CheckInfo*> selected;
  if (ids.empty()) {
    for (const CheckInfo& c : check_registry()) selected.push_back(&c);
  } else {
    for (const std::string& id : ids) {
      const CheckInfo* c = find_check(id);
      if (!c) throw DomainError("unknown check '" + id + "'");
      if (std::find(selected.begin(), selected.end(), c) == selected.end()) selected.push_back(c);
    }
    std::sort(selected.begin(), selected.end(),
              [](const CheckInfo* a, const CheckInfo* b) { return a->id < b->id; });
  }

  std::vector<CheckReport> out(selected.size());
  std::vector<std::exception_ptr> errors(selected.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < selected.size(); i = next++) {
      try {
        out[i] = selected[i]->run(e, ctx);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(selected.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& ex : errors)
    if (ex) std::rethrow_exception(ex);
  return out;
}

bool all_passed(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const CheckReport& r) { return r.probe || r.passed; });
}

}  // namespace pdmean
