#include "pdmean/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdmean/error.hpp"
#include "pdmean/io.hpp"
#include "pdmean/majorize.hpp"
#include "pdmean/random.hpp"
#include "pdmean/verify.hpp"

#ifndef PDMEAN_VERSION
#define PDMEAN_VERSION "unknown"
#endif

namespace pdmean::cli {

namespace {

using json = nlohmann::json;

/// Input error raised by the front end itself.
class UsageError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "usage"; }
};

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n' || c == '\r') {
      out += ' ';
      continue;
    }
    out += c;
  }
  return out + "\"";
}

void report_error(std::ostream& err, std::string_view kind, std::string_view message,
                  const std::string* field = nullptr) {
  err << "error kind=" << kind;
  if (field) err << " field=" << quoted(*field);
  err << " message=" << quoted(message) << "\n";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw UsageError(what + ": invalid number '" + s + "'");
  return v;
}

long parse_int(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw UsageError(what + ": invalid integer '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const std::string& item : split(s, ',')) out.push_back(parse_real(item, what));
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + io::format_real(v[i]);
  return out;
}

std::string join(const std::vector<TzPair>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? "," : "") + io::format_real(v[i].t) + ":" + io::format_real(v[i].z);
  return out;
}

std::uint64_t resolve_seed(const std::optional<std::string>& flag) {
  auto parse = [](const std::string& s, const char* what) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || s.front() == '-')
      throw UsageError(std::string(what) + ": invalid seed '" + s + "'");
    return static_cast<std::uint64_t>(v);
  };
  if (flag) return parse(*flag, "--seed");
  if (const char* env = std::getenv("PDMEAN_SEED")) return parse(env, "PDMEAN_SEED");
  return 1;
}

struct SolverFlags {
  double tol = SolverConfig{}.tol;
  int max_iter = SolverConfig{}.max_iter;
  double damping = SolverConfig{}.damping;
  std::string init = "default";
  std::string init_file;

  void add(CLI::App& app) {
    app.add_option("--tol", tol, "Thompson-metric stopping tolerance");
    app.add_option("--max-iter", max_iter, "Iteration cap");
    app.add_option("--damping", damping, "Step size in (0, 1]");
    app.add_option("--init", init, "default | arithmetic | logeuclidean | identity | given");
    app.add_option("--init-file", init_file, "Starting matrix for --init given");
  }

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.damping = damping;
    if (init == "default") cfg.init = InitKind::Default;
    else if (init == "arithmetic") cfg.init = InitKind::ArithmeticMean;
    else if (init == "logeuclidean") cfg.init = InitKind::LogEuclidean;
    else if (init == "identity") cfg.init = InitKind::Identity;
    else if (init == "given") {
      if (init_file.empty()) throw UsageError("--init given requires --init-file");
      cfg.init = InitKind::Given;
      cfg.initial = io::parse_spd_matrix(io::read_file(init_file));
    } else {
      throw UsageError("unknown --init '" + init + "'");
    }
    if (!init_file.empty() && init != "given") throw UsageError("--init-file requires --init given");
    cfg.validate();
    return cfg;
  }

  void echo(std::map<std::string, std::string>& config) const {
    config["solver.tol"] = io::format_real(tol);
    config["solver.max_iter"] = std::to_string(max_iter);
    config["solver.damping"] = io::format_real(damping);
    config["solver.init"] = init;
  }
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) out << text;
  else io::write_file(path, text);
}

// ---- mean ----------------------------------------------------------------

struct MeanArgs {
  std::string input;
  std::string mean;
  std::optional<double> t, z;
  double p = 1.0;
  std::string out;
  SolverFlags solver;
};

double need(const std::optional<double>& v, const char* flag, const std::string& mean) {
  if (!v) throw UsageError("--mean " + mean + " requires " + flag);
  return *v;
}

int cmd_mean(const MeanArgs& a, std::ostream& out) {
  static const std::vector<std::string> names{"quasi",  "logeuclidean", "power",
                                              "cartan", "renyi-right",  "renyi-power"};
  if (std::find(names.begin(), names.end(), a.mean) == names.end())
    throw UsageError("unknown mean '" + a.mean + "'");
  if (!(a.p > 0.0)) throw DomainError("--p must be positive");
  const SolverConfig cfg = a.solver.config();
  const Ensemble base = io::parse_ensemble(io::read_file(a.input));
  const Ensemble e = a.p == 1.0 ? base : base.powered(a.p);

  SolveResult r{SpdMatrix::identity(e.dim()), 0, 0.0, 0.0, true};
  if (a.mean == "quasi") r.value = quasi_arithmetic(e, need(a.t, "--t", a.mean));
  else if (a.mean == "logeuclidean") r.value = log_euclidean(e);
  else if (a.mean == "power") r = power_mean(e, need(a.t, "--t", a.mean), cfg);
  else if (a.mean == "cartan") r = cartan_mean(e, cfg);
  else if (a.mean == "renyi-right")
    r = renyi_right_mean(e, need(a.t, "--t", a.mean), need(a.z, "--z", a.mean), cfg);
  else r = renyi_power_mean(e, need(a.t, "--t", a.mean), need(a.z, "--z", a.mean), cfg);
  if (a.p != 1.0) r.value = powm(r.value, 1.0 / a.p);

  json doc = json::parse(io::emit_matrix(r.value));
  json params = json::object();
  if (a.t) params["t"] = io::format_real(*a.t);
  if (a.z) params["z"] = io::format_real(*a.z);
  params["p"] = io::format_real(a.p);
  doc["summary"] = json{{"mean", a.mean},
                        {"params", params},
                        {"iterations", r.iterations},
                        {"residual", io::format_real(r.residual)},
                        {"equation_residual", io::format_real(r.equation_residual)},
                        {"converged", r.converged}};
  emit(a.out, doc.dump(2) + "\n", out);
  return r.converged ? kExitOk : kExitNonConvergence;
}

// ---- gen -----------------------------------------------------------------

struct GenArgs {
  long m = 3;
  long n = 3;
  double c = 1.5;
  std::optional<std::string> seed;
  std::string weights;
  std::string out;
};

Ensemble generate(long m, long n, double c, std::uint64_t seed, const std::string& weights) {
  if (m < 1 || n < 1) throw DomainError("m and n must be at least 1");
  if (!(c > 0.0)) throw DomainError("c must be positive");
  Rng rng = Rng::derive(seed, "ensemble");
  const bool random_weights = weights == "random";
  Ensemble e = random_ensemble(rng, static_cast<std::size_t>(m), static_cast<std::size_t>(n), c, random_weights);
  if (weights.empty() || random_weights || weights == "uniform") return e;
  std::vector<double> w = parse_list(weights, "--weights");
  if (w.size() != e.size())
    throw UsageError("--weights: expected " + std::to_string(e.size()) + " values, found " +
                     std::to_string(w.size()));
  return Ensemble(e.matrices(), WeightVector(std::move(w)));
}

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const Ensemble e = generate(a.m, a.n, a.c, resolve_seed(a.seed), a.weights);
  emit(a.out, io::emit_ensemble(e), out);
  return kExitOk;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
  std::string input;
  std::string gen;
  std::string checks = "all";
  std::optional<std::string> seed;
  std::vector<std::string> grids;
  std::string out;
  unsigned threads = 0;
  SolverFlags solver;
};

std::vector<TzPair> parse_tz_list(const std::string& s, const std::string& what) {
  std::vector<TzPair> out;
  for (const std::string& item : split(s, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw UsageError(what + ": expected t:z, found '" + item + "'");
    out.push_back({parse_real(parts[0], what), parse_real(parts[1], what)});
  }
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

using RealGrid = std::vector<double> CheckGrids::*;
using TzGrid = std::vector<TzPair> CheckGrids::*;

const std::map<std::string, RealGrid>& real_grids() {
  static const std::map<std::string, RealGrid> g{
      {"para_t", &CheckGrids::para_t},
      {"pmean_t", &CheckGrids::pmean_t},
      {"pmean_p", &CheckGrids::pmean_p},
      {"ando_hiai_t", &CheckGrids::ando_hiai_t},
      {"ando_hiai_p", &CheckGrids::ando_hiai_p},
      {"cartan_ando_hiai_p", &CheckGrids::cartan_ando_hiai_p},
      {"cartan_convergence_p", &CheckGrids::cartan_convergence_p},
      {"hansen_p", &CheckGrids::hansen_p},
      {"entropy_t", &CheckGrids::entropy_t},
      {"renyi_power_p", &CheckGrids::renyi_power_p},
      {"probe_p", &CheckGrids::probe_p},
      {"probe_t", &CheckGrids::probe_t},
      {"probe_s", &CheckGrids::probe_s},
  };
  return g;
}

const std::map<std::string, TzGrid>& tz_grids() {
  static const std::map<std::string, TzGrid> g{
      {"renyi_tz", &CheckGrids::renyi_tz},
      {"renyi_power_tz", &CheckGrids::renyi_power_tz},
      {"probe_tz", &CheckGrids::probe_tz},
  };
  return g;
}

void apply_grid(CheckGrids& grids, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw UsageError("--grid: expected name=values, found '" + spec + "'");
  const std::string name = spec.substr(0, eq);
  const std::string values = spec.substr(eq + 1);
  if (auto it = real_grids().find(name); it != real_grids().end())
    grids.*(it->second) = parse_list(values, "--grid " + name);
  else if (auto jt = tz_grids().find(name); jt != tz_grids().end())
    grids.*(jt->second) = parse_tz_list(values, "--grid " + name);
  else
    throw UsageError("--grid: unknown grid '" + name + "'");
}

struct GenSpec {
  long m = 3, n = 3;
  double c = 1.5;
  std::string weights;
};

GenSpec parse_gen_spec(const std::string& s) {
  GenSpec g;
  for (const std::string& item : split(s, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--gen: expected key=value, found '" + item + "'");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "m") g.m = parse_int(value, "--gen m");
    else if (key == "n") g.n = parse_int(value, "--gen n");
    else if (key == "c") g.c = parse_real(value, "--gen c");
    else if (key == "w") g.weights = value;
    else throw UsageError("--gen: unknown key '" + key + "'");
  }
  return g;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (!a.input.empty() && !a.gen.empty()) throw UsageError("--in and --gen are mutually exclusive");
  const std::uint64_t seed = resolve_seed(a.seed);

  std::vector<std::string> ids;
  if (a.checks != "all") {
    for (const std::string& id : split(a.checks, ','))
      if (id == "all") ids.clear();
      else ids.push_back(id);
  }
  for (const std::string& id : ids)
    if (!find_check(id)) throw UsageError("unknown check '" + id + "'");

  CheckContext ctx;
  ctx.solver = a.solver.config();
  ctx.seed = seed;
  for (const std::string& g : a.grids) apply_grid(ctx.grids, g);

  io::ReportFile report;
  report.tool_version = PDMEAN_VERSION;
  report.seed = seed;
  report.config["checks"] = a.checks;
  a.solver.echo(report.config);
  for (const auto& [name, member] : real_grids()) report.config["grid." + name] = join(ctx.grids.*member);
  for (const auto& [name, member] : tz_grids()) report.config["grid." + name] = join(ctx.grids.*member);

  std::optional<Ensemble> e;
  if (!a.input.empty()) {
    report.config["input"] = a.input;
    e = io::parse_ensemble(io::read_file(a.input));
  } else {
    const std::string spec = a.gen.empty() ? "m=3,n=3" : a.gen;
    report.config["gen"] = spec;
    const GenSpec g = parse_gen_spec(spec);
    e = generate(g.m, g.n, g.c, seed, g.weights);
  }

  const unsigned threads =
      a.threads ? a.threads : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  report.reports = run_checks(*e, ctx, ids, threads);
  report.solver_stats = io::aggregate_solver_stats(report.reports);
  emit(a.out, io::emit_report(report), out);
  if (!a.out.empty())
    for (const CheckReport& r : report.reports)
      out << r.check_id << " " << (r.probe ? "PROBE" : r.passed ? "PASS" : "FAIL")
          << " worst_slack=" << io::format_real(r.worst_slack) << "\n";

  if (all_passed(report.reports)) return kExitOk;
  for (const CheckReport& r : report.reports) {
    if (r.probe || r.passed) continue;
    for (const SolverStat& s : r.solver_stats)
      if (s.failures > 0) return kExitNonConvergence;
  }
  return kExitCheckFailed;
}

// ---- majorize ------------------------------------------------------------

struct MajorizeArgs {
  std::string x, y, a, b;
  std::optional<double> tol;
};

int cmd_majorize(const MajorizeArgs& m, std::ostream& out) {
  const bool lists = !m.x.empty() || !m.y.empty();
  const bool files = !m.a.empty() || !m.b.empty();
  if (lists == files) throw UsageError("give either --x and --y or --a and --b");
  std::vector<double> x, y;
  if (lists) {
    if (m.x.empty() || m.y.empty()) throw UsageError("--x and --y must both be given");
    x = parse_list(m.x, "--x");
    y = parse_list(m.y, "--y");
  } else {
    if (m.a.empty() || m.b.empty()) throw UsageError("--a and --b must both be given");
    const SpdMatrix a = io::parse_spd_matrix(io::read_file(m.a));
    const SpdMatrix b = io::parse_spd_matrix(io::read_file(m.b));
    x.assign(a.eigenvalues().begin(), a.eigenvalues().end());
    y.assign(b.eigenvalues().begin(), b.eigenvalues().end());
  }
  const MajorizationVerdict v =
      m.tol ? compare_vectors(x, y, *m.tol) : compare_vectors(x, y);
  out << "verdict " << to_string(v.verdict) << "\n";
  out << "tol " << io::format_real(v.tol) << "\n";
  out << "k slack\n";
  for (std::size_t k = 0; k < v.k_slacks.size(); ++k)
    out << (k + 1) << " " << io::format_real(v.k_slacks[k]) << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Means of positive definite matrices and checks of their inequalities", "pdmean"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(PDMEAN_VERSION));

  MeanArgs mean;
  CLI::App* mean_cmd = app.add_subcommand("mean", "Compute a mean of an ensemble file");
  mean_cmd->add_option("input,--in", mean.input, "Ensemble JSON file")->required();
  mean_cmd->add_option("--mean", mean.mean,
                       "quasi | logeuclidean | power | cartan | renyi-right | renyi-power")
      ->required();
  mean_cmd->add_option("--t", mean.t, "Mean parameter t");
  mean_cmd->add_option("--z", mean.z, "Renyi parameter z");
  mean_cmd->add_option("--p", mean.p, "Compute mean(A^p)^(1/p)");
  mean_cmd->add_option("--out", mean.out, "Result file (default: stdout)");
  mean.solver.add(*mean_cmd);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a seeded random ensemble");
  gen_cmd->add_option("--m", gen.m, "Matrix dimension");
  gen_cmd->add_option("--n", gen.n, "Number of matrices");
  gen_cmd->add_option("--c", gen.c, "Log-spectrum half-width");
  gen_cmd->add_option("--seed", gen.seed, "Seed (default: PDMEAN_SEED or 1)");
  gen_cmd->add_option("--weights", gen.weights, "uniform | random | comma-separated list");
  gen_cmd->add_option("--out", gen.out, "Output file (default: stdout)");

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run theorem checks on an ensemble");
  verify_cmd->add_option("input,--in", verify.input, "Ensemble JSON file");
  verify_cmd->add_option("--gen", verify.gen, "Generate the ensemble: m=3,n=3[,c=1.5][,w=random]");
  verify_cmd->add_option("--checks", verify.checks, "all or comma-separated check ids");
  verify_cmd->add_option("--seed", verify.seed, "Seed (default: PDMEAN_SEED or 1)");
  verify_cmd->add_option("--grid", verify.grids, "Grid override name=v1,v2 (t:z pairs for *_tz)");
  verify_cmd->add_option("--out", verify.out, "Report file (default: stdout)");
  verify_cmd->add_option("--threads", verify.threads, "Worker threads (default: up to 8)");
  verify.solver.add(*verify_cmd);

  MajorizeArgs maj;
  CLI::App* maj_cmd = app.add_subcommand("majorize", "Compare two spectra for log-majorization");
  maj_cmd->add_option("--x", maj.x, "Comma-separated positive values");
  maj_cmd->add_option("--y", maj.y, "Comma-separated positive values");
  maj_cmd->add_option("--a", maj.a, "Matrix JSON file (spectrum replaces --x)");
  maj_cmd->add_option("--b", maj.b, "Matrix JSON file (spectrum replaces --y)");
  maj_cmd->add_option("--tol", maj.tol, "Log-domain tolerance (default: 1e-8 * m)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return kExitInput;
  }

  try {
    if (mean_cmd->parsed()) return cmd_mean(mean, out);
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (verify_cmd->parsed()) return cmd_verify(verify, out);
    return cmd_majorize(maj, out);
  } catch (const ParseError& e) {
    report_error(err, e.kind(), e.what(), &e.field());
  } catch (const NumericalError& e) {
    report_error(err, e.kind(), e.what());
    return kExitNonConvergence;
  } catch (const Error& e) {
    report_error(err, e.kind(), e.what());
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
  }
  return kExitInput;
}

}  // namespace pdmean::cli
