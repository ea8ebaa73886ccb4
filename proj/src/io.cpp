#include "pdmean/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pdmean/error.hpp"

namespace pdmean::io {

namespace {

using json = nlohmann::json;

std::string at(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", std::string("invalid JSON: ") + e.what());
  }
}

const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw ParseError(path.empty() ? "$" : path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(at(path, key), "missing field");
  return *it;
}

const json* optional_member(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(path, "value is not finite");
  return d;
}

std::int64_t integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::string string_value(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError(path, "expected a string");
  return v.get<std::string>();
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path, "expected an array");
  return v;
}

json rows_of(const Matrix& m, bool imag) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_json(const Matrix& m) {
  return json{{"dim", m.dim()}, {"re", rows_of(m, false)}, {"im", rows_of(m, true)}};
}

/// Reads nested rows or a flat row-major array into an m x m grid.
std::vector<double> grid(const json& v, const std::string& path, std::size_t& m) {
  array(v, path);
  std::vector<double> out;
  const bool nested = !v.empty() && v.front().is_array();
  if (nested) {
    if (m == 0) m = v.size();
    if (v.size() != m)
      throw ParseError(path, "expected " + std::to_string(m) + " rows, found " + std::to_string(v.size()));
    for (std::size_t i = 0; i < m; ++i) {
      const json& row = array(v[i], at(path, i));
      if (row.size() != m)
        throw ParseError(at(path, i), "expected " + std::to_string(m) + " entries, found " +
                                          std::to_string(row.size()));
      for (std::size_t j = 0; j < m; ++j) out.push_back(number(row[j], at(at(path, i), j)));
    }
  } else {
    if (m == 0) {
      const auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v.size()))));
      if (r * r != v.size()) throw ParseError(path, "flat array length is not a perfect square");
      m = r;
    }
    if (v.size() != m * m)
      throw ParseError(path, "expected " + std::to_string(m * m) + " entries, found " + std::to_string(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], at(path, i)));
  }
  return out;
}

Matrix matrix_from(const json& obj, const std::string& path, std::size_t expected_dim) {
  std::size_t m = expected_dim;
  if (const json* d = obj.is_object() ? optional_member(obj, "dim") : nullptr) {
    const auto dim = integer(*d, at(path, "dim"));
    if (dim < 1) throw ParseError(at(path, "dim"), "must be positive");
    if (m != 0 && static_cast<std::size_t>(dim) != m)
      throw ParseError(at(path, "dim"), "does not match ensemble dimension " + std::to_string(m));
    m = static_cast<std::size_t>(dim);
  }
  const std::vector<double> re = grid(member(obj, path, "re"), at(path, "re"), m);
  std::vector<double> im(re.size(), 0.0);
  if (const json* v = optional_member(obj, "im")) im = grid(*v, at(path, "im"), m);
  if (m == 0) throw ParseError(at(path, "re"), "matrix must not be empty");
  Matrix out(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out(i, j) = cplx(re[i * m + j], im[i * m + j]);
  return out;
}

SpdMatrix spd_from(const json& obj, const std::string& path, std::size_t expected_dim) {
  const Matrix m = matrix_from(obj, path, expected_dim);
  try {
    return SpdMatrix(HermitianMatrix(m));
  } catch (const DomainError& e) {
    throw ParseError(path.empty() ? "$" : path, e.what());
  }
}

json real(double v) { return format_real(v); }

double real_from(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  const std::string s = string_value(v, path);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ParseError(path, "invalid real '" + s + "'");
  return d;
}

json reals(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(real(x));
  return a;
}

std::vector<double> reals_from(const json& v, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < array(v, path).size(); ++i) out.push_back(real_from(v[i], at(path, i)));
  return out;
}

json param_map(const std::map<std::string, double>& p) {
  json o = json::object();
  for (const auto& [k, v] : p) o[k] = real(v);
  return o;
}

std::map<std::string, double> param_map_from(const json& v, const std::string& path) {
  if (!v.is_object()) throw ParseError(path, "expected an object");
  std::map<std::string, double> out;
  for (auto it = v.begin(); it != v.end(); ++it) out[it.key()] = real_from(it.value(), at(path, it.key()));
  return out;
}

json stat_json(const SolverStat& s) {
  return json{{"solver", s.solver},
              {"calls", s.calls},
              {"failures", s.failures},
              {"total_iterations", s.total_iterations},
              {"max_iterations", s.max_iterations}};
}

SolverStat stat_from(const json& v, const std::string& path) {
  SolverStat s;
  s.solver = string_value(member(v, path, "solver"), at(path, "solver"));
  s.calls = static_cast<int>(integer(member(v, path, "calls"), at(path, "calls")));
  s.failures = static_cast<int>(integer(member(v, path, "failures"), at(path, "failures")));
  s.total_iterations = integer(member(v, path, "total_iterations"), at(path, "total_iterations"));
  s.max_iterations = static_cast<int>(integer(member(v, path, "max_iterations"), at(path, "max_iterations")));
  return s;
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ParseError(path, "expected a boolean");
  return v.get<bool>();
}

json report_json(const CheckReport& r) {
  json comps = json::array();
  for (const CheckComponent& c : r.components)
    comps.push_back(json{{"label", c.label},
                         {"worst_slack", real(c.worst_slack)},
                         {"tol", real(c.tol)},
                         {"count", c.count},
                         {"failures", c.failures},
                         {"asserted", c.asserted}});
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = reals(v);
  json table = json::array();
  for (const TableRow& row : r.table)
    table.push_back(json{{"label", row.label}, {"params", param_map(row.params)}, {"value", real(row.value)}});
  json stats = json::array();
  for (const SolverStat& s : r.solver_stats) stats.push_back(stat_json(s));
  json witness = nullptr;
  if (r.witness) {
    json mats = json::array();
    for (const SpdMatrix& m : r.witness->matrices) mats.push_back(matrix_json(m));
    witness = json{{"label", r.witness->label},
                   {"matrices", std::move(mats)},
                   {"weights", reals(r.witness->weights)},
                   {"params", param_map(r.witness->params)}};
  }
  return json{{"check_id", r.check_id},   {"passed", r.passed},
              {"probe", r.probe},         {"worst_slack", real(r.worst_slack)},
              {"tol", real(r.tol)},       {"components", std::move(comps)},
              {"params", std::move(params)}, {"table", std::move(table)},
              {"notes", r.notes},         {"solver_stats", std::move(stats)},
              {"witness", std::move(witness)}};
}

CheckReport report_from(const json& v, const std::string& path) {
  CheckReport r;
  r.check_id = string_value(member(v, path, "check_id"), at(path, "check_id"));
  r.passed = boolean(member(v, path, "passed"), at(path, "passed"));
  r.probe = boolean(member(v, path, "probe"), at(path, "probe"));
  r.worst_slack = real_from(member(v, path, "worst_slack"), at(path, "worst_slack"));
  r.tol = real_from(member(v, path, "tol"), at(path, "tol"));
  const std::string cp = at(path, "components");
  const json& comps = array(member(v, path, "components"), cp);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string p = at(cp, i);
    r.components.push_back({string_value(member(comps[i], p, "label"), at(p, "label")),
                            real_from(member(comps[i], p, "worst_slack"), at(p, "worst_slack")),
                            real_from(member(comps[i], p, "tol"), at(p, "tol")),
                            static_cast<int>(integer(member(comps[i], p, "count"), at(p, "count"))),
                            static_cast<int>(integer(member(comps[i], p, "failures"), at(p, "failures"))),
                            boolean(member(comps[i], p, "asserted"), at(p, "asserted"))});
  }
  const json& params = member(v, path, "params");
  if (!params.is_object()) throw ParseError(at(path, "params"), "expected an object");
  for (auto it = params.begin(); it != params.end(); ++it)
    r.params[it.key()] = reals_from(it.value(), at(at(path, "params"), it.key()));
  const std::string tp = at(path, "table");
  const json& table = array(member(v, path, "table"), tp);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string p = at(tp, i);
    r.table.push_back({string_value(member(table[i], p, "label"), at(p, "label")),
                       param_map_from(member(table[i], p, "params"), at(p, "params")),
                       real_from(member(table[i], p, "value"), at(p, "value"))});
  }
  const std::string np = at(path, "notes");
  const json& notes = array(member(v, path, "notes"), np);
  for (std::size_t i = 0; i < notes.size(); ++i) r.notes.push_back(string_value(notes[i], at(np, i)));
  const std::string sp = at(path, "solver_stats");
  const json& stats = array(member(v, path, "solver_stats"), sp);
  for (std::size_t i = 0; i < stats.size(); ++i) r.solver_stats.push_back(stat_from(stats[i], at(sp, i)));
  if (const json* w = optional_member(v, "witness")) {
    const std::string wp = at(path, "witness");
    Witness wit;
    wit.label = string_value(member(*w, wp, "label"), at(wp, "label"));
    const std::string mp = at(wp, "matrices");
    const json& mats = array(member(*w, wp, "matrices"), mp);
    for (std::size_t i = 0; i < mats.size(); ++i) wit.matrices.push_back(spd_from(mats[i], at(mp, i), 0));
    wit.weights = reals_from(member(*w, wp, "weights"), at(wp, "weights"));
    wit.params = param_map_from(member(*w, wp, "params"), at(wp, "params"));
    r.witness = std::move(wit);
  }
  return r;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string emit_matrix(const Matrix& m) { return matrix_json(m).dump(2) + "\n"; }

Matrix parse_matrix(std::string_view text) { return matrix_from(parse_text(text), "", 0); }

SpdMatrix parse_spd_matrix(std::string_view text) { return spd_from(parse_text(text), "", 0); }

std::string emit_ensemble(const Ensemble& e) {
  json mats = json::array();
  for (const SpdMatrix& a : e.matrices()) mats.push_back(matrix_json(a));
  const auto w = e.weights().values();
  return json{{"schema_version", kSchemaVersion},
              {"dim", e.dim()},
              {"weights", std::vector<double>(w.begin(), w.end())},
              {"matrices", std::move(mats)}}
             .dump(2) +
         "\n";
}

Ensemble parse_ensemble(std::string_view text) {
  const json doc = parse_text(text);
  if (!doc.is_object()) throw ParseError("$", "expected an object");
  if (const json* v = optional_member(doc, "schema_version")) {
    if (integer(*v, "schema_version") != kSchemaVersion)
      throw ParseError("schema_version", "unsupported version " + v->dump());
  }
  std::size_t m = 0;
  if (const json* d = optional_member(doc, "dim")) {
    const auto dim = integer(*d, "dim");
    if (dim < 1) throw ParseError("dim", "must be positive");
    m = static_cast<std::size_t>(dim);
  }
  const json& mats = array(member(doc, "", "matrices"), "matrices");
  if (mats.empty()) throw ParseError("matrices", "at least one matrix required");
  std::vector<SpdMatrix> list;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    list.push_back(spd_from(mats[i], at(std::string("matrices"), i), m));
    m = list.back().dim();
  }
  if (const json* w = optional_member(doc, "weights")) {
    array(*w, "weights");
    if (w->size() != list.size())
      throw ParseError("weights", "expected " + std::to_string(list.size()) + " weights, found " +
                                      std::to_string(w->size()));
    std::vector<double> weights;
    for (std::size_t i = 0; i < w->size(); ++i) {
      const double x = number((*w)[i], at(std::string("weights"), i));
      if (!(x > 0.0)) throw ParseError(at(std::string("weights"), i), "weights must be positive");
      weights.push_back(x);
    }
    return Ensemble(std::move(list), WeightVector(std::move(weights)));
  }
  return Ensemble(std::move(list));
}

std::vector<SolverStat> aggregate_solver_stats(const std::vector<CheckReport>& reports) {
  std::map<std::string, SolverStat> totals;
  for (const CheckReport& r : reports)
    for (const SolverStat& s : r.solver_stats) {
      SolverStat& t = totals[s.solver];
      t.solver = s.solver;
      t.calls += s.calls;
      t.failures += s.failures;
      t.total_iterations += s.total_iterations;
      t.max_iterations = std::max(t.max_iterations, s.max_iterations);
    }
  std::vector<SolverStat> out;
  for (auto& [name, s] : totals) out.push_back(s);
  return out;
}

std::string emit_report(const ReportFile& r) {
  json reports = json::array();
  for (const CheckReport& c : r.reports) reports.push_back(report_json(c));
  json stats = json::array();
  for (const SolverStat& s : r.solver_stats) stats.push_back(stat_json(s));
  json doc{{"schema_version", kSchemaVersion},
           {"tool", "pdmean"},
           {"tool_version", r.tool_version},
           {"seed", std::to_string(r.seed)},
           {"config", r.config},
           {"reports", std::move(reports)},
           {"solver_stats", std::move(stats)}};
  return doc.dump(2) + "\n";
}

ReportFile parse_report(std::string_view text) {
  const json doc = parse_text(text);
  ReportFile r;
  r.tool_version = string_value(member(doc, "", "tool_version"), "tool_version");
  const std::string seed = string_value(member(doc, "", "seed"), "seed");
  char* end = nullptr;
  r.seed = std::strtoull(seed.c_str(), &end, 10);
  if (seed.empty() || end != seed.c_str() + seed.size()) throw ParseError("seed", "invalid seed '" + seed + "'");
  const json& config = member(doc, "", "config");
  if (!config.is_object()) throw ParseError("config", "expected an object");
  for (auto it = config.begin(); it != config.end(); ++it)
    r.config[it.key()] = string_value(it.value(), at(std::string("config"), it.key()));
  const json& reports = array(member(doc, "", "reports"), "reports");
  for (std::size_t i = 0; i < reports.size(); ++i)
    r.reports.push_back(report_from(reports[i], at(std::string("reports"), i)));
  const json& stats = array(member(doc, "", "solver_stats"), "solver_stats");
  for (std::size_t i = 0; i < stats.size(); ++i)
    r.solver_stats.push_back(stat_from(stats[i], at(std::string("solver_stats"), i)));
  return r;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace pdmean::io
