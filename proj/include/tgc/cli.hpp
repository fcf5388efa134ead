#pragma once

// Set-specification parsing and the command runner behind the `tgc` tool.
//
// Input schema:
//   {"n": 2,
//    "sets": {"K0": {"kind": "log_generators", "data": [[-1, -2], [-2, -1]]},
//             "K1": {"kind": "polyradii",      "data": [[0.5, 0.25]]}}}
//
// Output is CSV (header comment lines starting with '#', then a table) or a
// JSON document; both carry the full run configuration.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tgc/capacity.hpp"
#include "tgc/error.hpp"
#include "tgc/logbody.hpp"
#include "tgc/measures.hpp"
#include "tgc/transform.hpp"

namespace tgc::cli {

using Json = nlohmann::ordered_json;

enum class SetKind { LogGenerators, Polyradii };

struct SetSpec {
  std::string name;
  SetKind kind = SetKind::LogGenerators;
  std::vector<Point> data;
  LogBody body;
};

struct SpecFile {
  std::size_t dim = 0;
  std::vector<SetSpec> sets;

  const SetSpec& find(const std::string& name) const {
    for (const auto& s : sets) {
      if (s.name == name) return s;
    }
    throw Error(ErrorCode::SchemaViolation, "no set named '" + name + "'");
  }
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, path + ": " + what);
}

inline std::vector<Point> read_points(const Json& data, std::size_t dim,
                                      const std::string& path) {
  if (!data.is_array()) schema_error(path, "expected an array of points");
  if (data.empty()) schema_error(path, "expected at least one point");
  std::vector<Point> points;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const std::string kpath = path + "/" + std::to_string(k);
    const auto& row = data[k];
    if (!row.is_array()) schema_error(kpath, "expected an array of numbers");
    if (row.size() != dim) {
      schema_error(kpath, "expected " + std::to_string(dim) + " coordinates, got " +
                              std::to_string(row.size()));
    }
    Point p;
    for (std::size_t l = 0; l < row.size(); ++l) {
      if (!row[l].is_number()) schema_error(kpath + "/" + std::to_string(l), "expected a number");
      p.push_back(row[l].get<double>());
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace detail

inline SpecFile parse_spec(std::string_view bytes) {
  Json doc;
  try {
    doc = Json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
  if (!doc.is_object()) detail::schema_error("", "top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "n" && key != "sets") detail::schema_error("/" + key, "unknown key");
  }
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
    detail::schema_error("/n", "expected a positive integer");
  }
  if (!doc.contains("sets") || !doc["sets"].is_object() || doc["sets"].empty()) {
    detail::schema_error("/sets", "expected a non-empty object");
  }
  SpecFile spec;
  spec.dim = static_cast<std::size_t>(doc["n"].get<long long>());
  for (const auto& [name, entry] : doc["sets"].items()) {
    const std::string path = "/sets/" + name;
    if (!entry.is_object()) detail::schema_error(path, "expected an object");
    for (const auto& [key, _] : entry.items()) {
      if (key != "kind" && key != "data") detail::schema_error(path + "/" + key, "unknown key");
    }
    if (!entry.contains("kind") || !entry["kind"].is_string()) {
      detail::schema_error(path + "/kind", "expected \"log_generators\" or \"polyradii\"");
    }
    if (!entry.contains("data")) detail::schema_error(path + "/data", "missing");
    const std::string kind = entry["kind"].get<std::string>();
    std::vector<Point> data = detail::read_points(entry["data"], spec.dim, path + "/data");
    std::vector<Point> generators = data;
    SetKind set_kind;
    if (kind == "log_generators") {
      set_kind = SetKind::LogGenerators;
    } else if (kind == "polyradii") {
      set_kind = SetKind::Polyradii;
      for (std::size_t k = 0; k < generators.size(); ++k) {
        for (std::size_t l = 0; l < spec.dim; ++l) {
          const double r = generators[k][l];
          if (!(r > 0.0 && r < 1.0)) {
            detail::schema_error(path + "/data/" + std::to_string(k) + "/" + std::to_string(l),
                                 "polyradius must lie in (0,1)");
          }
          generators[k][l] = std::log(r);
        }
      }
    } else {
      detail::schema_error(path + "/kind", "unknown kind '" + kind + "'");
    }
    try {
      LogBody body = LogBody::canonicalize(std::move(generators), spec.dim);
      spec.sets.push_back({name, set_kind, std::move(data), std::move(body)});
    } catch (const Error& e) {
      throw Error(e.code(), "set '" + name + "': " + e.what());
    }
  }
  return spec;
}

enum class Format { Csv, Json };

struct RunConfig {
  Method method = Method::Auto;
  double tolerance = 1e-8;
  std::uint64_t mc_samples = 1'000'000;
  std::uint64_t seed = 0;
  /// Explicit grid; empty means a uniform grid of grid_count points.
  std::vector<double> t_grid;
  std::size_t grid_count = 21;
  std::string output;
  Format format = Format::Csv;
  /// geodesic only
  double t = 0.5;
  std::vector<double> point;

  void validate() const {
    if (!(tolerance > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "--tol must be positive");
    if (mc_samples < 1000) {
      throw Error(ErrorCode::ParameterOutOfRange, "--mc-samples must be at least 1000");
    }
    for (double v : t_grid) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::ParameterOutOfRange, "t-grid values must lie in [0,1]");
      }
    }
    if (t_grid.empty() && grid_count < 2) {
      throw Error(ErrorCode::ParameterOutOfRange, "--t-grid needs at least 2 points");
    }
  }

  std::vector<double> grid() const { return t_grid.empty() ? uniform_grid(grid_count) : t_grid; }

  Budget budget() const {
    Budget b;
    b.tolerance = tolerance;
    b.samples = mc_samples;
    b.seed = seed;
    return b;
  }
};

struct Command {
  std::string name;
  std::string spec_path;
  std::vector<std::string> sets;
};

inline Method parse_method(std::string_view s) {
  if (s == "exact") return Method::Exact;
  if (s == "quadrature") return Method::Quadrature;
  if (s == "monte_carlo") return Method::MonteCarlo;
  if (s == "auto") return Method::Auto;
  throw Error(ErrorCode::ParameterOutOfRange, "unknown method '" + std::string(s) + "'");
}

/// Comma-separated reals.
inline std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item(text.substr(start, end - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw Error(ErrorCode::ParameterOutOfRange, "not a number: '" + item + "'");
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

/// "--t-grid 21" (uniform count) or "--t-grid 0,0.5,1" (explicit list).
inline void apply_grid_option(RunConfig& cfg, std::string_view text) {
  if (text.find(',') == std::string_view::npos) {
    std::size_t used = 0;
    long long count = 0;
    try {
      count = std::stoll(std::string(text), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || count < 2) {
      throw Error(ErrorCode::ParameterOutOfRange, "--t-grid expects a count >= 2 or a list");
    }
    cfg.grid_count = static_cast<std::size_t>(count);
    cfg.t_grid.clear();
  } else {
    cfg.t_grid = parse_list(text);
  }
}

namespace detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string grid_text(const RunConfig& cfg) {
  if (cfg.t_grid.empty()) return std::to_string(cfg.grid_count);
  std::string s;
  for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) s += (i ? "," : "") + num(cfg.t_grid[i]);
  return s;
}

inline Json config_json(const Command& cmd, const RunConfig& cfg) {
  Json j;
  j["command"] = cmd.name;
  j["spec"] = cmd.spec_path;
  j["sets"] = cmd.sets;
  j["method"] = std::string(to_string(cfg.method));
  j["tol"] = cfg.tolerance;
  j["mc_samples"] = cfg.mc_samples;
  j["seed"] = cfg.seed;
  j["t_grid"] = grid_text(cfg);
  if (cmd.name == "geodesic") {
    j["t"] = cfg.t;
    j["point"] = cfg.point;
  }
  return j;
}

inline std::string config_line(const Command& cmd, const RunConfig& cfg) {
  std::string sets;
  for (std::size_t i = 0; i < cmd.sets.size(); ++i) sets += (i ? "," : "") + cmd.sets[i];
  std::string line = "# tgc " + cmd.name + " spec=" + cmd.spec_path + " sets=" + sets +
                     " method=" + std::string(to_string(cfg.method)) + " tol=" + num(cfg.tolerance) +
                     " mc_samples=" + std::to_string(cfg.mc_samples) +
                     " seed=" + std::to_string(cfg.seed) + " t_grid=" + grid_text(cfg);
  if (cmd.name == "geodesic") {
    std::string pt;
    for (std::size_t i = 0; i < cfg.point.size(); ++i) pt += (i ? "," : "") + num(cfg.point[i]);
    line += " t=" + num(cfg.t) + " point=" + pt;
  }
  return line + "\n";
}

// A table is a column list plus rows of already-formatted cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

inline std::string cell_text(const Json& v) {
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << "\n";
  }
}

inline Json table_json(const Table& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  return rows;
}

inline Table sweep_table(const SweepReport& report) {
  Table t{{"t", "cap", "cap_err", "log_cap", "linear_bound", "geometric_bound", "margin_log"}, {}};
  for (const auto& r : report.records) {
    t.rows.push_back({r.t, r.cap, r.cap_err, r.log_cap, r.linear_bound, r.geometric_bound,
                      r.margin_log});
  }
  return t;
}

// Output document: the table plus named scalar results, rendered as CSV
// (scalars become trailing '# key=value' lines) or as JSON.
struct Document {
  Table table;
  std::vector<std::pair<std::string, Json>> results;
};

inline void emit(std::ostream& out, const Command& cmd, const RunConfig& cfg, const Document& doc) {
  if (cfg.format == Format::Json) {
    Json j;
    j["config"] = config_json(cmd, cfg);
    j["records"] = table_json(doc.table);
    for (const auto& [key, value] : doc.results) j[key] = value;
    out << j.dump(2) << "\n";
    return;
  }
  out << config_line(cmd, cfg);
  write_csv(out, doc.table);
  for (const auto& [key, value] : doc.results) out << "# " << key << "=" << cell_text(value) << "\n";
}

inline void require_sets(const Command& cmd, std::size_t count) {
  if (cmd.sets.size() != count) {
    throw Error(ErrorCode::ParameterOutOfRange, cmd.name + " expects " + std::to_string(count) +
                                                    " set name(s)");
  }
}

}  // namespace detail

/// Exit codes of run().
enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitVerdictFailure = 2 };

/// Runs one command on already-loaded spec bytes. Results go to out;
/// diagnostics go to err with an "error: " prefix.
inline int run(const Command& cmd, const RunConfig& cfg, std::string_view spec_bytes,
               std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    const SpecFile spec = parse_spec(spec_bytes);
    const Budget budget = cfg.budget();
    detail::Document doc;
    bool verdict = true;

    if (cmd.name == "capacity") {
      detail::require_sets(cmd, 1);
      const SetSpec& set = spec.find(cmd.sets[0]);
      const IntegralEstimate cov = covolume(set.body, cfg.method, budget);
      const IntegralEstimate cap = capacity(set.body, cfg.method, budget);
      doc.table = {{"set", "n", "method", "cap", "cap_err", "covolume", "covolume_err", "evaluations"},
                   {{set.name, spec.dim, std::string(to_string(cap.method)), cap.value, cap.error,
                     cov.value, cov.error, cap.evaluations}}};
    } else if (cmd.name == "volume") {
      detail::require_sets(cmd, 1);
      const SetSpec& set = spec.find(cmd.sets[0]);
      const IntegralEstimate vol = reinhardt_volume(set.body, cfg.method, budget);
      doc.table = {{"set", "n", "method", "volume", "volume_err", "evaluations"},
                   {{set.name, spec.dim, std::string(to_string(vol.method)), vol.value, vol.error,
                     vol.evaluations}}};
    } else if (cmd.name == "sweep") {
      detail::require_sets(cmd, 2);
      const SetSpec& a = spec.find(cmd.sets[0]);
      const SetSpec& b = spec.find(cmd.sets[1]);
      const SweepReport report = sweep(a.body, b.body, cfg.grid(), cfg.method, budget);
      doc.table = detail::sweep_table(report);
      doc.results = {{"dual_bm_holds", report.dual_bm_holds},
                     {"linear_bound_holds", report.linear_bound_holds},
                     {"equality_case", report.equality_case},
                     {"worst_margin_log", report.worst_margin_log}};
      verdict = report.ok();
    } else if (cmd.name == "check-bm") {
      detail::require_sets(cmd, 2);
      const SetSpec& a = spec.find(cmd.sets[0]);
      const SetSpec& b = spec.find(cmd.sets[1]);
      const std::vector<double> grid = cfg.grid();
      const SweepReport caps = sweep(a.body, b.body, grid, cfg.method, budget);
      const VolumeReport vols = check_volume_bm(a.body, b.body, grid, cfg.method, budget);
      const MarginEstimate margin = equality_margin(a.body, b.body, 0.5, cfg.method, budget);
      const double margin_tol = kSigmaFactor * margin.error + kRoundingSlack;
      const bool strict = caps.equality_case ? std::abs(margin.value) <= margin_tol
                                             : margin.value > margin_tol;
      doc.table = detail::sweep_table(caps);
      doc.table.columns.insert(doc.table.columns.end(), {"vol", "vol_err", "vol_margin_log"});
      for (std::size_t i = 0; i < doc.table.rows.size(); ++i) {
        const auto& v = vols.records[i];
        doc.table.rows[i].insert(doc.table.rows[i].end(), {v.vol, v.vol_err, v.margin_log});
      }
      doc.results = {{"dual_bm_holds", caps.dual_bm_holds},
                     {"linear_bound_holds", caps.linear_bound_holds},
                     {"volume_log_concave", vols.log_concavity_holds},
                     {"equality_case", caps.equality_case},
                     {"equality_margin", margin.value},
                     {"equality_margin_err", margin.error},
                     {"equality_dichotomy_holds", strict}};
      verdict = caps.ok() && vols.log_concavity_holds && strict;
    } else if (cmd.name == "geodesic") {
      detail::require_sets(cmd, 2);
      const SetSpec& a = spec.find(cmd.sets[0]);
      const SetSpec& b = spec.find(cmd.sets[1]);
      const GeodesicSpec geo(a.body, b.body, cfg.t);
      const PotentialValue pv = geodesic_value(geo, cfg.point);
      const double lower = subgeodesic_bound(geo, cfg.point);
      doc.table.columns = {"t", "value", "in_level_set", "subgeodesic_bound"};
      std::vector<Json> row{cfg.t, pv.value, pv.value <= -1.0 + kLevelTolerance, lower};
      for (std::size_t l = 0; l < cfg.point.size(); ++l) {
        doc.table.columns.push_back("s_" + std::to_string(l + 1));
        row.push_back(cfg.point[l]);
      }
      for (std::size_t l = 0; l < pv.maximizer.size(); ++l) {
        doc.table.columns.push_back("a_" + std::to_string(l + 1));
        row.push_back(pv.maximizer[l]);
      }
      doc.table.rows.push_back(std::move(row));
    } else {
      throw Error(ErrorCode::ParameterOutOfRange, "unknown command '" + cmd.name + "'");
    }

    detail::emit(out, cmd, cfg, doc);
    if (!verdict) {
      err << "error: VerdictFailure: inequality violated beyond tolerance for sets ";
      for (std::size_t i = 0; i < cmd.sets.size(); ++i) {
        const auto& set = spec.find(cmd.sets[i]);
        Json gens = set.body.generators();
        err << (i ? ", " : "") << set.name << "=" << gens.dump();
      }
      err << "\n";
      return kExitVerdictFailure;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace tgc::cli
