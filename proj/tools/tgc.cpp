// tgc: capacities, volumes and geodesics of toric (Reinhardt) sets.
//
//   tgc capacity <spec> <set>
//   tgc volume   <spec> <set>
//   tgc sweep    <spec> <set0> <set1>
//   tgc check-bm <spec> <set0> <set1>
//   tgc geodesic <spec> <set0> <set1> --t T --point s1,...,sn

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "tgc/cli.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw tgc::Error(tgc::ErrorCode::SchemaViolation, "cannot read spec file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacities and psh geodesics of complete log-convex Reinhardt sets"};
  app.require_subcommand(1);

  tgc::cli::Command cmd;
  tgc::cli::RunConfig cfg;
  std::string method = "auto";
  std::string format = "csv";
  std::string grid = "21";
  std::string point;
  std::string seed_text;

  auto add_common = [&](CLI::App* sub, std::size_t set_count) {
    sub->add_option("spec", cmd.spec_path, "JSON set specification")->required();
    sub->add_option("sets", cmd.sets, "set name(s)")->required()->expected(static_cast<int>(set_count));
    sub->add_option("--method", method, "exact | quadrature | monte_carlo | auto");
    sub->add_option("--tol", cfg.tolerance, "relative tolerance for deterministic methods");
    sub->add_option("--mc-samples", cfg.mc_samples, "Monte Carlo sample count");
    sub->add_option("--seed", seed_text, "RNG seed (falls back to $TGC_SEED, then 0)");
    sub->add_option("--t-grid", grid, "grid point count or comma-separated list");
    sub->add_option("--out", cfg.output, "output file (default: stdout)");
    sub->add_option("--format", format, "csv | json");
  };

  auto* capacity = app.add_subcommand("capacity", "Monge-Ampere capacity in the unit polydisk");
  add_common(capacity, 1);
  auto* volume = app.add_subcommand("volume", "Euclidean volume of the Reinhardt set");
  add_common(volume, 1);
  auto* sweep = app.add_subcommand("sweep", "capacity along the geometric-mean interpolation");
  add_common(sweep, 2);
  auto* check = app.add_subcommand("check-bm", "capacity, volume and equality checks");
  add_common(check, 2);
  auto* geodesic = app.add_subcommand("geodesic", "geodesic potential at one point");
  add_common(geodesic, 2);
  geodesic->add_option("--t", cfg.t, "interpolation parameter in [0,1]")->required();
  geodesic->add_option("--point", point, "log-coordinates s1,...,sn (all <= 0)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tgc::cli::kExitInputError;
  }

  std::string bytes;
  try {
    cmd.name = app.get_subcommands().front()->get_name();
    cfg.method = tgc::cli::parse_method(method);
    if (format == "csv") {
      cfg.format = tgc::cli::Format::Csv;
    } else if (format == "json") {
      cfg.format = tgc::cli::Format::Json;
    } else {
      throw tgc::Error(tgc::ErrorCode::ParameterOutOfRange, "unknown format '" + format + "'");
    }
    if (seed_text.empty()) {
      if (const char* env = std::getenv("TGC_SEED")) seed_text = env;
    }
    if (!seed_text.empty()) {
      std::size_t used = 0;
      cfg.seed = std::stoull(seed_text, &used);
      if (used != seed_text.size()) {
        throw tgc::Error(tgc::ErrorCode::ParameterOutOfRange, "bad seed '" + seed_text + "'");
      }
    }
    tgc::cli::apply_grid_option(cfg, grid);
    if (!point.empty()) cfg.point = tgc::cli::parse_list(point);
    bytes = read_file(cmd.spec_path);
  } catch (const tgc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tgc::cli::kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: ParameterOutOfRange: " << e.what() << "\n";
    return tgc::cli::kExitInputError;
  }

  if (cfg.output.empty()) return tgc::cli::run(cmd, cfg, bytes, std::cout, std::cerr);
  std::ostringstream buffer;
  const int code = tgc::cli::run(cmd, cfg, bytes, buffer, std::cerr);
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << cfg.output << "'\n";
    return tgc::cli::kExitInputError;
  }
  out << buffer.str();
  return code;
}
